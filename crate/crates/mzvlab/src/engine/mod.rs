//! Evaluation engine: multiple polylogarithms at the midpoint, whole
//! multiple zeta values through the midpoint convolution, and a cache
//! keyed by index and precision.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::indices::Index;
use crate::numerics::{mag_from_serialized, BigReal, Mag};
use crate::posets::{word_of_index, Letter};

mod oracle;
mod series;

pub use oracle::mzv_bruteforce;
pub(crate) use series::{two_chain_family, word_at_half, EvalLetter, SeriesCtx};

/// Largest index weight the default series cutoff budgets for.
pub const MAX_WEIGHT: usize = 20;

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub prec_bits: usize,
    /// Series truncation N; the 2^-N tail with its polynomial prefactor
    /// must stay below the precision target, see `for_prec_bits`.
    pub polylog_terms: usize,
    pub oracle_terms: u64,
}

impl EngineConfig {
    pub fn for_digits(digits: usize) -> Self {
        let prec_bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32;
        Self::for_prec_bits(prec_bits)
    }

    pub fn for_prec_bits(prec_bits: usize) -> Self {
        let lg = (prec_bits as f64).log2().ceil() as usize;
        // keep N >= prec + 2 log2(prec) * maxweight so the tail prefactor
        // (4(N+1))^weight never eats into the target precision
        let floor = prec_bits + 2 * lg * MAX_WEIGHT;
        let decay = (1.1 * prec_bits as f64).ceil() as usize + 64;
        EngineConfig {
            prec_bits,
            polylog_terms: decay.max(floor),
            oracle_terms: 1_000_000,
        }
    }
}

pub(crate) fn eval_letters(k: &Index) -> Vec<EvalLetter> {
    let mut out = Vec::with_capacity(k.weight() as usize);
    for &p in k.parts() {
        out.push(EvalLetter::Y);
        out.extend(std::iter::repeat_n(EvalLetter::X, p as usize - 1));
    }
    out
}

fn eval_letter_of(l: &Letter) -> EvalLetter {
    match l {
        Letter::X => EvalLetter::X,
        Letter::Y => EvalLetter::Y,
    }
}

/// Li_k(1/2); any positive parts, trailing 1 included, empty index gives 1.
pub fn mpl_half(k: &Index, cfg: &EngineConfig) -> BigReal {
    let ctx = SeriesCtx::new(cfg);
    word_at_half(&ctx, &eval_letters(k))
}

/// ζ(k) by the midpoint convolution over the word of k.
pub fn mzv(k: &Index, cfg: &EngineConfig) -> Result<BigReal> {
    let w = word_of_index(k)?;
    let letters: Vec<EvalLetter> = w.letters()[..w.len() - 1]
        .iter()
        .map(eval_letter_of)
        .collect();
    let ctx = SeriesCtx::new(cfg);
    Ok(two_chain_family(&ctx, &letters, 0).pop().unwrap())
}

type CacheMap = HashMap<(Index, usize), BigReal>;

pub struct Engine {
    cfg: EngineConfig,
    cache: Mutex<CacheMap>,
}

impl Engine {
    pub fn new(cfg: EngineConfig) -> Self {
        Engine { cfg, cache: Mutex::new(HashMap::new()) }
    }

    pub fn cfg(&self) -> &EngineConfig {
        &self.cfg
    }

    /// As `mzv`, but consulting the cache first. Concurrent misses may both
    /// compute; the result is identical either way, first insert wins.
    pub fn mzv_cached(&self, k: &Index) -> Result<BigReal> {
        let key = (k.clone(), self.cfg.prec_bits);
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = mzv(k, &self.cfg)?;
        Ok(self
            .cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(v)
            .clone())
    }

    /// One record per line: `index=... prec=... value=... err=...` with exact
    /// dyadic decimals, so reloading at the same precision is bit-identical.
    pub fn save_cache(&self, path: &Path) -> Result<usize> {
        let cache = self.cache.lock().unwrap();
        let mut keys: Vec<&(Index, usize)> = cache.keys().collect();
        keys.sort();
        let mut out = String::new();
        for key in &keys {
            let v = &cache[*key];
            writeln!(
                out,
                "index={} prec={} value={} err={}",
                key.0,
                key.1,
                v.value_exact_decimal(),
                v.err_decimal()
            )
            .unwrap();
        }
        std::fs::write(path, out)?;
        Ok(keys.len())
    }

    pub fn load_cache(&self, path: &Path) -> Result<usize> {
        let text = std::fs::read_to_string(path)?;
        let mut loaded = 0;
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields: HashMap<&str, &str> = HashMap::new();
            for tok in line.split_whitespace() {
                let (k, v) = tok
                    .split_once('=')
                    .ok_or_else(|| Error::Usage(format!("bad cache line: {line}")))?;
                fields.insert(k, v);
            }
            let get = |name: &str| {
                fields
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::Usage(format!("cache line missing {name}: {line}")))
            };
            let index: Index = get("index")?.parse()?;
            let prec: usize = get("prec")?
                .parse()
                .ok()
                .filter(|&p| p >= 64)
                .ok_or_else(|| Error::Usage(format!("bad prec in cache line: {line}")))?;
            let value = BigReal::parse_decimal(get("value")?, prec)?;
            let err_str = get("err")?;
            let err = if err_str == "0" {
                Mag::ZERO
            } else {
                mag_from_serialized(BigReal::parse_decimal(err_str, 64)?.value())
            };
            let v = BigReal::from_parts(value.value().clone(), err, prec);
            self.cache.lock().unwrap().insert((index, prec), v);
            loaded += 1;
        }
        Ok(loaded)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{mag_to_bigfloat, value_le};

    fn idx(parts: &[u32]) -> Index {
        Index::new(parts.to_vec()).unwrap()
    }

    fn cfg60() -> EngineConfig {
        EngineConfig::for_digits(60)
    }

    fn assert_close(v: &BigReal, oracle: &str, tol_2pow: i64) {
        let o = BigReal::parse_decimal(oracle, v.prec()).unwrap();
        let r = v.residual(&o);
        assert!(
            value_le(&r, &mag_to_bigfloat(Mag::from_2pow(tol_2pow), v.prec())),
            "off by {}",
            crate::numerics::format_exact(&r)
        );
    }

    #[test]
    fn config_budgets() {
        let c = cfg60();
        assert_eq!(c.prec_bits, 232);
        assert_eq!(c.polylog_terms, 552);
        let lg = (c.prec_bits as f64).log2().ceil() as usize;
        assert!(c.polylog_terms >= c.prec_bits + 2 * lg * MAX_WEIGHT);
    }

    #[test]
    fn polylogs_at_half() {
        let c = cfg60();
        assert_close(
            &mpl_half(&idx(&[1]), &c),
            "0.6931471805599453094172321214581765680755001343602552541206800094933936",
            -195,
        );
        assert_close(
            &mpl_half(&idx(&[2]), &c),
            "0.582240526465012505902656320159680108744198474806126425434347047873171",
            -195,
        );
        assert_close(
            &mpl_half(&idx(&[3]), &c),
            "0.5372131936080402009406232255949658266704024993403781706897619307183241",
            -195,
        );
        assert_close(
            &mpl_half(&idx(&[1, 1]), &c),
            "0.2402265069591007123335512631633324858652764757972727934334320668118327",
            -195,
        );
        assert_close(
            &mpl_half(&idx(&[1, 2]), &c),
            "0.09475300423012770572182500642030949148626887231779458482549863724708769",
            -195,
        );
        assert_close(
            &mpl_half(&idx(&[2, 1]), &c),
            "0.2140723708667062274342131253496904175577139333724336304304077913703248",
            -195,
        );
        assert_close(
            &mpl_half(&idx(&[1, 1, 2]), &c),
            "0.01413423721499000878947451196128316133598072293741275534180439754010205",
            -195,
        );
        assert_close(&mpl_half(&Index::empty(), &c), "1", -195);
    }

    #[test]
    fn mpl_matches_blockwise_recurrence() {
        // same truncated sum organized per part instead of per letter:
        // T_j(M) = sum_{m<=M} T_{j-1}(m-1)/m^{k_j}
        let c = EngineConfig::for_digits(30);
        let p = c.prec_bits;
        let n = c.polylog_terms as u64;
        for parts in [&[2][..], &[1, 2], &[2, 1], &[1, 1, 2]] {
            let k = idx(parts);
            let r = k.depth();
            let mut t = vec![BigReal::zero(p); r + 1];
            t[0] = BigReal::one(p);
            let mut acc = BigReal::zero(p);
            let half = BigReal::half(p);
            let mut pw = BigReal::one(p);
            for m in 1..=n {
                let inv = BigReal::from_u64(m, p).recip();
                pw = pw.mul(&half);
                let last = t[r - 1].mul(&inv.powu(parts[r - 1] as u64));
                acc = acc.add(&pw.mul(&last));
                for j in (1..r).rev() {
                    let step = t[j - 1].mul(&inv.powu(parts[j - 1] as u64));
                    t[j] = t[j].add(&step);
                }
                t[r] = t[r].add(&last);
            }
            let fast = mpl_half(&k, &c);
            let tol = mag_to_bigfloat(
                fast.err().add(acc.err()).add(Mag::from_2pow(-(p as i64))),
                p,
            );
            assert!(
                value_le(&fast.residual(&acc), &tol),
                "{k}: {}",
                crate::numerics::format_exact(&fast.residual(&acc))
            );
        }
    }

    #[test]
    fn single_zetas() {
        let c = cfg60();
        assert_close(
            &mzv(&idx(&[2]), &c).unwrap(),
            "1.644934066848226436472415166646025189218949901206798437735558229370007",
            -195,
        );
        assert_close(
            &mzv(&idx(&[3]), &c).unwrap(),
            "1.202056903159594285399738161511449990764986292340498881792271555341838",
            -195,
        );
        assert_close(
            &mzv(&idx(&[8]), &c).unwrap(),
            "1.004077356197944339378685238508652465258960790649850020329110202652583",
            -195,
        );
    }

    #[test]
    fn depth_two_zetas() {
        let c = cfg60();
        assert_close(
            &mzv(&idx(&[2, 2]), &c).unwrap(),
            "0.8117424252833536436370027724058759270810632139390451807622321615830905",
            -190,
        );
        assert_close(
            &mzv(&idx(&[1, 3]), &c).unwrap(),
            "0.2705808084277845478790009241352919756936877379796817269207440538610302",
            -190,
        );
        assert_close(
            &mzv(&idx(&[2, 3]), &c).unwrap(),
            "0.2288103976033537597687461489416887919325093427198821602294071026932254",
            -190,
        );
        assert_close(
            &mzv(&idx(&[3, 2]), &c).unwrap(),
            "0.7115661975505724320969738060864026120925612044383392364922224964576861",
            -190,
        );
    }

    #[test]
    fn holder_self_consistency() {
        let c = cfg60();
        let z2 = mzv(&idx(&[2]), &c).unwrap();
        let li2 = mpl_half(&idx(&[2]), &c);
        let li1 = mpl_half(&idx(&[1]), &c);
        let rhs = li2.mul_u64(2).add(&li1.mul(&li1));
        let tol = mag_to_bigfloat(z2.err().add(rhs.err()), c.prec_bits);
        assert!(value_le(&z2.residual(&rhs), &tol));
    }

    #[test]
    fn duality_spot_checks() {
        let c = cfg60();
        for (a, b) in [(&[1u32, 2][..], &[3u32][..]), (&[1, 1, 2], &[4])] {
            let va = mzv(&idx(a), &c).unwrap();
            let vb = mzv(&idx(b), &c).unwrap();
            let tol = mag_to_bigfloat(va.err().add(vb.err()), c.prec_bits);
            assert!(value_le(&va.residual(&vb), &tol));
        }
    }

    #[test]
    fn brute_force_agrees_with_convolution() {
        let c = cfg60();
        for parts in [&[2][..], &[1, 3], &[2, 1, 2]] {
            let fast = mzv(&idx(parts), &c).unwrap();
            let slow = mzv_bruteforce(&idx(parts), 20_000).unwrap();
            let tol = mag_to_bigfloat(fast.err().add(slow.err()), 96);
            let r = fast.value().sub(slow.value(), 96, astro_float::RoundingMode::ToEven).abs();
            assert!(value_le(&r, &tol));
        }
    }

    #[test]
    fn precision_is_monotone() {
        let lo = EngineConfig::for_digits(30);
        let hi = EngineConfig::for_digits(60);
        let k = idx(&[2, 3]);
        let vlo = mzv(&k, &lo).unwrap();
        let vhi = mzv(&k, &hi).unwrap();
        let vhi_lo = BigReal::parse_decimal(&vhi.to_decimal(45), lo.prec_bits).unwrap();
        let tol = mag_to_bigfloat(
            vlo.err().add(vhi_lo.err()).add(Mag::from_2pow(-140)),
            lo.prec_bits,
        );
        assert!(value_le(&vlo.residual(&vhi_lo), &tol));
    }

    #[test]
    fn rejects_nonadmissible() {
        let c = EngineConfig::for_digits(20);
        assert!(mzv(&idx(&[1, 1]), &c).is_err());
        assert!(mzv(&Index::empty(), &c).is_err());
    }

    #[test]
    fn cache_hits_are_bit_identical() {
        let eng = Engine::new(EngineConfig::for_digits(30));
        let k = idx(&[2, 3]);
        let a = eng.mzv_cached(&k).unwrap();
        let b = eng.mzv_cached(&k).unwrap();
        assert_eq!(a.value().cmp(b.value()), Some(0));
        assert_eq!(a.err().to_parts(), b.err().to_parts());
    }

    #[test]
    fn cache_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.txt");
        let eng = Engine::new(EngineConfig::for_digits(30));
        let k = idx(&[1, 3]);
        let orig = eng.mzv_cached(&k).unwrap();
        assert_eq!(eng.save_cache(&path).unwrap(), 1);

        let eng2 = Engine::new(EngineConfig::for_digits(30));
        assert_eq!(eng2.load_cache(&path).unwrap(), 1);
        let back = eng2.mzv_cached(&k).unwrap();
        assert_eq!(orig.value().cmp(back.value()), Some(0));
        // reloaded err may carry conversion slack but must still cover
        assert!(back.err().ge(orig.err().mul_f64(0.99)));
    }

    #[test]
    fn distinct_precisions_are_distinct_keys() {
        let eng30 = Engine::new(EngineConfig::for_digits(30));
        let eng15 = Engine::new(EngineConfig::for_digits(15));
        let k = idx(&[2]);
        let a = eng30.mzv_cached(&k).unwrap();
        let b = eng15.mzv_cached(&k).unwrap();
        assert_ne!(a.prec(), b.prec());
    }
}
