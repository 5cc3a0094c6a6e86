//! The identity checks. Each builds both sides from scratch: left sides go
//! through the alternating-sum or interpolation machinery in [`crate::values`],
//! right sides are assembled directly from cached MZVs, closed forms, or the
//! brute-force oracle, so no code path is compared against itself.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::{gammaid, param, row, Bounds, CheckResult, SamplePoint, Task, Tols};
use crate::engine::{mpl_half, mzv_bruteforce, Engine, EngineConfig};
use crate::error::Result;
use crate::indices::{
    admissible_indices, box_fillings, compositions_nonneg, tpoly_add, tpoly_derivative,
    tpoly_scale, Index, TPoly,
};
use crate::numerics::{binomial, mag_to_bigfloat, value_le, BigReal, Mag};
use crate::posets::{poset_value, tmzv_poset};
use crate::values;

pub(super) fn collect_tasks<'a>(
    suite: &str,
    eng: &'a Engine,
    tols: &'a Tols,
    b: &Bounds,
    digits: usize,
    out: &mut Vec<Task<'a>>,
) {
    match suite {
        "main1" => {
            for k in 0..=b.kmax.unwrap_or(8) {
                out.push(Box::new(move || Ok(vec![main1_part1_row(eng, tols, k)?])));
            }
            for r in 1..=b.rmax.unwrap_or(3).max(1) {
                for k in 0..=b.kmax.unwrap_or(5) {
                    out.push(Box::new(move || Ok(vec![main1_part2_row(eng, tols, r, k)?])));
                }
            }
        }
        "main2" => {
            for n in 0..=b.nmax.unwrap_or(4) {
                for l in 0..=b.lmax.unwrap_or(3) {
                    out.push(Box::new(move || main2_rows(eng, tols, n, l)));
                }
            }
        }
        "main3" => {
            for k in 0..=b.kmax.unwrap_or(5) {
                for l in 0..=b.lmax.unwrap_or(3) {
                    out.push(Box::new(move || main3_rows(eng, tols, k, l)));
                }
            }
        }
        "sum-int" => {
            for k in 0..=b.kmax.unwrap_or(5) {
                out.push(Box::new(move || sum_int_rows(eng, tols, k)));
            }
        }
        "corollary" => {
            for k in 0..=b.kmax.unwrap_or(6) {
                out.push(Box::new(move || corollary_rows(eng, tols, k)));
            }
        }
        "remark" => {
            for p in 0..=b.pmax.unwrap_or(5) {
                out.push(Box::new(move || remark_rows(eng, tols, p)));
            }
        }
        "prop2" => {
            let prec = eng.cfg().prec_bits;
            for (l, x) in [(1u32, 0.3f64), (2, 0.3), (3, 0.5)] {
                out.push(Box::new(move || {
                    Ok(vec![gammaid::check_prop2(l, x, 100_000, tols, prec)?])
                }));
            }
        }
        "genfun" => {
            let prec = eng.cfg().prec_bits;
            for t in [0.0, 0.5, 1.0] {
                let pt = SamplePoint { x: 0.1, y: -0.2, t };
                out.push(Box::new(move || {
                    Ok(vec![gammaid::check_genfun_tmzv(pt, 16, 100_000, tols, prec)?])
                }));
            }
            for t in [0.5, 1.0] {
                let pt = SamplePoint { x: 0.1, y: -0.5, t };
                out.push(Box::new(move || {
                    Ok(vec![gammaid::check_genfun_takmzv(pt, 14, 1_000_000, tols, prec)?])
                }));
            }
        }
        "engine" => {
            for k in admissible_indices(5) {
                out.push(Box::new(move || Ok(vec![engine_oracle_row(eng, tols, &k)?])));
            }
            out.push(Box::new(move || engine_duality_rows(eng, tols)));
            out.push(Box::new(move || Ok(vec![engine_holder_row(eng, tols)?])));
            for parts in [vec![2u32], vec![1, 2], vec![2, 3]] {
                out.push(Box::new(move || {
                    let k = Index::new(parts)?;
                    Ok(vec![engine_precision_row(eng, tols, &k, digits)?])
                }));
            }
            out.push(Box::new(move || structural_fillings_rows(eng, tols)));
            for r in 1..=5u32 {
                for m in 1..=5u32 {
                    out.push(Box::new(move || Ok(vec![structural_xi_ones_row(eng, tols, r, m)?])));
                }
            }
            for k in admissible_indices(7) {
                out.push(Box::new(move || Ok(vec![deriv_tmzv_row(eng, tols, &k)?])));
            }
            for r in 0..=4u32 {
                for m in 0..=3u32 {
                    for l in 0..=r {
                        out.push(Box::new(move || Ok(vec![deriv_takmzv_row(eng, tols, r, m, l)?])));
                    }
                }
            }
        }
        other => unreachable!("suite {other} validated by the caller"),
    }
}

fn prec_of(eng: &Engine) -> usize {
    eng.cfg().prec_bits
}

fn tpoly_neg(p: &TPoly) -> TPoly {
    tpoly_scale(p, &BigReal::from_i64(-1, p.prec()))
}

fn ones_then(a: usize, last: u32) -> Result<Index> {
    let mut parts = vec![1u32; a];
    parts.push(last);
    Index::new(parts)
}

fn binom_u64(n: u64, k: u64) -> u64 {
    binomial(n, k).to_u64().expect("binomial fits in u64 at these bounds")
}

/// S_k against zeta(k+2) for even k and 0 for odd k.
pub(super) fn main1_part1_row(eng: &Engine, tols: &Tols, k: u32) -> Result<CheckResult> {
    let lhs = values::s_value(eng, k)?;
    let rhs = if k % 2 == 0 {
        values::zeta(eng, &Index::single(k + 2))?
    } else {
        BigReal::zero(prec_of(eng))
    };
    Ok(row("main1.part1", vec![param("k", k)], lhs, rhs, &tols.strong))
}

/// T_{r,k} against the zeta-star combination with binomial coefficients.
pub(super) fn main1_part2_row(eng: &Engine, tols: &Tols, r: u32, k: u32) -> Result<CheckResult> {
    let lhs = values::t_value(eng, r, k)?;
    let mut rhs = BigReal::zero(prec_of(eng));
    for bb in 0..=k / 2 {
        let a = k - 2 * bb;
        let mut parts = vec![a + r + 1];
        parts.extend(std::iter::repeat(2).take(bb as usize));
        let c = binom_u64((a + r - 1) as u64, (r - 1) as u64);
        let term = values::zeta_star(eng, &Index::new(parts)?)?.mul_u64(c);
        rhs = rhs.add(&if a % 2 == 1 { term.neg() } else { term });
    }
    Ok(row(
        "main1.part2",
        vec![param("r", r), param("k", k)],
        lhs,
        rhs,
        &tols.strong,
    ))
}

/// Interpolated alternating sum at depth parameter n, shift l; one row per
/// t-coefficient plus an explicit t=0 row against the zeta-star display.
pub(super) fn main2_rows(eng: &Engine, tols: &Tols, n: u32, l: u32) -> Result<Vec<CheckResult>> {
    let prec = prec_of(eng);
    let mut lhs = TPoly::zero(prec);
    for a in 0..=n {
        let bb = n - a;
        let mut part_sum = TPoly::zero(prec);
        for comp in compositions_nonneg(l, a as usize + 1) {
            let mut parts: Vec<u32> = comp.parts[..a as usize].iter().map(|p| p + 1).collect();
            parts.push(comp.parts[a as usize] + bb + 2);
            part_sum = tpoly_add(&part_sum, &values::zeta_t(eng, &Index::new(parts)?)?);
        }
        if bb % 2 == 1 {
            part_sum = tpoly_neg(&part_sum);
        }
        lhs = tpoly_add(&lhs, &part_sum);
    }

    let mut rhs = TPoly::zero(prec);
    for bb in 0..=n / 2 {
        let a = n - 2 * bb;
        let mut parts = vec![a + l + 2];
        parts.extend(std::iter::repeat(2).take(bb as usize));
        let c = binom_u64((a + l) as u64, l as u64);
        rhs.add_term(
            a as usize,
            &values::zeta_star(eng, &Index::new(parts)?)?.mul_u64(c),
        );
    }

    let mut rows = Vec::new();
    for j in 0..=n as usize {
        rows.push(row(
            "main2",
            vec![param("n", n), param("l", l), param("coeff", j)],
            lhs.coeff(j),
            rhs.coeff(j),
            &tols.soft,
        ));
    }
    let t0_rhs = if n % 2 == 0 {
        let mut parts = vec![l + 2];
        parts.extend(std::iter::repeat(2).take((n / 2) as usize));
        values::zeta_star(eng, &Index::new(parts)?)?
    } else {
        BigReal::zero(prec)
    };
    rows.push(row(
        "main2.t0",
        vec![param("n", n), param("l", l)],
        lhs.coeff(0),
        t0_rhs,
        &tols.soft,
    ));
    Ok(rows)
}

/// Interpolated integral-value alternating sum; coefficientwise rows plus the
/// t=0 row against (-1)^k zeta({1}^k, l+2).
pub(super) fn main3_rows(eng: &Engine, tols: &Tols, k: u32, l: u32) -> Result<Vec<CheckResult>> {
    let prec = prec_of(eng);
    let mut lhs = TPoly::zero(prec);
    for r in 0..=k {
        let m = k - r;
        let mut part_sum = TPoly::zero(prec);
        for comp in compositions_nonneg(l, r as usize + 1) {
            let parts: Vec<u32> = comp.parts.iter().map(|p| p + 1).collect();
            part_sum = tpoly_add(&part_sum, &values::xi_t(eng, &Index::new(parts)?, m + 1)?);
        }
        if m % 2 == 1 {
            part_sum = tpoly_neg(&part_sum);
        }
        lhs = tpoly_add(&lhs, &part_sum);
    }

    let mut rhs = TPoly::zero(prec);
    for bb in 0..=k {
        let a = k - bb;
        let c = binom_u64((bb + l) as u64, bb as u64);
        let z = values::zeta(eng, &ones_then(a as usize, bb + l + 2)?)?.mul_u64(c);
        rhs.add_term(bb as usize, &if a % 2 == 1 { z.neg() } else { z });
    }

    let mut rows = Vec::new();
    for j in 0..=k as usize {
        rows.push(row(
            "main3",
            vec![param("k", k), param("l", l), param("coeff", j)],
            lhs.coeff(j),
            rhs.coeff(j),
            &tols.soft,
        ));
    }
    let z = values::zeta(eng, &ones_then(k as usize, l + 2)?)?;
    rows.push(row(
        "main3.t0",
        vec![param("k", k), param("l", l)],
        lhs.coeff(0),
        if k % 2 == 1 { z.neg() } else { z },
        &tols.soft,
    ));
    Ok(rows)
}

/// Height-one special case of the integral-value sum; the t=0 row uses the
/// single zeta closed form, which the plain rows only reach through duality.
pub(super) fn sum_int_rows(eng: &Engine, tols: &Tols, k: u32) -> Result<Vec<CheckResult>> {
    let prec = prec_of(eng);
    let mut lhs = TPoly::zero(prec);
    for r in 0..=k {
        let m = k - r;
        let p = values::xi_t(eng, &Index::ones(r as usize + 1), m + 1)?;
        lhs = tpoly_add(&lhs, &if m % 2 == 1 { tpoly_neg(&p) } else { p });
    }
    let mut rhs = TPoly::zero(prec);
    for bb in 0..=k {
        let a = k - bb;
        let z = values::zeta(eng, &ones_then(a as usize, bb + 2)?)?;
        rhs.add_term(bb as usize, &if a % 2 == 1 { z.neg() } else { z });
    }
    let mut rows = Vec::new();
    for j in 0..=k as usize {
        rows.push(row(
            "sum-int",
            vec![param("k", k), param("coeff", j)],
            lhs.coeff(j),
            rhs.coeff(j),
            &tols.soft,
        ));
    }
    let z = values::zeta(eng, &Index::single(k + 2))?;
    rows.push(row(
        "sum-int.t0",
        vec![param("k", k)],
        lhs.coeff(0),
        if k % 2 == 1 { z.neg() } else { z },
        &tols.soft,
    ));
    Ok(rows)
}

/// Three-way agreement: eta alternating sum, MZV alternating sum, and the
/// closed form 2(1 - 2^-(k+1)) zeta(k+2) for even k (0 for odd k).
pub(super) fn corollary_rows(eng: &Engine, tols: &Tols, k: u32) -> Result<Vec<CheckResult>> {
    let prec = prec_of(eng);
    let mut eta_sum = BigReal::zero(prec);
    for r in 0..=k {
        let m = k - r;
        let term = values::eta(eng, r + 1, m + 1)?;
        eta_sum = eta_sum.add(&if m % 2 == 1 { term.neg() } else { term });
    }
    let mut mzv_sum = BigReal::zero(prec);
    for a in 0..=k {
        let bb = k - a;
        let term = values::zeta(eng, &ones_then(a as usize, bb + 2)?)?;
        mzv_sum = mzv_sum.add(&if a % 2 == 1 { term.neg() } else { term });
    }
    let closed = if k % 2 == 0 {
        let one = BigReal::from_u64(1, prec);
        let z = values::zeta(eng, &Index::single(k + 2))?;
        one.sub(&BigReal::pow2(-(k as i64 + 1), prec)).mul(&z).mul_u64(2)
    } else {
        BigReal::zero(prec)
    };
    Ok(vec![
        row(
            "corollary",
            vec![param("k", k), param("pair", "eta-mzv")],
            eta_sum.clone(),
            mzv_sum.clone(),
            &tols.soft,
        ),
        row(
            "corollary",
            vec![param("k", k), param("pair", "eta-closed")],
            eta_sum,
            closed.clone(),
            &tols.soft,
        ),
        row(
            "corollary",
            vec![param("k", k), param("pair", "mzv-closed")],
            mzv_sum,
            closed,
            &tols.soft,
        ),
    ])
}

/// All p+1 coefficients of the height-one interpolated value equal zeta(p+2).
pub(super) fn remark_rows(eng: &Engine, tols: &Tols, p: u32) -> Result<Vec<CheckResult>> {
    let poly = values::zeta_t(eng, &ones_then(p as usize, 2)?)?;
    let z = values::zeta(eng, &Index::single(p + 2))?;
    Ok((0..=p as usize)
        .map(|j| {
            row(
                "remark",
                vec![param("p", p), param("coeff", j)],
                poly.coeff(j),
                z.clone(),
                &tols.strong,
            )
        })
        .collect())
}

/// Convolution engine against the direct truncated sum. The tolerance is the
/// combined rigorous error (x9/8 so it strictly dominates it); agreement
/// within that budget is exactly what the two error analyses promise.
pub(super) fn engine_oracle_row(eng: &Engine, _tols: &Tols, k: &Index) -> Result<CheckResult> {
    let prec = prec_of(eng);
    let lhs = eng.mzv_cached(k)?;
    let rhs = mzv_bruteforce(k, eng.cfg().oracle_terms)?;
    let budget = lhs.err().add(rhs.err()).mul_f64(1.125);
    let tol = BigReal::from_parts(mag_to_bigfloat(budget, prec), Mag::ZERO, prec);
    Ok(row("engine.oracle", vec![param("index", k)], lhs, rhs, &tol))
}

pub(super) fn engine_duality_rows(eng: &Engine, tols: &Tols) -> Result<Vec<CheckResult>> {
    let pairs: [(&[u32], &[u32]); 2] = [(&[1, 2], &[3]), (&[1, 1, 2], &[4])];
    let mut rows = Vec::new();
    for (a, bparts) in pairs {
        let ka = Index::new(a.to_vec())?;
        let kb = Index::new(bparts.to_vec())?;
        let lhs = eng.mzv_cached(&ka)?;
        let rhs = eng.mzv_cached(&kb)?;
        rows.push(row(
            "engine.duality",
            vec![param("lhs", &ka), param("rhs", &kb)],
            lhs,
            rhs,
            &tols.strong,
        ));
    }
    Ok(rows)
}

/// zeta(2) = 2 Li_2(1/2) + ln^2 2: the midpoint convolution collapsed by hand.
pub(super) fn engine_holder_row(eng: &Engine, tols: &Tols) -> Result<CheckResult> {
    let prec = prec_of(eng);
    let k2 = Index::single(2);
    let lhs = eng.mzv_cached(&k2)?;
    let ln2 = BigReal::from_u64(2, prec).ln()?;
    let rhs = mpl_half(&k2, eng.cfg()).mul_u64(2).add(&ln2.mul(&ln2));
    Ok(row("engine.holder", Vec::new(), lhs, rhs, &tols.strong))
}

/// Recomputing at 15 more digits and rounding back must land within the
/// strong tolerance of the base-precision value.
pub(super) fn engine_precision_row(
    eng: &Engine,
    tols: &Tols,
    k: &Index,
    digits: usize,
) -> Result<CheckResult> {
    let prec = prec_of(eng);
    let hi = Engine::new(EngineConfig::for_digits(digits + 15));
    let v_hi = hi.mzv_cached(k)?;
    let sig = digits + 10;
    // decimal round-trip: half-ulp of the printed string, values here are < 2
    let reparse_slack = Mag::from_f64(2.0 * 10f64.powi(-(sig as i32 - 1)));
    let rhs = BigReal::parse_decimal(&v_hi.to_decimal(sig), prec)?
        .with_extra_err(v_hi.err())
        .with_extra_err(reparse_slack);
    let lhs = eng.mzv_cached(k)?;
    Ok(row("engine.precision", vec![param("index", k)], lhs, rhs, &tols.strong))
}

/// The interpolation poset must reproduce the box-filling enumeration as a
/// multiset of (t-power, index) pairs; the row counts mismatches.
pub(super) fn structural_fillings_rows(eng: &Engine, _tols: &Tols) -> Result<Vec<CheckResult>> {
    let prec = prec_of(eng);
    let half = BigReal::from_ratio(
        &num_bigint::BigInt::from(1),
        &num_bigint::BigInt::from(2),
        prec,
    );
    let mut rows = Vec::new();
    for k in admissible_indices(6) {
        let ws = poset_value(&tmzv_poset(&k)?)?;
        let got: BTreeMap<(u32, Index), u64> =
            ws.terms.iter().cloned().map(|(t, i, m)| ((t, i), m)).collect();
        let mut want: BTreeMap<(u32, Index), u64> = BTreeMap::new();
        for (filled, sigma) in box_fillings(&k)? {
            *want.entry((sigma, filled)).or_insert(0) += 1;
        }
        let mut mismatch = 0u64;
        for (key, w) in &want {
            mismatch += w.abs_diff(got.get(key).copied().unwrap_or(0));
        }
        for (key, g) in &got {
            if !want.contains_key(key) {
                mismatch += g;
            }
        }
        rows.push(row(
            "structural.fillings",
            vec![param("k", &k)],
            BigReal::from_u64(mismatch, prec),
            BigReal::zero(prec),
            &half,
        ));
    }
    Ok(rows)
}

/// xi on all-ones indices has the closed form C(m+r-1, r) zeta(m+r).
pub(super) fn structural_xi_ones_row(
    eng: &Engine,
    tols: &Tols,
    r: u32,
    m: u32,
) -> Result<CheckResult> {
    let lhs = values::xi(eng, &Index::ones(r as usize), m)?;
    let c = binom_u64((m + r - 1) as u64, r as u64);
    let rhs = values::zeta(eng, &Index::single(m + r))?.mul_u64(c);
    Ok(row(
        "structural.xi-ones",
        vec![param("r", r), param("m", m)],
        lhs,
        rhs,
        &tols.strong,
    ))
}

/// One row per polynomial pair: reports the worst coefficient, passes only if
/// every coefficient is within tolerance.
fn worst_coeff_row(
    name: &str,
    mut params: Vec<(String, String)>,
    a: &TPoly,
    b: &TPoly,
    tol: &BigReal,
) -> CheckResult {
    let n = a.coeffs().len().max(b.coeffs().len()).max(1);
    let mut worst = 0usize;
    let mut worst_res: Option<astro_float::BigFloat> = None;
    let mut all = true;
    for j in 0..n {
        let r = row(name, Vec::new(), a.coeff(j), b.coeff(j), tol);
        if !r.pass {
            all = false;
        }
        let bigger = worst_res.as_ref().map_or(true, |w| !value_le(&r.residual, w));
        if bigger {
            worst = j;
            worst_res = Some(r.residual);
        }
    }
    params.push(param("coeff", worst));
    let mut out = row(name, params, a.coeff(worst), b.coeff(worst), tol);
    out.pass = all;
    out
}

/// Formal t-derivative of the interpolated value against its combinatorial
/// expansion as a sum over single merges.
pub(super) fn deriv_tmzv_row(eng: &Engine, tols: &Tols, k: &Index) -> Result<CheckResult> {
    let formal = tpoly_derivative(&values::zeta_t(eng, k)?);
    let comb = values::tmzv_derivative_sum(eng, k)?;
    Ok(worst_coeff_row(
        "structural.deriv-tmzv",
        vec![param("k", k)],
        &formal,
        &comb,
        &tols.soft,
    ))
}

/// l-fold formal derivative of the all-ones interpolated integral value
/// against the composition-sum expansion.
pub(super) fn deriv_takmzv_row(
    eng: &Engine,
    tols: &Tols,
    r: u32,
    m: u32,
    l: u32,
) -> Result<CheckResult> {
    let mut formal = values::xi_t(eng, &Index::ones(r as usize + 1), m + 1)?;
    for _ in 0..l {
        formal = tpoly_derivative(&formal);
    }
    let comb = values::takmzv_derivative_sum(eng, r, m, l)?;
    Ok(worst_coeff_row(
        "structural.deriv-takmzv",
        vec![param("r", r), param("m", m), param("l", l)],
        &formal,
        &comb,
        &tols.soft,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Tols;

    fn setup() -> (Engine, Tols) {
        let cfg = EngineConfig::for_digits(40);
        let prec = cfg.prec_bits;
        (Engine::new(cfg), Tols::for_digits(40, prec))
    }

    #[test]
    fn main1_smallest_cases() {
        let (eng, tols) = setup();
        for k in 0..=2 {
            let r = main1_part1_row(&eng, &tols, k).unwrap();
            assert!(r.pass, "k={k} residual {:?}", r.residual);
        }
        let r = main1_part2_row(&eng, &tols, 1, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.params, vec![param("r", 1), param("k", 1)]);
    }

    #[test]
    fn main2_small_grid() {
        let (eng, tols) = setup();
        for (n, l) in [(0u32, 0u32), (1, 1), (2, 0)] {
            for r in main2_rows(&eng, &tols, n, l).unwrap() {
                assert!(r.pass, "main2 ({n},{l}) row {:?} failed", r.params);
            }
        }
    }

    #[test]
    fn main3_and_sum_int_small() {
        let (eng, tols) = setup();
        for r in main3_rows(&eng, &tols, 1, 1).unwrap() {
            assert!(r.pass, "main3 row {:?}", r.params);
        }
        for r in sum_int_rows(&eng, &tols, 2).unwrap() {
            assert!(r.pass, "sum-int row {:?}", r.params);
        }
    }

    #[test]
    fn corollary_and_remark_small() {
        let (eng, tols) = setup();
        for k in 0..=1 {
            for r in corollary_rows(&eng, &tols, k).unwrap() {
                assert!(r.pass, "corollary k={k} {:?}", r.params);
            }
        }
        for r in remark_rows(&eng, &tols, 2).unwrap() {
            assert!(r.pass);
        }
    }

    #[test]
    fn engine_rows_small() {
        let (eng, tols) = setup();
        let r = engine_holder_row(&eng, &tols).unwrap();
        assert!(r.pass);
        for r in engine_duality_rows(&eng, &tols).unwrap() {
            assert!(r.pass);
        }
        for r in structural_fillings_rows(&eng, &tols).unwrap() {
            assert!(r.pass);
        }
        let r = structural_xi_ones_row(&eng, &tols, 2, 2).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn deriv_rows_small() {
        let (eng, tols) = setup();
        let k = Index::new(vec![1, 2]).unwrap();
        let r = deriv_tmzv_row(&eng, &tols, &k).unwrap();
        assert!(r.pass);
        let r = deriv_takmzv_row(&eng, &tols, 2, 0, 1).unwrap();
        assert!(r.pass);
    }
}
