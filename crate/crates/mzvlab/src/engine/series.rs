//! Power-series workhorse behind every evaluation.
//!
//! A state is the coefficient vector of a partial iterated integral as a
//! series in z, truncated at `polylog_terms`. Appending a kernel at the top
//! maps coefficients linearly:
//!
//!   du/u:            c_m -> c_m / m
//!   du/(1-u):        c_m -> (c_0 + ... + c_{m-1}) / m
//!   general (ax,ay): c_m -> (ax c_m + ay prefix_{m-1}) / m
//!
//! Evaluation happens at z = 1/2, where every series converges geometrically,
//! and whole-interval values at 1 come from the midpoint convolution: for an
//! admissible word w, value(w) = sum over cuts of lower-piece(1/2) times
//! tau(upper-piece)(1/2). `two_chain_family` pushes that cut sum through the
//! ideals of a two-chains-under-a-top poset, so no linear extension is ever
//! enumerated; linearity of the kernel maps carries the ⊙ letters along.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::numerics::{BigReal, Mag};

use super::EngineConfig;

#[derive(Clone, Debug)]
pub(crate) enum EvalLetter {
    X,
    Y,
    /// du/(1-u) + t du/u, the ⊙ kernel.
    Circ(BigReal),
    /// du/u + t du/(1-u), the image of ⊙ under u -> 1-u.
    CircFlip(BigReal),
}

impl EvalLetter {
    fn complement(&self) -> EvalLetter {
        match self {
            EvalLetter::X => EvalLetter::Y,
            EvalLetter::Y => EvalLetter::X,
            EvalLetter::Circ(t) => EvalLetter::CircFlip(t.clone()),
            EvalLetter::CircFlip(t) => EvalLetter::Circ(t.clone()),
        }
    }

    /// Upper bound on the kernel coefficients, for the tail estimate.
    fn amax(&self) -> f64 {
        match self {
            EvalLetter::X | EvalLetter::Y => 1.0,
            EvalLetter::Circ(t) | EvalLetter::CircFlip(t) => match t.upper_mag().to_parts() {
                None => 1.0,
                Some((m, e)) => 1.0f64.max(m as f64 * (e as f64).exp2() * 1.000001),
            },
        }
    }
}

static INVS: OnceLock<Mutex<HashMap<(usize, usize), Arc<Vec<BigReal>>>>> = OnceLock::new();

/// 1/m for m = 1..=n at the given precision, globally cached.
fn inv_table(prec: usize, n: usize) -> Arc<Vec<BigReal>> {
    let map = INVS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = map.lock().unwrap();
    map.entry((prec, n))
        .or_insert_with(|| {
            let mut v = Vec::with_capacity(n + 1);
            v.push(BigReal::zero(prec)); // index 0 unused
            for m in 1..=n as u64 {
                v.push(BigReal::from_u64(m, prec).recip());
            }
            Arc::new(v)
        })
        .clone()
}

type Series = Vec<BigReal>;

pub(crate) struct SeriesCtx {
    prec: usize,
    n: usize,
    inv: Arc<Vec<BigReal>>,
    half: BigReal,
}

impl SeriesCtx {
    pub(crate) fn new(cfg: &EngineConfig) -> Self {
        SeriesCtx {
            prec: cfg.prec_bits,
            n: cfg.polylog_terms,
            inv: inv_table(cfg.prec_bits, cfg.polylog_terms),
            half: BigReal::half(cfg.prec_bits),
        }
    }

    /// The empty word: constant 1.
    fn unit(&self) -> Series {
        let mut c = vec![BigReal::zero(self.prec); self.n + 1];
        c[0] = BigReal::one(self.prec);
        c
    }

    fn apply(&self, l: &EvalLetter, c: &Series) -> Series {
        let mut out = Vec::with_capacity(self.n + 1);
        out.push(BigReal::zero(self.prec));
        match l {
            EvalLetter::X => {
                // integrating a constant against du/u diverges
                debug_assert!(c[0].is_zero());
                for m in 1..=self.n {
                    out.push(c[m].mul(&self.inv[m]));
                }
            }
            EvalLetter::Y => {
                let mut pre = c[0].clone();
                for m in 1..=self.n {
                    out.push(pre.mul(&self.inv[m]));
                    pre = pre.add(&c[m]);
                }
            }
            EvalLetter::Circ(t) => {
                let mut pre = c[0].clone();
                for m in 1..=self.n {
                    out.push(t.mul(&c[m]).add(&pre).mul(&self.inv[m]));
                    pre = pre.add(&c[m]);
                }
            }
            EvalLetter::CircFlip(t) => {
                let mut pre = c[0].clone();
                for m in 1..=self.n {
                    out.push(c[m].add(&t.mul(&pre)).mul(&self.inv[m]));
                    pre = pre.add(&c[m]);
                }
            }
        }
        out
    }

    fn add_series(&self, mut a: Series, b: &Series) -> Series {
        for (x, y) in a.iter_mut().zip(b) {
            *x = x.add(y);
        }
        a
    }

    /// Sum of the series at z = 1/2 plus a tail bound. `letters` is the
    /// number of kernel maps applied and `amax` their largest coefficient;
    /// coefficient sums over at most 2^letters extension words obey
    /// |c_m| <= (4 amax m)^letters, giving the geometric tail below.
    fn eval_half(&self, c: &Series, letters: usize, amax: f64) -> BigReal {
        let mut acc = BigReal::zero(self.prec);
        for m in (1..=self.n).rev() {
            acc = acc.add(&c[m]).mul(&self.half);
        }
        let acc = acc.add(&c[0]);
        let tail = Mag::from_f64(4.0 * amax * (self.n as f64 + 1.0))
            .powu(letters as u32)
            .mul(Mag::from_2pow(-(self.n as i64)))
            .mul_f64(1.1);
        acc.with_extra_err(tail)
    }
}

/// Values of the poset "left chain + top X + (rb right Y's)" for
/// rb = 0..=rb_max, all from one pass over the two ideal grids.
///
/// W(i,j) sums the series of all linear extensions of the ideal with i left
/// and j right vertices; V'(a,b) the tau-images of the complementary filters.
/// The value at rb is sum over ideals of eval(W) * eval(V'), plus the full
/// ideal's own evaluation (its filter is empty).
pub(crate) fn two_chain_family(
    ctx: &SeriesCtx,
    left: &[EvalLetter],
    rb_max: usize,
) -> Vec<BigReal> {
    assert!(!left.is_empty(), "left chain must contain the bottom letter");
    let la = left.len();
    let amax = left.iter().fold(1.0f64, |a, l| a.max(l.amax()));

    let mut e_w: Vec<Vec<BigReal>> = Vec::with_capacity(rb_max + 1);
    let mut e_top: Vec<BigReal> = Vec::with_capacity(rb_max + 1);
    let mut prev: Vec<Series> = Vec::new();
    for j in 0..=rb_max {
        let mut row: Vec<Series> = Vec::with_capacity(la + 1);
        for i in 0..=la {
            let s = match (i, j) {
                (0, 0) => ctx.unit(),
                (0, _) => ctx.apply(&EvalLetter::Y, &prev[0]),
                (_, 0) => ctx.apply(&left[i - 1], &row[i - 1]),
                _ => {
                    let a = ctx.apply(&left[i - 1], &row[i - 1]);
                    ctx.add_series(a, &ctx.apply(&EvalLetter::Y, &prev[i]))
                }
            };
            row.push(s);
        }
        e_w.push(
            row.iter()
                .enumerate()
                .map(|(i, s)| ctx.eval_half(s, i + j, amax))
                .collect(),
        );
        e_top.push(ctx.eval_half(&ctx.apply(&EvalLetter::X, &row[la]), la + j + 1, amax));
        prev = row;
    }

    let dual: Vec<EvalLetter> = left.iter().rev().map(|l| l.complement()).collect();
    let mut e_v: Vec<Vec<BigReal>> = Vec::with_capacity(rb_max + 1);
    let mut prev: Vec<Series> = Vec::new();
    for b in 0..=rb_max {
        let mut row: Vec<Series> = Vec::with_capacity(la + 1);
        for a in 0..=la {
            let s = match (a, b) {
                (0, 0) => ctx.apply(&EvalLetter::Y, &ctx.unit()),
                (0, _) => ctx.apply(&EvalLetter::X, &prev[0]),
                (_, 0) => ctx.apply(&dual[a - 1], &row[a - 1]),
                _ => {
                    let s = ctx.apply(&dual[a - 1], &row[a - 1]);
                    ctx.add_series(s, &ctx.apply(&EvalLetter::X, &prev[a]))
                }
            };
            row.push(s);
        }
        e_v.push(
            row.iter()
                .enumerate()
                .map(|(a, s)| ctx.eval_half(s, a + b + 1, amax))
                .collect(),
        );
        prev = row;
    }

    (0..=rb_max)
        .map(|rb| {
            let mut total = e_top[rb].clone();
            for i in 0..=la {
                for j in 0..=rb {
                    total = total.add(&e_w[j][i].mul(&e_v[rb - j][la - i]));
                }
            }
            total
        })
        .collect()
}

/// Series evaluation of a single word at z = 1/2 (no convolution); converges
/// for any word, trailing Y's included.
pub(crate) fn word_at_half(ctx: &SeriesCtx, letters: &[EvalLetter]) -> BigReal {
    let amax = letters.iter().fold(1.0f64, |a, l| a.max(l.amax()));
    let mut s = ctx.unit();
    for l in letters {
        s = ctx.apply(l, &s);
    }
    ctx.eval_half(&s, letters.len(), amax)
}
