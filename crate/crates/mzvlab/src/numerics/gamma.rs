//! Gamma, digamma, and exact binomials.
//!
//! Gamma and digamma shift the argument up until it is at least prec/3 and
//! then apply the Stirling asymptotic series. For positive real arguments the
//! series remainder is bounded by the first omitted term, which is folded
//! into the error bound, so the results carry sound absolute errors.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::bernoulli::bernoulli;
use super::mag::Mag;
use super::real::BigReal;
use crate::error::{Error, Result};

/// C(n, k), exactly; 0 when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - k + 1 + i) / (i + 1);
    }
    acc
}

struct StirlingTable {
    /// B_{2j} / (2j (2j-1)) for the log-gamma series, j = 1..
    lg: Vec<BigReal>,
    /// B_{2j} / (2j) for the digamma series, j = 1..
    psi: Vec<BigReal>,
    half_ln_2pi: BigReal,
}

static TABLES: OnceLock<Mutex<HashMap<usize, Arc<StirlingTable>>>> = OnceLock::new();

fn table(prec: usize) -> Arc<StirlingTable> {
    let map = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = map.lock().unwrap();
    map.entry(prec)
        .or_insert_with(|| {
            // generous term count; the evaluation loops stop much earlier
            let jmax = prec / 5 + 16;
            let mut lg = Vec::with_capacity(jmax);
            let mut psi = Vec::with_capacity(jmax);
            for j in 1..=jmax {
                let b = bernoulli(2 * j);
                let tj = BigInt::from(2 * j as u64);
                let lg_den = b.denom() * (&tj * BigInt::from(2 * j as u64 - 1));
                lg.push(BigReal::from_ratio(b.numer(), &lg_den, prec));
                let psi_den = b.denom() * &tj;
                psi.push(BigReal::from_ratio(b.numer(), &psi_den, prec));
            }
            let pi2 = BigReal::pi(prec).mul_u64(2);
            let half_ln_2pi = pi2.ln().expect("2*pi > 0").mul(&BigReal::half(prec));
            Arc::new(StirlingTable { lg, psi, half_ln_2pi })
        })
        .clone()
}

/// ln Gamma(y) for y >= prec/3, by the Stirling series.
fn ln_gamma_big(y: &BigReal, tab: &StirlingTable) -> BigReal {
    let prec = y.prec();
    let cut = -(prec as i64 + 16);
    let lny = y.ln().expect("argument is positive");
    let half = BigReal::half(prec);
    let mut res = y.sub(&half).mul(&lny).sub(y).add(&tab.half_ln_2pi);
    let inv = y.recip();
    let inv2 = inv.mul(&inv);
    let mut pw = inv;
    let mut tail = Mag::ZERO;
    for (j, c) in tab.lg.iter().enumerate() {
        let term = c.mul(&pw);
        if term.upper_mag().le_2pow(cut) {
            // remainder of the asymptotic series is below the first omitted term
            tail = term.upper_mag();
            break;
        }
        assert!(j + 1 < tab.lg.len(), "Stirling table exhausted");
        res = res.add(&term);
        pw = pw.mul(&inv2);
    }
    res.with_extra_err(tail)
}

/// psi(y) for y >= prec/3.
fn digamma_big(y: &BigReal, tab: &StirlingTable) -> BigReal {
    let prec = y.prec();
    let cut = -(prec as i64 + 16);
    let lny = y.ln().expect("argument is positive");
    let inv = y.recip();
    let mut res = lny.sub(&inv.mul(&BigReal::half(prec)));
    let inv2 = inv.mul(&inv);
    let mut pw = inv2.clone();
    let mut tail = Mag::ZERO;
    for (j, c) in tab.psi.iter().enumerate() {
        let term = c.mul(&pw);
        if term.upper_mag().le_2pow(cut) {
            tail = term.upper_mag();
            break;
        }
        assert!(j + 1 < tab.psi.len(), "Stirling table exhausted");
        res = res.sub(&term);
        pw = pw.mul(&inv2);
    }
    res.with_extra_err(tail)
}

fn shift_count(x: &BigReal) -> u64 {
    let thresh = x.prec() as f64 / 3.0;
    let xf = x.to_f64_approx();
    if xf >= thresh {
        0
    } else {
        (thresh - xf).ceil() as u64
    }
}

fn check_positive(x: &BigReal, what: &str) -> Result<()> {
    if x.is_zero() || x.is_negative() {
        return Err(Error::Domain(format!("{what} requires a positive argument")));
    }
    Ok(())
}

pub fn gamma(x: &BigReal) -> Result<BigReal> {
    check_positive(x, "gamma")?;
    let prec = x.prec();
    let tab = table(prec);
    let n = shift_count(x);
    let y = x.add(&BigReal::from_u64(n, prec));
    let g_big = ln_gamma_big(&y, &tab).exp();
    // Gamma(x) = Gamma(x + n) / (x (x+1) ... (x+n-1))
    let mut denom = BigReal::one(prec);
    for i in 0..n {
        denom = denom.mul(&x.add(&BigReal::from_u64(i, prec)));
    }
    Ok(g_big.div(&denom))
}

pub fn digamma(x: &BigReal) -> Result<BigReal> {
    check_positive(x, "digamma")?;
    let prec = x.prec();
    let tab = table(prec);
    let n = shift_count(x);
    let y = x.add(&BigReal::from_u64(n, prec));
    let mut res = digamma_big(&y, &tab);
    // psi(x) = psi(x + n) - sum_{i<n} 1/(x+i)
    for i in 0..n {
        res = res.sub(&x.add(&BigReal::from_u64(i, prec)).recip());
    }
    Ok(res)
}
