//! Bernoulli numbers as exact rationals.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gamma::binomial;

static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();

/// B_n with B_1 = -1/2; computed by the defining recurrence
/// sum_{j<=m} C(m+1, j) B_j = 0 and cached globally.
pub fn bernoulli(n: usize) -> BigRational {
    let cache = CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut v = cache.lock().unwrap();
    while v.len() <= n {
        let m = v.len();
        let mut s = BigRational::zero();
        for (j, b) in v.iter().enumerate() {
            s += BigRational::from(BigInt::from(binomial(m as u64 + 1, j as u64))) * b;
        }
        let b_m = -s / BigRational::from(BigInt::from(m as u64 + 1));
        v.push(b_m);
    }
    v[n].clone()
}
