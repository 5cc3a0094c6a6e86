//! Deterministic decimal rendering.
//!
//! Everything here works on exact integer decompositions (value = M * 2^E)
//! so the same input always yields the same string, independent of any
//! platform float formatting. `format_exact` emits the full dyadic value,
//! which re-parses bit-identically at the same precision.

use astro_float::{BigFloat, Sign};
use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::mag::Mag;

/// Exact decomposition: value = (-1)^neg * M * 2^E with M > 0.
/// None for zero (and for non-finite values, which callers exclude).
pub(crate) fn decompose(x: &BigFloat) -> Option<(BigUint, i64, bool)> {
    if x.is_zero() || x.is_nan() || x.is_inf() {
        return None;
    }
    let (words, _, sign, exp, _) = x.as_raw_parts()?;
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    let m = BigUint::from_bytes_le(&bytes);
    if m.is_zero() {
        return None;
    }
    Some((m, exp as i64 - (words.len() as i64) * 64, sign == Sign::Neg))
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

fn pow5(e: u64) -> BigUint {
    BigUint::from(5u32).pow(e as u32)
}

/// floor(M * 2^E * 10^k + 1/2) as a decimal digit string.
fn scaled_digits(m: &BigUint, e: i64, k: i64) -> String {
    let ek = e + k;
    let num = m * pow2(ek.max(0) as u64) * pow5(k.max(0) as u64);
    let den = pow2((-ek).max(0) as u64) * pow5((-k).max(0) as u64);
    (((num << 1u32) + &den) / (den << 1u32)).to_string()
}

/// Rounds to `sig` significant digits (half-up) and renders positionally when
/// the decimal exponent is moderate, scientifically otherwise.
pub(crate) fn format_sig(x: &BigFloat, sig: usize) -> String {
    assert!(sig >= 1);
    let Some((m, e, neg)) = decompose(x) else {
        return if x.is_zero() { "0".into() } else { "nan".into() };
    };
    // first-guess scale from the binary exponent; the digit count check below
    // corrects the off-by-one cases of the float estimate
    let bexp = m.bits() as i64 + e;
    let mut k = sig as i64 - 1 - (((bexp - 1) as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let mut digits = scaled_digits(&m, e, k);
    for _ in 0..2 {
        if digits.len() == sig {
            break;
        }
        k += sig as i64 - digits.len() as i64;
        digits = scaled_digits(&m, e, k);
    }
    debug_assert_eq!(digits.len(), sig);
    let dex = sig as i64 - 1 - k;
    render(&digits, dex, neg)
}

/// Full exact decimal of a dyadic value, always scientific.
pub fn format_exact(x: &BigFloat) -> String {
    let Some((m, e, neg)) = decompose(x) else {
        return if x.is_zero() { "0".into() } else { "nan".into() };
    };
    format_dyadic(m, e, neg)
}

pub(crate) fn format_mag(m: Mag) -> String {
    match m.to_parts() {
        None => "0".into(),
        Some((mant, e)) => format_dyadic(BigUint::from(mant), e, false),
    }
}

fn format_dyadic(m: BigUint, e: i64, neg: bool) -> String {
    let digits = if e >= 0 {
        (m << e as u64).to_string()
    } else {
        (m * pow5((-e) as u64)).to_string()
    };
    let dex = digits.len() as i64 - 1 + e.min(0);
    format!(
        "{}{}e{}",
        if neg { "-" } else { "" },
        point_after_first(trim_zeros(&digits)),
        dex
    )
}

fn trim_zeros(d: &str) -> &str {
    let t = d.trim_end_matches('0');
    if t.is_empty() {
        &d[..1]
    } else {
        t
    }
}

fn point_after_first(d: &str) -> String {
    if d.len() == 1 {
        d.into()
    } else {
        format!("{}.{}", &d[..1], &d[1..])
    }
}

fn render(digits: &str, dex: i64, neg: bool) -> String {
    let sign = if neg { "-" } else { "" };
    if (-6..=19).contains(&dex) {
        let body = if dex >= 0 {
            let dp = dex as usize + 1;
            if dp >= digits.len() {
                format!("{}{}", digits, "0".repeat(dp - digits.len()))
            } else {
                let frac = trim_zeros_frac(&digits[dp..]);
                if frac.is_empty() {
                    digits[..dp].to_string()
                } else {
                    format!("{}.{}", &digits[..dp], frac)
                }
            }
        } else {
            format!("0.{}{}", "0".repeat((-dex - 1) as usize), trim_zeros(digits))
        };
        format!("{sign}{body}")
    } else {
        format!("{}{}e{}", sign, point_after_first(trim_zeros(digits)), dex)
    }
}

fn trim_zeros_frac(d: &str) -> &str {
    d.trim_end_matches('0')
}
