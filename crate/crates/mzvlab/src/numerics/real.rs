//! Arbitrary-precision reals with a tracked absolute error bound.
//!
//! A `BigReal` is a mantissa value (astro-float, round-to-even) plus a [`Mag`]
//! upper bound `err` such that the true mathematical quantity lies within
//! `value ± err`. Every operation adds its own rounding contribution (one ulp
//! of the result, pessimistically) on top of first-order propagation of the
//! input bounds, so bounds are sound but not tight.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;

use super::fmt;
use super::mag::Mag;
use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(
        Consts::new().expect("failed to allocate astro-float constants cache"));
}

pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone, Debug)]
pub struct BigReal {
    v: BigFloat,
    err: Mag,
    prec: usize,
}

/// One ulp of `v` at precision `prec`; zero for an exact zero.
fn ulp(v: &BigFloat, prec: usize) -> Mag {
    match v.exponent() {
        Some(e) if !v.is_zero() => Mag::from_2pow(e as i64 - prec as i64),
        _ => Mag::ZERO,
    }
}

/// Upper bound on |v|: top mantissa word widened by enough to cover the
/// ignored low words and the f64 conversion of the word itself.
pub(crate) fn mag_upper(v: &BigFloat) -> Mag {
    if v.is_zero() {
        return Mag::ZERO;
    }
    let (words, _, _, exp, _) = v.as_raw_parts().expect("finite value");
    let w = *words.last().unwrap() as f64;
    Mag::norm((w + 4100.0) * (1.0 + 2.4e-13), exp as i64 - 64)
}

/// Lower bound on |v| > 0, same construction rounded down.
fn mag_lower(v: &BigFloat) -> Mag {
    let (words, _, _, exp, _) = v.as_raw_parts().expect("finite value");
    let w = *words.last().unwrap() as f64;
    // normalized mantissa has the top bit set, so w >= 2^63 and this stays positive
    Mag::norm((w - 4100.0) * (1.0 - 2.4e-13), exp as i64 - 64)
}

/// Upper bound on 1/|v| for v != 0.
pub(crate) fn recip_upper(v: &BigFloat) -> Mag {
    assert!(!v.is_zero(), "reciprocal magnitude of zero");
    let (words, _, _, exp, _) = v.as_raw_parts().expect("finite value");
    let w = *words.last().unwrap() as f64;
    Mag::norm((1.0 / (w - 4100.0)) * (1.0 + 2.4e-13), 64 - exp as i64)
}

/// Inverse of the 53-bit dyadic serialization of a `Mag`: reconstructs the
/// exact value when it fits, so a save/load cycle is lossless; anything
/// wider falls back to the widened upper bound.
pub(crate) fn mag_from_serialized(v: &BigFloat) -> Mag {
    if v.is_zero() {
        return Mag::ZERO;
    }
    let (words, _, _, exp, _) = v.as_raw_parts().expect("finite value");
    let top = *words.last().unwrap();
    if top.trailing_zeros() >= 11 && words[..words.len() - 1].iter().all(|&w| w == 0) {
        return Mag::norm((top >> 11) as f64, exp as i64 - 53);
    }
    mag_upper(v)
}

pub fn mag_to_bigfloat(m: Mag, prec: usize) -> BigFloat {
    match m.to_parts() {
        None => BigFloat::from_u64(0, prec),
        Some((mant, e)) => {
            let mut v = BigFloat::from_u64(mant, prec.max(64));
            let ve = v.exponent().unwrap();
            v.set_exponent(ve + e as astro_float::Exponent);
            v
        }
    }
}

/// value_le and friends treat the mantissas only (err is ignored).
pub fn value_le(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(a.cmp(b), Some(c) if c <= 0)
}

impl BigReal {
    pub(crate) fn from_parts(v: BigFloat, err: Mag, prec: usize) -> Self {
        BigReal { v, err, prec }
    }

    pub fn zero(prec: usize) -> Self {
        BigReal::from_parts(BigFloat::from_u64(0, prec), Mag::ZERO, prec)
    }

    pub fn one(prec: usize) -> Self {
        BigReal::from_u64(1, prec)
    }

    pub fn half(prec: usize) -> Self {
        Self::pow2(-1, prec)
    }

    /// Exact power of two.
    pub fn pow2(k: i64, prec: usize) -> Self {
        let mut v = BigFloat::from_u64(1, prec);
        v.set_exponent((k + 1) as astro_float::Exponent);
        BigReal::from_parts(v, Mag::ZERO, prec)
    }

    pub fn from_u64(u: u64, prec: usize) -> Self {
        // prec >= 64 everywhere in this crate, so this is exact
        debug_assert!(prec >= 64);
        BigReal::from_parts(BigFloat::from_u64(u, prec), Mag::ZERO, prec)
    }

    pub fn from_i64(i: i64, prec: usize) -> Self {
        debug_assert!(prec >= 64);
        BigReal::from_parts(BigFloat::from_i64(i, prec), Mag::ZERO, prec)
    }

    /// Exact: every finite double is a dyadic rational, prec >= 64 > 53.
    pub fn from_f64(x: f64, prec: usize) -> Self {
        debug_assert!(prec >= 64);
        assert!(x.is_finite(), "from_f64 needs a finite value");
        BigReal::from_parts(BigFloat::from_f64(x, prec), Mag::ZERO, prec)
    }

    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        let bits = n.magnitude().bits() as usize;
        let v = with_consts(|cc| BigFloat::parse(&n.to_string(), Radix::Dec, prec, RM, cc));
        let err = if bits <= prec { Mag::ZERO } else { ulp(&v, prec) };
        BigReal::from_parts(v, err, prec)
    }

    /// num/den rounded once; both operands are converted exactly first.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: usize) -> Self {
        assert!(den.magnitude().bits() > 0, "zero denominator");
        let wide = prec
            .max(num.magnitude().bits() as usize + 8)
            .max(den.magnitude().bits() as usize + 8);
        let a = with_consts(|cc| BigFloat::parse(&num.to_string(), Radix::Dec, wide, RM, cc));
        let b = with_consts(|cc| BigFloat::parse(&den.to_string(), Radix::Dec, wide, RM, cc));
        let q = a.div(&b, prec, RM);
        let err = ulp(&q, prec);
        BigReal::from_parts(q, err, prec)
    }

    /// Parses a decimal literal, recording the rounding in err.
    pub fn parse_decimal(s: &str, prec: usize) -> Result<Self> {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, prec, RM, cc));
        if v.is_nan() || v.is_inf() {
            return Err(Error::Usage(format!("not a decimal number: {s:?}")));
        }
        let err = ulp(&v, prec);
        Ok(BigReal::from_parts(v, err, prec))
    }

    pub fn pi(prec: usize) -> Self {
        let v = with_consts(|cc| cc.pi(prec, RM));
        let err = ulp(&v, prec);
        BigReal::from_parts(v, err, prec)
    }

    pub fn value(&self) -> &BigFloat {
        &self.v
    }

    pub fn err(&self) -> Mag {
        self.err
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    /// Upper bound on |true value|.
    pub(crate) fn upper_mag(&self) -> Mag {
        mag_upper(&self.v).add(self.err)
    }

    /// Same value with `m` added to the error bound (truncation remainders).
    pub(crate) fn with_extra_err(&self, m: Mag) -> Self {
        BigReal::from_parts(self.v.clone(), self.err.add(m), self.prec)
    }

    /// Exactly zero, not merely a zero mantissa with leftover err.
    fn is_exact_zero(&self) -> bool {
        self.v.is_zero() && self.err.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        if self.is_exact_zero() {
            return o.clone();
        }
        if o.is_exact_zero() {
            return self.clone();
        }
        let v = self.v.add(&o.v, self.prec, RM);
        let err = self.err.add(o.err).add(ulp(&v, self.prec));
        BigReal::from_parts(v, err, self.prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        if o.is_exact_zero() {
            return self.clone();
        }
        if self.is_exact_zero() {
            return o.neg();
        }
        let v = self.v.sub(&o.v, self.prec, RM);
        let err = self.err.add(o.err).add(ulp(&v, self.prec));
        BigReal::from_parts(v, err, self.prec)
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        if self.is_exact_zero() || o.is_exact_zero() {
            return BigReal::zero(self.prec);
        }
        let v = self.v.mul(&o.v, self.prec, RM);
        let err = self
            .err
            .mul(mag_upper(&o.v))
            .add(o.err.mul(mag_upper(&self.v)))
            .add(self.err.mul(o.err))
            .add(ulp(&v, self.prec));
        BigReal::from_parts(v, err, self.prec)
    }

    pub fn div(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        assert!(!o.v.is_zero(), "division by zero value");
        let olo = mag_lower(&o.v);
        assert!(
            olo.mul_f64(0.49).ge(o.err),
            "divisor error bound too large relative to its magnitude"
        );
        let v = self.v.div(&o.v, self.prec, RM);
        let rup = recip_upper(&o.v);
        // e_a/(|b|-e_b) = (e_a/|b|)(1 + r/(1-r)), r = e_b/|b| <= 0.49 by the
        // assert; only the correction terms carry the 1/(1-r) <= 2 factor, so
        // long mul/div recurrences do not compound a constant inflation
        let rel_b = o.err.mul(rup);
        let ea = self.err.mul(rup);
        let err = ea
            .add(ea.mul(rel_b).mul_f64(2.0))
            .add(mag_upper(&v).mul(o.err).mul(rup).mul_f64(2.0))
            .add(ulp(&v, self.prec));
        BigReal::from_parts(v, err, self.prec)
    }

    pub fn recip(&self) -> Self {
        BigReal::one(self.prec).div(self)
    }

    pub fn neg(&self) -> Self {
        BigReal::from_parts(self.v.neg(), self.err, self.prec)
    }

    pub fn abs(&self) -> Self {
        BigReal::from_parts(self.v.abs(), self.err, self.prec)
    }

    pub fn mul_u64(&self, k: u64) -> Self {
        self.mul(&BigReal::from_u64(k, self.prec))
    }

    pub fn div_u64(&self, k: u64) -> Self {
        assert!(k != 0);
        self.div(&BigReal::from_u64(k, self.prec))
    }

    pub fn powu(&self, n: u64) -> Self {
        let mut base = self.clone();
        let mut n = n;
        let mut acc = BigReal::one(self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn exp(&self) -> Self {
        assert!(
            self.err.le_2pow(-2),
            "error bound too large for exp propagation"
        );
        let v = with_consts(|cc| self.v.exp(self.prec, RM, cc));
        let err = mag_upper(&v)
            .mul(self.err)
            .mul_f64(1.3)
            .add(ulp(&v, self.prec).scale(2));
        BigReal::from_parts(v, err, self.prec)
    }

    pub fn ln(&self) -> Result<Self> {
        if self.v.is_zero() || self.v.is_negative() {
            return Err(Error::Domain("ln of a nonpositive value".into()));
        }
        let lo = mag_lower(&self.v);
        assert!(
            lo.mul_f64(0.49).ge(self.err),
            "error bound too large for ln propagation"
        );
        let v = with_consts(|cc| self.v.ln(self.prec, RM, cc));
        let err = self
            .err
            .mul(recip_upper(&self.v))
            .mul_f64(2.0)
            .add(ulp(&v, self.prec).scale(2));
        Ok(BigReal::from_parts(v, err, self.prec))
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.v.is_negative() {
            return Err(Error::Domain("sqrt of a negative value".into()));
        }
        let v = self.v.sqrt(self.prec, RM);
        let err = if v.is_zero() {
            // only for exact zero input with zero err
            assert!(self.err.is_zero());
            Mag::ZERO
        } else {
            let lo = mag_lower(&self.v);
            assert!(
                lo.mul_f64(0.49).ge(self.err),
                "error bound too large for sqrt propagation"
            );
            self.err
                .mul(recip_upper(&v))
                .mul_f64(0.62)
                .add(ulp(&v, self.prec).scale(2))
        };
        Ok(BigReal::from_parts(v, err, self.prec))
    }

    pub fn sin(&self) -> Self {
        let v = with_consts(|cc| self.v.sin(self.prec, RM, cc));
        let err = self.err.add(ulp(&v, self.prec).scale(2));
        BigReal::from_parts(v, err, self.prec)
    }

    /// Crude f64 view for thresholds and heuristics only.
    pub(crate) fn to_f64_approx(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        let (words, _, sign, exp, _) = self.v.as_raw_parts().expect("finite value");
        let w = *words.last().unwrap() as f64;
        let m = w * (exp as f64 - 64.0).exp2();
        if sign == astro_float::Sign::Neg {
            -m
        } else {
            m
        }
    }

    /// |self - o| as a plain value (its own rounding is one ulp, far below
    /// every tolerance used here).
    pub fn residual(&self, o: &Self) -> BigFloat {
        self.v.sub(&o.v, self.prec, RM).abs()
    }

    pub fn to_decimal(&self, sig: usize) -> String {
        fmt::format_sig(&self.v, sig)
    }

    pub fn value_exact_decimal(&self) -> String {
        fmt::format_exact(&self.v)
    }

    pub fn err_decimal(&self) -> String {
        fmt::format_mag(self.err)
    }
}
