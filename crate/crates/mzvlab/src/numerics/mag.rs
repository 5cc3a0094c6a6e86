//! Cheap upper bounds on error magnitudes.
//!
//! A `Mag` is `m * 2^e` with `m` an f64 in `[1, 2)` (or exactly 0). Every
//! operation rounds its result up by a fixed relative slack of about 2^-42,
//! which dwarfs the at most handful of f64 roundings (2^-53 each) incurred
//! before renormalizing, so a `Mag` never under-reports. Error propagation in
//! `BigReal` runs entirely on these instead of full-precision floats.

/// Upward slack applied by every operation; must exceed accumulated f64
/// rounding, which stays below 2^-50 per operation chain here.
const SLACK: f64 = 1.0 + 2.4e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    m: f64,
    e: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0.0, e: 0 };

    /// Renormalizes `m * 2^e` so the mantissa lands in `[1, 2)`.
    /// `m` must be a normal positive f64 or zero.
    pub(crate) fn norm(m: f64, e: i64) -> Mag {
        if m == 0.0 {
            return Mag::ZERO;
        }
        debug_assert!(m.is_finite() && m > 0.0 && m >= f64::MIN_POSITIVE);
        let bits = m.to_bits();
        let be = ((bits >> 52) & 0x7ff) as i64;
        let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
        Mag { m, e: e + be - 1023 }
    }

    pub fn from_2pow(e: i64) -> Mag {
        Mag { m: 1.0, e }
    }

    /// Upper bound of a positive finite f64.
    pub fn from_f64(x: f64) -> Mag {
        assert!(x.is_finite() && x >= 0.0);
        if x == 0.0 {
            Mag::ZERO
        } else {
            Mag::norm(x * SLACK, 0)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn add(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = hi.e - lo.e;
        // Beyond 44 bits the low part is already inside the slack factor.
        let m = if d >= 44 {
            hi.m * SLACK
        } else {
            (hi.m + lo.m * pow2(-d)) * SLACK
        };
        Mag::norm(m, hi.e)
    }

    pub fn mul(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm(self.m * o.m * SLACK, self.e + o.e)
    }

    pub fn mul_f64(self, x: f64) -> Mag {
        self.mul(Mag::from_f64(x))
    }

    pub fn scale(self, k: u64) -> Mag {
        // Exact as long as k fits in 53 bits; multiplicities here are far smaller.
        debug_assert!(k < (1u64 << 53));
        if k == 0 {
            return Mag::ZERO;
        }
        self.mul(Mag::from_f64(k as f64))
    }

    pub fn powu(self, n: u32) -> Mag {
        let mut acc = Mag::from_2pow(0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn max(self, o: Mag) -> Mag {
        if self.ge(o) {
            self
        } else {
            o
        }
    }

    pub(crate) fn ge(self, o: Mag) -> bool {
        if o.is_zero() {
            return true;
        }
        if self.is_zero() {
            return false;
        }
        self.e > o.e || (self.e == o.e && self.m >= o.m)
    }

    /// `self <= 2^e`, exact comparison.
    pub fn le_2pow(&self, e: i64) -> bool {
        if self.is_zero() {
            return true;
        }
        self.e < e || (self.e == e && self.m == 1.0)
    }

    /// Decomposes into an exact integer mantissa `M` (53 bits) and exponent,
    /// with value = `M * 2^exp`. Used for exact decimal serialization.
    pub fn to_parts(&self) -> Option<(u64, i64)> {
        if self.is_zero() {
            return None;
        }
        let mant = (self.m * (1u64 << 52) as f64) as u64;
        Some((mant, self.e - 52))
    }
}

/// 2^-d for 0 <= d <= 1022, exact.
fn pow2(d: i64) -> f64 {
    debug_assert!((-1022..=0).contains(&d));
    f64::from_bits(((1023 + d) as u64) << 52)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let m = Mag::from_f64(6.0);
        let (mant, e) = m.to_parts().unwrap();
        // 6.0 = 1.5 * 2^2, mantissa 1.5 * 2^52, tiny slack pushes it up a hair
        assert_eq!(e, 2 - 52);
        assert!(mant >= 3 << 51);
        assert!(mant < (3 << 51) + (1 << 12));
    }

    #[test]
    fn add_is_upper_bound() {
        let a = Mag::from_f64(1.25);
        let b = Mag::from_f64(0.375);
        let s = a.add(b);
        assert!(s.ge(Mag::from_f64(1.625)));
        assert!(Mag::from_f64(1.626).ge(s));
    }

    #[test]
    fn add_with_huge_gap_keeps_larger() {
        let a = Mag::from_2pow(10);
        let b = Mag::from_2pow(-100);
        let s = a.add(b);
        assert!(s.ge(a));
        assert!(s.le_2pow(11));
    }

    #[test]
    fn mul_powers() {
        // slack pushes the product a hair above the exact 2^-6
        let p = Mag::from_2pow(-10).mul(Mag::from_2pow(4));
        assert!(p.ge(Mag::from_2pow(-6)));
        assert!(p.le_2pow(-5));
    }

    #[test]
    fn zero_behaves() {
        assert!(Mag::ZERO.is_zero());
        assert!(Mag::ZERO.add(Mag::ZERO).is_zero());
        assert!(Mag::from_2pow(3).mul(Mag::ZERO).is_zero());
        assert_eq!(Mag::ZERO.add(Mag::from_2pow(1)), Mag::from_2pow(1));
        assert!(Mag::ZERO.le_2pow(-1_000_000));
    }

    #[test]
    fn scale_and_pow() {
        let m = Mag::from_2pow(-40).scale(1000);
        assert!(m.le_2pow(-30));
        assert!(!m.le_2pow(-31));
        let p = Mag::from_2pow(-5).powu(3);
        assert!(p.ge(Mag::from_2pow(-15)));
        assert!(p.le_2pow(-14));
    }

    #[test]
    fn slack_is_monotone_not_runaway() {
        // a million chained additions of equal magnitudes stay within a
        // factor-of-two envelope of the exact sum, 1000001 * 2^-300 ~ 2^-280.07
        let mut acc = Mag::from_2pow(-300);
        for _ in 0..1_000_000 {
            acc = acc.add(Mag::from_2pow(-300));
        }
        assert!(acc.ge(Mag::from_2pow(-281)));
        assert!(acc.le_2pow(-280));
    }
}
