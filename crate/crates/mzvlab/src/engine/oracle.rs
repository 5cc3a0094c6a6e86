//! Brute-force truncated nested sums, the independent cross-check for the
//! series engine.

use crate::error::{Error, Result};
use crate::indices::Index;
use crate::numerics::{BigReal, Mag};

const ORACLE_PREC: usize = 96;

/// Nested sum truncated at m_r <= n. The dominating truncation bound
/// (1+ln n)^w / ((k_r - 1) n^(k_r - 1)) is crude but covers the tail, and
/// arithmetic rounding rides along in the BigReal err.
pub fn mzv_bruteforce(k: &Index, n: u64) -> Result<BigReal> {
    if !k.is_admissible() {
        return Err(Error::Domain(format!("index {k} is not admissible")));
    }
    assert!(n >= 2);
    let parts = k.parts();
    let r = parts.len();
    let mut t = vec![BigReal::zero(ORACLE_PREC); r + 1];
    t[0] = BigReal::one(ORACLE_PREC);
    for m in 1..=n {
        let inv = BigReal::from_u64(m, ORACLE_PREC).recip();
        // descending j keeps t[j-1] at its state before this m
        for j in (1..=r).rev() {
            if t[j - 1].is_zero() {
                continue;
            }
            t[j] = t[j].add(&t[j - 1].mul(&inv.powu(parts[j - 1] as u64)));
        }
    }
    let kr = *parts.last().unwrap() as i32;
    let tail = (1.0 + (n as f64).ln()).powi(k.weight() as i32)
        / ((kr - 1) as f64 * (n as f64).powi(kr - 1));
    Ok(t[r].clone().with_extra_err(Mag::from_f64(tail * 1.01)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{mag_to_bigfloat, value_le};

    fn idx(parts: &[u32]) -> Index {
        Index::new(parts.to_vec()).unwrap()
    }

    fn assert_within(v: &BigReal, oracle: &str, extra: f64) {
        let o = BigReal::parse_decimal(oracle, ORACLE_PREC).unwrap();
        let tol = mag_to_bigfloat(v.err().add(Mag::from_f64(extra)), ORACLE_PREC);
        assert!(
            value_le(&v.residual(&o), &tol),
            "residual {} above tolerance",
            crate::numerics::format_exact(&v.residual(&o))
        );
    }

    #[test]
    fn zeta2_truncated() {
        let v = mzv_bruteforce(&idx(&[2]), 1000).unwrap();
        // truncation deficit is about 1e-3, the declared err dwarfs it
        assert_within(
            &v,
            "1.644934066848226436472415166646025189218949901206798437735558229370007",
            0.0,
        );
        assert!(!v.err().le_2pow(-11)); // err honest: >= the ~1e-3 deficit
    }

    #[test]
    fn zeta3_and_depth2() {
        assert_within(
            &mzv_bruteforce(&idx(&[3]), 100).unwrap(),
            "1.202056903159594285399738161511449990764986292340498881792271555341838",
            0.0,
        );
        // zeta(1,2) = zeta(3)
        assert_within(
            &mzv_bruteforce(&idx(&[1, 2]), 10_000).unwrap(),
            "1.202056903159594285399738161511449990764986292340498881792271555341838",
            0.0,
        );
    }

    #[test]
    fn weight_four_pair() {
        assert_within(
            &mzv_bruteforce(&idx(&[2, 2]), 2000).unwrap(),
            "0.8117424252833536436370027724058759270810632139390451807622321615830905",
            0.0,
        );
        assert_within(
            &mzv_bruteforce(&idx(&[1, 3]), 2000).unwrap(),
            "0.2705808084277845478790009241352919756936877379796817269207440538610302",
            0.0,
        );
    }

    #[test]
    fn rejects_nonadmissible() {
        assert!(mzv_bruteforce(&idx(&[1, 1]), 100).is_err());
        assert!(mzv_bruteforce(&Index::empty(), 100).is_err());
    }
}
