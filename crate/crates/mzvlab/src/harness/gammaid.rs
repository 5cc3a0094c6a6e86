//! Gamma-side checks: the reflection-style product identity and the two
//! generating-function identities, each compared against direct series
//! evaluation at fixed sample points.
//!
//! Left sides re-evaluate the interpolated values through the series engine
//! with the t sample baked into the ⊙ kernel, so no polynomial coefficients
//! are recombined; right sides are Gamma/digamma series with their own tail
//! treatment. Truncation tails on the identity sums are heuristic (geometric
//! ratio estimates) and are folded into err, far below the relaxed tolerance.

use num_bigint::BigInt;

use super::{param, row, CheckResult, SamplePoint, Tols};
use crate::engine::{two_chain_family, EngineConfig, EvalLetter, SeriesCtx};
use crate::error::{Error, Result};
use crate::numerics::{bernoulli, digamma, gamma, BigReal, Mag};

/// Series context with the cutoff raised until the tail prefactor
/// (4(N+1))^letters still leaves prec+20 bits; the engine default assumes
/// short words and goes vacuous near fifty letters.
fn boosted_ctx(prec: usize, letters: usize) -> SeriesCtx {
    let base = EngineConfig::for_prec_bits(prec);
    let target = (prec + 20) as f64;
    let mut n = base.polylog_terms;
    for _ in 0..64 {
        let slack = n as f64 - letters as f64 * (4.0 * (n as f64 + 1.0)).log2();
        if slack >= target {
            break;
        }
        n += ((target - slack).ceil() as usize).max(16);
    }
    SeriesCtx::new(&EngineConfig { polylog_terms: n, ..base })
}

/// Interpolated value of ({1}^p, q+2) with t baked in: the p part separators
/// become ⊙ kernels, the final X is the convolution top.
fn zeta_t_chain(ctx: &SeriesCtx, p: usize, q: usize, t0: &BigReal) -> BigReal {
    let mut left = Vec::with_capacity(p + q + 1);
    left.push(EvalLetter::Y);
    left.extend(std::iter::repeat_with(|| EvalLetter::Circ(t0.clone())).take(p));
    left.extend(std::iter::repeat_n(EvalLetter::X, q));
    two_chain_family(ctx, &left, 0).pop().unwrap()
}

/// Interpolated integral values on ({1}^r1) for every second argument
/// m = 1..=m_max in one family pass; entry m-1 is the value at m.
fn xi_t_ones_family(ctx: &SeriesCtx, r1: usize, t0: &BigReal, m_max: usize) -> Vec<BigReal> {
    assert!(r1 >= 1 && m_max >= 1);
    let mut left = vec![EvalLetter::Y];
    left.extend(std::iter::repeat_with(|| EvalLetter::Circ(t0.clone())).take(r1 - 1));
    two_chain_family(ctx, &left, m_max - 1)
}

/// Geometric tail estimate from the last two partial-sum slices, with a 4x
/// safety factor; heuristic by design, err-only.
fn geometric_tail(last: f64, prev: f64) -> Mag {
    if !(last > 0.0) {
        return Mag::ZERO;
    }
    let ratio = if prev > 0.0 { (last / prev).min(0.8) } else { 0.5 };
    Mag::from_f64(4.0 * last * ratio / (1.0 - ratio))
}

/// Gamma(l-x)Gamma(l+x)/Gamma(l)^2 against the product over k >= l of
/// (1 - x^2/k^2)^-1, truncated at K. The log of the dropped factors is
/// restored exactly as sum_j (x^2j/j) zeta(2j, K+1), so the comparison is
/// limited by the error bounds, not by K.
pub(super) fn check_prop2(
    l: u32,
    x: f64,
    kcut: u64,
    tols: &Tols,
    prec: usize,
) -> Result<CheckResult> {
    if !(x.abs() < l as f64) {
        return Err(Error::Domain(format!(
            "product identity needs |x| < l, got x={x}, l={l}"
        )));
    }
    let xb = BigReal::from_f64(x, prec);
    let lb = BigReal::from_u64(l as u64, prec);
    let lhs = gamma(&lb.sub(&xb))?
        .mul(&gamma(&lb.add(&xb))?)
        .div(&gamma(&lb)?.powu(2));

    let one = BigReal::one(prec);
    let x2 = xb.mul(&xb);
    let mut prod = one.clone();
    for k in l as u64..=kcut {
        prod = prod.mul(&one.sub(&x2.div(&BigReal::from_u64(k * k, prec))));
    }

    let mut tail = BigReal::zero(prec);
    let mut x2p = one.clone();
    for j in 1..=64u64 {
        x2p = x2p.mul(&x2);
        let term = x2p.div_u64(j).mul(&hurwitz_even(2 * j, kcut + 1, prec));
        let done = term.upper_mag().le_2pow(-((prec + 16) as i64));
        tail = tail.add(&term);
        if done {
            break;
        }
    }
    let rhs = tail.exp().div(&prod);

    Ok(row(
        "prop2",
        vec![param("l", l), param("x", x), param("K", kcut)],
        lhs,
        rhs,
        &tols.prop2,
    ))
}

/// zeta(s, a) for even integer s >= 2 and integer a, by Euler-Maclaurin off
/// the a-th term; accurate only for a well above s, which is the only regime
/// used (a = K+1).
fn hurwitz_even(s: u64, a: u64, prec: usize) -> BigReal {
    debug_assert!(s >= 2 && s % 2 == 0 && a >= 64);
    let inv_a = BigReal::from_u64(a, prec).recip();
    let inv_a2 = inv_a.mul(&inv_a);
    let a1ms = inv_a.powu(s - 1);
    let mut acc = a1ms
        .div_u64(s - 1)
        .add(&a1ms.mul(&inv_a).mul(&BigReal::half(prec)));
    let mut poch = BigInt::from(s);
    let mut fact = BigInt::from(2u32);
    let mut apow = a1ms.mul(&inv_a2);
    let mut i = 1u64;
    loop {
        let b = bernoulli(2 * i as usize);
        let num = b.numer() * &poch;
        let den = b.denom() * &fact;
        let term = BigReal::from_ratio(&num, &den, prec).mul(&apow);
        let done = term.upper_mag().le_2pow(-((prec + 16) as i64));
        acc = acc.add(&term);
        if done {
            // terms still shrink by ~(2i/2pi a)^2, so twice the last covers
            return acc.with_extra_err(term.upper_mag().mul_f64(2.0));
        }
        poch *= BigInt::from((s + 2 * i - 1) * (s + 2 * i));
        fact *= BigInt::from((2 * i + 1) * (2 * i + 2));
        apow = apow.mul(&inv_a2);
        i += 1;
        assert!(i < 200, "asymptotic series for zeta({s}, {a}) failed to converge");
    }
}

/// Double generating function of the interpolated values of ({1}^p, q+2),
/// summed over p+q <= P, against the Gamma-ratio series in l. The series is
/// accelerated by subtracting its partial-fraction skeleton
/// 1/((l-a)(l-b)), a = x+y, b = tx, whose full sum telescopes to digammas;
/// what remains decays like l^-3.
pub(super) fn check_genfun_tmzv(
    pt: SamplePoint,
    pcut: usize,
    lcut: u64,
    tols: &Tols,
    prec: usize,
) -> Result<CheckResult> {
    pt.validate()?;
    if (pt.x + pt.y - pt.t * pt.x).abs() < 1e-9 {
        return Err(Error::Domain(format!(
            "x+y = tx makes the partial-fraction kernel degenerate (x={}, y={}, t={})",
            pt.x, pt.y, pt.t
        )));
    }
    let xb = BigReal::from_f64(pt.x, prec);
    let yb = BigReal::from_f64(pt.y, prec);
    let tb = BigReal::from_f64(pt.t, prec);
    let one = BigReal::one(prec);
    let aa = xb.add(&yb);
    let bb = tb.mul(&xb);

    let ctx = boosted_ctx(prec, pcut + 1);
    let mut xpow = vec![one.clone()];
    let mut ypow = vec![one.clone()];
    for i in 1..=pcut {
        xpow.push(xpow[i - 1].mul(&xb));
        ypow.push(ypow[i - 1].mul(&yb));
    }
    let mut lhs = BigReal::zero(prec);
    let mut diag = vec![0.0f64; pcut + 1];
    for p in 0..=pcut {
        if p > 0 && xpow[p].is_zero() {
            continue;
        }
        for q in 0..=pcut - p {
            let term = zeta_t_chain(&ctx, p, q, &tb).mul(&xpow[p]).mul(&ypow[q]);
            diag[p + q] += term.to_f64_approx().abs();
            lhs = lhs.add(&term);
        }
    }
    let prev = if pcut >= 1 { diag[pcut - 1] } else { 0.0 };
    let lhs = lhs.with_extra_err(geometric_tail(diag[pcut], prev));

    // R(l) = Gamma(l-x)Gamma(l-y)/(Gamma(l)Gamma(l-a)), R(1) from Gamma(1)=1
    let mut rr = gamma(&one.sub(&xb))?
        .mul(&gamma(&one.sub(&yb))?)
        .div(&gamma(&one.sub(&aa))?);
    let mut rhs = BigReal::zero(prec);
    let mut last = 0.0f64;
    for l in 1..=lcut {
        let lb1 = BigReal::from_u64(l, prec);
        let la = lb1.sub(&aa);
        let term = rr.sub(&one).div(&la.mul(&lb1.sub(&bb)));
        last = term.to_f64_approx().abs();
        rhs = rhs.add(&term);
        if l < lcut {
            rr = rr.mul(&lb1.sub(&xb)).mul(&lb1.sub(&yb)).div(&lb1.mul(&la));
        }
    }
    let psi_part = digamma(&one.sub(&bb))?
        .sub(&digamma(&one.sub(&aa))?)
        .div(&aa.sub(&bb));
    let rhs = rhs
        .add(&psi_part)
        .with_extra_err(Mag::from_f64(2.0 * last * lcut as f64));

    Ok(row(
        "genfun.tmzv",
        vec![
            param("x", pt.x),
            param("y", pt.y),
            param("t", pt.t),
            param("P", pcut),
            param("L", lcut),
        ],
        lhs,
        rhs,
        &tols.genfun,
    ))
}

/// Generating function of the interpolated integral values on ones,
/// x^r y^m summed over r <= P and m below a fixed widened cutoff, against
/// the Gamma-ratio series with terms ~ l^(y-2).
pub(super) fn check_genfun_takmzv(
    pt: SamplePoint,
    pcut: usize,
    lcut: u64,
    tols: &Tols,
    prec: usize,
) -> Result<CheckResult> {
    pt.validate()?;
    if pt.y > -0.3 {
        return Err(Error::Domain(format!(
            "need y <= -0.3 so the l^(y-2) tail decays usefully, got y={}",
            pt.y
        )));
    }
    // the m direction decays only like |y|^m times a polynomial, so it gets
    // a fixed wide cutoff instead of sharing the triangular one
    const M_EXT: usize = 40;
    let xb = BigReal::from_f64(pt.x, prec);
    let yb = BigReal::from_f64(pt.y, prec);
    let tb = BigReal::from_f64(pt.t, prec);
    let one = BigReal::one(prec);
    let aa = xb.add(&yb);
    let bb = tb.mul(&xb);

    let ctx = boosted_ctx(prec, pcut + M_EXT + 1);
    let mut ypow = vec![one.clone()];
    for m in 1..M_EXT {
        ypow.push(ypow[m - 1].mul(&yb));
    }
    let mut lhs = BigReal::zero(prec);
    let mut rows = vec![0.0f64; pcut + 1];
    let mut cols = vec![0.0f64; M_EXT];
    let mut xp = one.clone();
    for r in 0..=pcut {
        let fam = xi_t_ones_family(&ctx, r + 1, &tb, M_EXT);
        for (m, v) in fam.iter().enumerate() {
            let term = v.mul(&xp).mul(&ypow[m]);
            let t = term.to_f64_approx().abs();
            rows[r] += t;
            cols[m] += t;
            lhs = lhs.add(&term);
        }
        xp = xp.mul(&xb);
    }
    let rprev = if pcut >= 1 { rows[pcut - 1] } else { 0.0 };
    let lhs = lhs
        .with_extra_err(geometric_tail(rows[pcut], rprev))
        .with_extra_err(geometric_tail(cols[M_EXT - 1], cols[M_EXT - 2]));

    // rho(l) = Gamma(l-x)Gamma(1-a)/(Gamma(1-x)Gamma(l+1-a)), rho(1) = 1/(1-a)
    let mut rho = one.sub(&aa).recip();
    let mut rhs = BigReal::zero(prec);
    let mut last = 0.0f64;
    for l in 1..=lcut {
        let lb1 = BigReal::from_u64(l, prec);
        let term = rho.div(&lb1.sub(&bb));
        last = term.to_f64_approx().abs();
        rhs = rhs.add(&term);
        if l < lcut {
            rho = rho.mul(&lb1.sub(&xb)).div(&lb1.add(&one).sub(&aa));
        }
    }
    // integral comparison: sum_{l>L} l^(y-2) <= L^(y-1)/(1-y)
    let rhs = rhs.with_extra_err(Mag::from_f64(last * lcut as f64 / (1.0 - pt.y)));

    Ok(row(
        "genfun.takmzv",
        vec![
            param("x", pt.x),
            param("y", pt.y),
            param("t", pt.t),
            param("P", pcut),
            param("L", lcut),
        ],
        lhs,
        rhs,
        &tols.genfun,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Engine;
    use crate::indices::{tpoly_eval, Index};
    use crate::numerics::{mag_to_bigfloat, value_le};
    use crate::values;

    const ZETA2: &str =
        "1.644934066848226436472415166646025189218949901206798437735558229370007";
    const ZETA3: &str =
        "1.202056903159594285399738161511449990764986292340498881792271555341838";

    fn setup() -> (Engine, Tols, usize) {
        let cfg = EngineConfig::for_digits(40);
        let prec = cfg.prec_bits;
        (Engine::new(cfg), Tols::for_digits(40, prec), prec)
    }

    fn assert_within_err(a: &BigReal, b: &BigReal) {
        let tol = mag_to_bigfloat(a.err().add(b.err()), a.prec());
        assert!(
            value_le(&a.residual(b), &tol),
            "residual {} exceeds {}",
            crate::numerics::format_exact(&a.residual(b)),
            crate::numerics::format_exact(&tol)
        );
    }

    #[test]
    fn chain_matches_polynomial_route() {
        let (eng, _, prec) = setup();
        let t0 = BigReal::from_f64(0.5, prec);
        let ctx = boosted_ctx(prec, 6);
        let direct = zeta_t_chain(&ctx, 2, 1, &t0);
        let poly = values::zeta_t(&eng, &Index::new(vec![1, 1, 3]).unwrap()).unwrap();
        assert_within_err(&direct, &tpoly_eval(&poly, &t0));
    }

    #[test]
    fn family_matches_polynomial_route() {
        let (eng, _, prec) = setup();
        let t0 = BigReal::from_f64(0.5, prec);
        let ctx = boosted_ctx(prec, 6);
        let fam = xi_t_ones_family(&ctx, 2, &t0, 3);
        for m in 1..=3u32 {
            let poly = values::xi_t(&eng, &Index::ones(2), m).unwrap();
            assert_within_err(&fam[m as usize - 1], &tpoly_eval(&poly, &t0));
        }
    }

    #[test]
    fn family_at_one_is_eta() {
        let (eng, _, prec) = setup();
        let one = BigReal::one(prec);
        let ctx = boosted_ctx(prec, 3);
        let fam = xi_t_ones_family(&ctx, 2, &one, 1);
        assert_within_err(&fam[0], &values::eta(&eng, 2, 1).unwrap());
        let two_z3 = BigReal::parse_decimal(ZETA3, prec).unwrap().mul_u64(2);
        let r = fam[0].residual(&two_z3);
        assert!(value_le(&r, &mag_to_bigfloat(Mag::from_2pow(-100), prec)));
    }

    #[test]
    fn hurwitz_matches_partial_zeta() {
        let prec = 232;
        let h = hurwitz_even(2, 1001, prec);
        let mut partial = BigReal::parse_decimal(ZETA2, prec).unwrap();
        for k in 1..=1000u64 {
            partial = partial.sub(&BigReal::from_u64(k * k, prec).recip());
        }
        assert_within_err(&h, &partial);
        let r = h.residual(&partial);
        assert!(value_le(&r, &mag_to_bigfloat(Mag::from_2pow(-150), prec)));
    }

    #[test]
    fn prop2_reflection_case() {
        let (_, tols, prec) = setup();
        let r = check_prop2(1, 0.5, 2000, &tols, prec).unwrap();
        assert!(r.pass, "residual {:?}", r.residual);
        // Gamma(1/2)Gamma(3/2) = pi/2
        let half_pi = BigReal::pi(prec).mul(&BigReal::half(prec));
        let res = r.lhs.residual(&half_pi);
        assert!(value_le(&res, &mag_to_bigfloat(Mag::from_2pow(-100), prec)));
    }

    #[test]
    fn tmzv_collapses_at_x_zero() {
        let (_, tols, prec) = setup();
        let pt = SamplePoint { x: 0.0, y: -0.2, t: 0.0 };
        let r = check_genfun_tmzv(pt, 10, 2000, &tols, prec).unwrap();
        assert!(
            r.pass,
            "residual {:?} tol {:?} lerr {:?} rerr {:?}",
            r.residual,
            r.tol,
            r.lhs.err(),
            r.rhs.err()
        );
    }

    #[test]
    fn takmzv_small_smoke() {
        let (_, tols, prec) = setup();
        let pt = SamplePoint { x: 0.1, y: -0.5, t: 1.0 };
        let r = check_genfun_takmzv(pt, 10, 50_000, &tols, prec).unwrap();
        assert!(r.pass, "residual {:?} tol {:?}", r.residual, r.tol);
    }

    #[test]
    fn domain_rejections() {
        let (_, tols, prec) = setup();
        assert!(check_prop2(1, 1.5, 100, &tols, prec).is_err());
        let bad = SamplePoint { x: 0.9, y: 0.3, t: 0.5 };
        assert!(check_genfun_tmzv(bad, 4, 100, &tols, prec).is_err());
        let shallow = SamplePoint { x: 0.1, y: -0.1, t: 0.5 };
        assert!(check_genfun_takmzv(shallow, 4, 100, &tols, prec).is_err());
    }
}
