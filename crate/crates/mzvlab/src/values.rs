//! The value families built on the engine: ζ and ζ*, the interpolated ζ^t,
//! the iterated-integral values ξ and their interpolation ξ_t, η, the
//! alternating sums S and T, and the combinatorial d/dt sums.
//!
//! Everything here reduces to plain MZVs through the enumerations in
//! [`crate::indices`] and [`crate::posets`], then evaluates term by term
//! through a shared [`Engine`] cache. Summation order is the enumeration
//! order, so repeated runs produce bit-identical results.

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::indices::{
    box_fillings, compositions_nonneg, one_plus_fillings, tpoly_add, tpoly_eval, tpoly_scale,
    Index, TPoly,
};
use crate::numerics::BigReal;
use crate::posets::{poset_value, takmzv_poset, xi_poset, WeightedWordSum};

fn require_admissible(k: &Index) -> Result<()> {
    if k.is_admissible() {
        Ok(())
    } else {
        Err(Error::Domain(format!("index {k} is not admissible")))
    }
}

/// ζ(k), through the shared cache.
pub fn zeta(eng: &Engine, k: &Index) -> Result<BigReal> {
    eng.mzv_cached(k)
}

/// ζ*(k): the non-strict sum, expanded as Σ ζ(k') over all ways of merging
/// adjacent parts of k.
pub fn zeta_star(eng: &Engine, k: &Index) -> Result<BigReal> {
    require_admissible(k)?;
    let mut acc = BigReal::zero(eng.cfg().prec_bits);
    for (filled, _) in box_fillings(k)? {
        acc = acc.add(&eng.mzv_cached(&filled)?);
    }
    Ok(acc)
}

/// ζ^t(k): the coefficient of t^j collects the fillings that merged j gaps,
/// so evaluation at t=0 gives ζ(k) and at t=1 gives ζ*(k).
pub fn zeta_t(eng: &Engine, k: &Index) -> Result<TPoly> {
    require_admissible(k)?;
    let mut p = TPoly::zero(eng.cfg().prec_bits);
    for (filled, sigma) in box_fillings(k)? {
        p.add_term(sigma as usize, &eng.mzv_cached(&filled)?);
    }
    Ok(p)
}

fn weighted_sum_value(eng: &Engine, ws: &WeightedWordSum) -> Result<TPoly> {
    let mut p = TPoly::zero(eng.cfg().prec_bits);
    for (t_pow, idx, mult) in &ws.terms {
        p.add_term(*t_pow as usize, &eng.mzv_cached(idx)?.mul_u64(*mult));
    }
    Ok(p)
}

/// ξ(k; m), evaluated through its 2-poset expansion: an exact
/// nonnegative-integer combination of MZVs of weight wt(k)+m.
pub fn xi(eng: &Engine, k: &Index, m: u32) -> Result<BigReal> {
    let ws = poset_value(&xi_poset(k, m)?)?;
    let mut acc = BigReal::zero(eng.cfg().prec_bits);
    for (t_pow, idx, mult) in &ws.terms {
        debug_assert_eq!(*t_pow, 0);
        acc = acc.add(&eng.mzv_cached(idx)?.mul_u64(*mult));
    }
    Ok(acc)
}

/// ξ_t(k; m), via the ⊙-labeled poset; degree ≤ dep(k)-1 and the constant
/// term is ξ(k; m).
pub fn xi_t(eng: &Engine, k: &Index, m: u32) -> Result<TPoly> {
    let ws = poset_value(&takmzv_poset(k, m)?)?;
    weighted_sum_value(eng, &ws)
}

/// η(r1; m1) = ξ_t({1}^r1; m1) evaluated at t=1.
pub fn eta(eng: &Engine, r1: u32, m1: u32) -> Result<BigReal> {
    if r1 < 1 || m1 < 1 {
        return Err(Error::Domain(format!(
            "eta({r1};{m1}) needs both arguments >= 1"
        )));
    }
    let p = xi_t(eng, &Index::ones(r1 as usize), m1)?;
    Ok(tpoly_eval(&p, &BigReal::one(eng.cfg().prec_bits)))
}

/// S_k = Σ_{r+k1+k2=k} (-1)^{k2} ξ({1}^r, k1+1; k2+1), over all nonnegative
/// triples with that total.
pub fn s_value(eng: &Engine, k: u32) -> Result<BigReal> {
    let mut acc = BigReal::zero(eng.cfg().prec_bits);
    for c in compositions_nonneg(k, 3) {
        let (r, k1, k2) = (c.parts[0], c.parts[1], c.parts[2]);
        let mut parts = vec![1u32; r as usize];
        parts.push(k1 + 1);
        let term = xi(eng, &Index::new(parts)?, k2 + 1)?;
        acc = acc.add(&if k2 % 2 == 1 { term.neg() } else { term });
    }
    Ok(acc)
}

/// T_{r,k} = Σ (-1)^{k_{r+1}} ξ(k1+1, …, kr+1; k_{r+1}+1), over compositions
/// (k1, …, k_{r+1}) of k into r+1 nonnegative parts.
pub fn t_value(eng: &Engine, r: u32, k: u32) -> Result<BigReal> {
    if r < 1 {
        return Err(Error::Domain(format!("T({r},{k}) needs r >= 1")));
    }
    let mut acc = BigReal::zero(eng.cfg().prec_bits);
    for c in compositions_nonneg(k, r as usize + 1) {
        let head: Vec<u32> = c.parts[..r as usize].iter().map(|p| p + 1).collect();
        let last = c.parts[r as usize];
        let term = xi(eng, &Index::new(head)?, last + 1)?;
        acc = acc.add(&if last % 2 == 1 { term.neg() } else { term });
    }
    Ok(acc)
}

/// d/dt ζ^t(k), expressed combinatorially: the sum of ζ^t over all single-gap
/// merges of k.
pub fn tmzv_derivative_sum(eng: &Engine, k: &Index) -> Result<TPoly> {
    require_admissible(k)?;
    let mut acc = TPoly::zero(eng.cfg().prec_bits);
    for merged in one_plus_fillings(k) {
        acc = tpoly_add(&acc, &zeta_t(eng, &merged)?);
    }
    Ok(acc)
}

/// d^l/dt^l ξ_t({1}^{r+1}; m+1), expressed combinatorially:
/// l! Σ ξ_t(k1+1, …, k_{r-l+1}+1; m+1) over compositions of l.
pub fn takmzv_derivative_sum(eng: &Engine, r: u32, m: u32, l: u32) -> Result<TPoly> {
    if l > r {
        return Err(Error::Domain(format!(
            "derivative order {l} exceeds depth parameter {r}"
        )));
    }
    let mut acc = TPoly::zero(eng.cfg().prec_bits);
    for c in compositions_nonneg(l, (r - l) as usize + 1) {
        let parts: Vec<u32> = c.parts.iter().map(|p| p + 1).collect();
        acc = tpoly_add(&acc, &xi_t(eng, &Index::new(parts)?, m + 1)?);
    }
    let fact: u64 = (1..=l as u64).product();
    Ok(tpoly_scale(&acc, &BigReal::from_u64(fact, eng.cfg().prec_bits)))
}
