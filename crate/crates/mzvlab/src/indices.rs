//! Index combinatorics: admissibility, box fillings, compositions, and
//! polynomials in the interpolation variable t.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::BigReal;

/// A multi-index of positive integer parts; empty means the empty index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    parts: Vec<u32>,
}

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Domain("index parts must be positive".into()));
        }
        Ok(Index { parts })
    }

    pub fn empty() -> Self {
        Index { parts: Vec::new() }
    }

    /// {1}^n.
    pub fn ones(n: usize) -> Self {
        Index { parts: vec![1; n] }
    }

    pub fn single(k: u32) -> Self {
        assert!(k >= 1);
        Index { parts: vec![k] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn is_admissible(&self) -> bool {
        matches!(self.parts.last(), Some(&l) if l >= 2)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sep = "";
        for p in &self.parts {
            write!(f, "{sep}{p}")?;
            sep = ",";
        }
        Ok(())
    }
}

impl FromStr for Index {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for piece in s.split(',') {
            let piece = piece.trim();
            let p: u32 = piece
                .parse()
                .map_err(|_| Error::Usage(format!("bad index part {piece:?} in {s:?}")))?;
            if p == 0 {
                return Err(Error::Usage(format!("zero part in index {s:?}")));
            }
            parts.push(p);
        }
        Ok(Index { parts })
    }
}

/// Summation tuple with parts allowed to be zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NNComposition {
    pub parts: Vec<u32>,
}

/// All ways to fill the gaps of `k` with "keep" or "merge", in mask order
/// (bit i set means the gap after part i is merged). Each entry is the merged
/// index together with sigma, the number of merged gaps.
pub fn box_fillings(k: &Index) -> Result<Vec<(Index, u32)>> {
    let d = k.depth();
    if d == 0 {
        return Err(Error::Domain("box fillings of the empty index".into()));
    }
    let parts = k.parts();
    let mut out = Vec::with_capacity(1 << (d - 1));
    for mask in 0u64..(1 << (d - 1)) {
        let mut merged: Vec<u32> = vec![parts[0]];
        for (i, &p) in parts.iter().enumerate().skip(1) {
            if mask >> (i - 1) & 1 == 1 {
                *merged.last_mut().unwrap() += p;
            } else {
                merged.push(p);
            }
        }
        out.push((Index { parts: merged }, mask.count_ones()));
    }
    Ok(out)
}

/// The fillings with exactly one merged gap, in gap order; empty in depth < 2.
pub fn one_plus_fillings(k: &Index) -> Vec<Index> {
    let d = k.depth();
    if d < 2 {
        return Vec::new();
    }
    let parts = k.parts();
    (0..d - 1)
        .map(|g| {
            let mut merged = parts.to_vec();
            let absorbed = merged.remove(g + 1);
            merged[g] += absorbed;
            Index { parts: merged }
        })
        .collect()
}

/// Every admissible index of weight between 2 and `max_weight`, ordered by
/// weight; 2^(w-2) indices per weight w.
pub fn admissible_indices(max_weight: u32) -> Vec<Index> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    for w in 2..=max_weight {
        gen_admissible(w, &mut acc, &mut out);
    }
    out
}

fn gen_admissible(remaining: u32, acc: &mut Vec<u32>, out: &mut Vec<Index>) {
    debug_assert!(remaining >= 2);
    let mut parts = acc.clone();
    parts.push(remaining);
    out.push(Index { parts });
    for first in 1..=remaining.saturating_sub(2) {
        acc.push(first);
        gen_admissible(remaining - first, acc, out);
        acc.pop();
    }
}

/// All tuples of `parts` nonnegative integers summing to `total`, ascending
/// lexicographically. `parts = 0` gives the empty tuple for total 0 and
/// nothing otherwise.
pub fn compositions_nonneg(total: u32, parts: usize) -> Vec<NNComposition> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fill_compositions(total, parts, &mut cur, &mut out);
    out
}

fn fill_compositions(total: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<NNComposition>) {
    if parts == 0 {
        if total == 0 {
            out.push(NNComposition { parts: cur.clone() });
        }
        return;
    }
    if parts == 1 {
        cur.push(total);
        out.push(NNComposition { parts: cur.clone() });
        cur.pop();
        return;
    }
    for first in 0..=total {
        cur.push(first);
        fill_compositions(total - first, parts - 1, cur, out);
        cur.pop();
    }
}

/// Polynomial in t with BigReal coefficients, trailing exact zeros trimmed.
#[derive(Clone, Debug)]
pub struct TPoly {
    coeffs: Vec<BigReal>,
    prec: usize,
}

fn coeff_is_exact_zero(c: &BigReal) -> bool {
    c.is_zero() && c.err().is_zero()
}

impl TPoly {
    pub fn zero(prec: usize) -> Self {
        TPoly { coeffs: Vec::new(), prec }
    }

    pub fn from_coeffs(coeffs: Vec<BigReal>, prec: usize) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.prec() == prec));
        let mut p = TPoly { coeffs, prec };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if coeff_is_exact_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn coeff(&self, i: usize) -> BigReal {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| BigReal::zero(self.prec))
    }

    /// Adds `c * t^pow` in place.
    pub fn add_term(&mut self, pow: usize, c: &BigReal) {
        while self.coeffs.len() <= pow {
            self.coeffs.push(BigReal::zero(self.prec));
        }
        self.coeffs[pow] = self.coeffs[pow].add(c);
        self.trim();
    }
}

pub fn tpoly_add(a: &TPoly, b: &TPoly) -> TPoly {
    debug_assert_eq!(a.prec, b.prec);
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n).map(|i| a.coeff(i).add(&b.coeff(i))).collect();
    TPoly::from_coeffs(coeffs, a.prec)
}

pub fn tpoly_scale(p: &TPoly, c: &BigReal) -> TPoly {
    let coeffs = p.coeffs.iter().map(|x| x.mul(c)).collect();
    TPoly::from_coeffs(coeffs, p.prec)
}

pub fn tpoly_eval(p: &TPoly, t0: &BigReal) -> BigReal {
    let mut acc = BigReal::zero(p.prec);
    for c in p.coeffs.iter().rev() {
        acc = acc.mul(t0).add(c);
    }
    acc
}

pub fn tpoly_derivative(p: &TPoly) -> TPoly {
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul_u64(i as u64))
        .collect();
    TPoly::from_coeffs(coeffs, p.prec)
}
