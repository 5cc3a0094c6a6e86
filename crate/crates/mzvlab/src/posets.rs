//! Labeled 2-posets and their reduction to weighted sums of zeta words.
//!
//! The three shapes built here are chains for the interpolated values, and
//! two-chain trees with a common open top for the shifted ones. The ⊙ label
//! carries the kernel du/(1−u) + t·du/u and splits into Y at t⁰ and X at t¹.
//! Reducing a poset = expanding every ⊙, enumerating linear extensions, and
//! merging equal words into multiplicities.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::indices::Index;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    X,
    Y,
}

/// Integration word, position 0 the smallest variable: X ↔ du/u, Y ↔ du/(1−u).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// First letter Y and last letter X; exactly the convergent words.
    pub fn is_admissible(&self) -> bool {
        self.letters.first() == Some(&Letter::Y) && self.letters.last() == Some(&Letter::X)
    }

    /// Reverse and swap X ↔ Y (the duality involution on words).
    pub fn tau(&self) -> Word {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match l {
                Letter::X => Letter::Y,
                Letter::Y => Letter::X,
            })
            .collect();
        Word { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::X => "X",
                Letter::Y => "Y",
            })?;
        }
        Ok(())
    }
}

pub fn word_of_index(k: &Index) -> Result<Word> {
    if !k.is_admissible() {
        return Err(Error::Domain(format!("index {k} is not admissible")));
    }
    let mut letters = Vec::with_capacity(k.weight() as usize);
    for &p in k.parts() {
        letters.push(Letter::Y);
        letters.extend(std::iter::repeat_n(Letter::X, p as usize - 1));
    }
    Ok(Word { letters })
}

/// Inverse of `word_of_index`, extended to trailing-Y words (parts ending
/// in 1, used by the polylog pieces) and to the empty word.
pub fn index_of_word(w: &Word) -> Result<Index> {
    let mut parts: Vec<u32> = Vec::new();
    for l in w.letters() {
        match l {
            Letter::Y => parts.push(1),
            Letter::X => match parts.last_mut() {
                Some(p) => *p += 1,
                None => {
                    return Err(Error::Domain(format!("word {w} does not start with Y")));
                }
            },
        }
    }
    Index::new(parts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VLabel {
    X,
    Y,
    Circ,
}

/// Finite poset with {X, Y, ⊙} vertex labels, given by its cover relation.
/// Covers are (lower, upper) pairs; acyclicity is checked on enumeration.
#[derive(Clone, Debug)]
pub struct TwoPoset {
    labels: Vec<VLabel>,
    covers: Vec<(usize, usize)>,
}

impl TwoPoset {
    pub fn new(labels: Vec<VLabel>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        for &(a, b) in &covers {
            if a >= n || b >= n || a == b {
                return Err(Error::Structural(format!(
                    "cover ({a},{b}) out of range for {n} vertices"
                )));
            }
        }
        Ok(TwoPoset { labels, covers })
    }

    pub fn labels(&self) -> &[VLabel] {
        &self.labels
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    fn chain(labels: Vec<VLabel>) -> TwoPoset {
        let covers = (1..labels.len()).map(|i| (i - 1, i)).collect();
        TwoPoset { labels, covers }
    }
}

/// Chain letters of `k` bottom to top, every block leading with Y, except
/// that blocks after the first lead with ⊙ when `circ` is set.
fn block_letters(k: &Index, circ: bool) -> Vec<VLabel> {
    let mut labels = Vec::with_capacity(k.weight() as usize);
    for (i, &p) in k.parts().iter().enumerate() {
        labels.push(if circ && i > 0 { VLabel::Circ } else { VLabel::Y });
        labels.extend(std::iter::repeat_n(VLabel::X, p as usize - 1));
    }
    labels
}

/// Two chains under a common top X: the block letters of `k` on the left,
/// m−1 solid vertices on the right.
fn shifted_poset(k: &Index, m: u32, circ: bool) -> Result<TwoPoset> {
    if m < 1 {
        return Err(Error::Domain("shift parameter m must be >= 1".into()));
    }
    let mut labels = block_letters(k, circ);
    let left = labels.len();
    labels.push(VLabel::X);
    let top = left;
    let mut covers: Vec<(usize, usize)> = (1..=left).map(|i| (i - 1, i)).collect();
    for j in 0..(m - 1) as usize {
        let v = top + 1 + j;
        labels.push(VLabel::Y);
        covers.push(if j == 0 { (v, top) } else { (v, v - 1) });
    }
    Ok(TwoPoset { labels, covers })
}

pub fn xi_poset(k: &Index, m: u32) -> Result<TwoPoset> {
    shifted_poset(k, m, false)
}

pub fn takmzv_poset(k: &Index, m: u32) -> Result<TwoPoset> {
    shifted_poset(k, m, true)
}

pub fn tmzv_poset(k: &Index) -> Result<TwoPoset> {
    if !k.is_admissible() {
        return Err(Error::Domain(format!("index {k} is not admissible")));
    }
    Ok(TwoPoset::chain(block_letters(k, true)))
}

/// Resolves every ⊙ into Y (no t) or X (one factor t), in mask order over
/// the ⊙ vertices taken in id order; t_power counts the X choices.
pub fn expand_circ(p: &TwoPoset) -> Vec<(u32, TwoPoset)> {
    let circs: Vec<usize> = (0..p.labels.len())
        .filter(|&v| p.labels[v] == VLabel::Circ)
        .collect();
    let mut out = Vec::with_capacity(1 << circs.len());
    for mask in 0u64..(1u64 << circs.len()) {
        let mut labels = p.labels.clone();
        for (j, &v) in circs.iter().enumerate() {
            labels[v] = if mask >> j & 1 == 1 { VLabel::X } else { VLabel::Y };
        }
        out.push((
            mask.count_ones(),
            TwoPoset { labels, covers: p.covers.clone() },
        ));
    }
    out
}

/// All linear extensions as words, bottom vertex first, duplicates kept.
/// Branches in vertex-id order, so the output order is deterministic.
pub fn linear_extensions(p: &TwoPoset) -> Result<Vec<Word>> {
    let n = p.labels.len();
    assert!(n <= 64, "poset too large for the bitmask enumerator");
    let mut letters = vec![Letter::X; n];
    for (v, l) in p.labels.iter().enumerate() {
        letters[v] = match l {
            VLabel::X => Letter::X,
            VLabel::Y => Letter::Y,
            VLabel::Circ => {
                return Err(Error::Structural(format!(
                    "vertex {v} still labeled ⊙; expand_circ first"
                )));
            }
        };
    }
    let mut below = vec![0u64; n];
    for &(lo, hi) in &p.covers {
        below[hi] |= 1 << lo;
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    extend_all(&letters, &below, full, &mut prefix, &mut out)?;
    Ok(out)
}

fn extend_all(
    letters: &[Letter],
    below: &[u64],
    remaining: u64,
    prefix: &mut Vec<Letter>,
    out: &mut Vec<Word>,
) -> Result<()> {
    if remaining == 0 {
        out.push(Word::new(prefix.clone()));
        return Ok(());
    }
    let mut any = false;
    let mut rest = remaining;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if below[v] & remaining != 0 {
            continue;
        }
        any = true;
        prefix.push(letters[v]);
        extend_all(letters, below, remaining & !(1 << v), prefix, out)?;
        prefix.pop();
    }
    if !any {
        return Err(Error::Structural(
            "cover relation contains a cycle; no minimal vertex".into(),
        ));
    }
    Ok(())
}

/// Normal form of a reduced poset integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedWordSum {
    /// (t_power, index, multiplicity), sorted, multiplicities merged.
    pub terms: Vec<(u32, Index, u64)>,
}

/// Expands ⊙'s, enumerates extensions, converts words to indices, merges.
/// Every extension word must be admissible or the integral diverges.
pub fn poset_value(p: &TwoPoset) -> Result<WeightedWordSum> {
    let mut merged: BTreeMap<(u32, Index), u64> = BTreeMap::new();
    for (t_power, q) in expand_circ(p) {
        for w in linear_extensions(&q)? {
            if !w.is_admissible() {
                return Err(Error::Divergence { word: w.to_string() });
            }
            *merged.entry((t_power, index_of_word(&w)?)).or_insert(0) += 1;
        }
    }
    Ok(WeightedWordSum {
        terms: merged.into_iter().map(|((t, k), m)| (t, k, m)).collect(),
    })
}
