use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// An element of the Boolean lattice `B(n)`: a subset of `{1, ..., n}`.
///
/// Stored as a little-endian word vector so that `n` is not bounded by a
/// machine word. Ordering is numeric on the mask (bit `i - 1` encodes ground
/// element `i`), which is the candidate order used by every search in the
/// crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeElement {
    dim: u32,
    words: Vec<u64>,
}

fn word_count(dim: u32) -> usize {
    (dim as usize).div_ceil(64)
}

impl LatticeElement {
    pub fn empty(dim: u32) -> Self {
        LatticeElement {
            dim,
            words: vec![0; word_count(dim)],
        }
    }

    pub fn full(dim: u32) -> Self {
        let mut e = Self::empty(dim);
        for i in 1..=dim {
            e.insert(i);
        }
        e
    }

    /// Builds an element from 1-based ground indices.
    pub fn from_indices<I: IntoIterator<Item = u32>>(dim: u32, indices: I) -> Result<Self> {
        let mut e = Self::empty(dim);
        for i in indices {
            if i == 0 || i > dim {
                return Err(Error::InvalidInput(format!(
                    "ground element {i} outside 1..={dim}"
                )));
            }
            e.insert(i);
        }
        Ok(e)
    }

    /// Builds an element from a machine mask; bit `j` is ground element `j + 1`.
    pub fn from_mask(dim: u32, mask: u64) -> Self {
        debug_assert!(dim >= 64 || mask >> dim == 0);
        let mut e = Self::empty(dim);
        if !e.words.is_empty() {
            e.words[0] = mask;
        }
        e
    }

    /// The mask as a machine word, if every set bit fits.
    pub fn to_mask(&self) -> Option<u64> {
        if self.words.iter().skip(1).any(|&w| w != 0) {
            return None;
        }
        Some(self.words.first().copied().unwrap_or(0))
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `|x|`, the level of the element.
    pub fn len(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, i: u32) -> bool {
        if i == 0 || i > self.dim {
            return false;
        }
        let b = (i - 1) as usize;
        self.words[b / 64] >> (b % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: u32) {
        assert!(
            i >= 1 && i <= self.dim,
            "ground element {i} outside 1..={}",
            self.dim
        );
        let b = (i - 1) as usize;
        self.words[b / 64] |= 1 << (b % 64);
    }

    pub fn remove(&mut self, i: u32) {
        if i >= 1 && i <= self.dim {
            let b = (i - 1) as usize;
            self.words[b / 64] &= !(1 << (b % 64));
        }
    }

    pub fn is_subset(&self, other: &LatticeElement) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
            && self.words.iter().skip(other.words.len()).all(|&w| w == 0)
    }

    pub fn union(&self, other: &LatticeElement) -> LatticeElement {
        let dim = self.dim.max(other.dim);
        let mut out = LatticeElement::empty(dim);
        for (i, w) in out.words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0);
        }
        out
    }

    pub fn difference(&self, other: &LatticeElement) -> LatticeElement {
        let mut out = self.clone();
        for (i, w) in out.words.iter_mut().enumerate() {
            *w &= !other.words.get(i).copied().unwrap_or(0);
        }
        out
    }

    /// Ground elements in increasing order, 1-based.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=self.dim).filter(move |&i| self.contains(i))
    }

    /// Same subset viewed inside a lattice of another dimension.
    pub fn with_dim(&self, dim: u32) -> Result<LatticeElement> {
        LatticeElement::from_indices(dim, self.iter())
    }

    /// Image of the element under a permutation of the ground set, given as
    /// a 0-based table `perm[i - 1] = image of i` (values 1-based).
    pub fn permuted(&self, perm: &[u32]) -> LatticeElement {
        let mut out = LatticeElement::empty(self.dim);
        for i in self.iter() {
            out.insert(perm[(i - 1) as usize]);
        }
        out
    }
}

impl Ord for LatticeElement {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.words.len().max(other.words.len());
        for i in (0..n).rev() {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.dim.cmp(&other.dim)
    }
}

impl PartialOrd for LatticeElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// A subset of `B(n)`, kept sorted and duplicate-free so that equal sets
/// compare and hash equal. Used as the key for weight functions on copies.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeCopy(Vec<LatticeElement>);

impl LatticeCopy {
    pub fn new(mut elements: Vec<LatticeElement>) -> Self {
        elements.sort();
        elements.dedup();
        LatticeCopy(elements)
    }

    pub fn elements(&self) -> &[LatticeElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &LatticeElement) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn dim(&self) -> Option<u32> {
        self.0.first().map(LatticeElement::dim)
    }

    /// Number of members on level `k`.
    pub fn count_on_level(&self, k: u32) -> usize {
        self.0.iter().filter(|x| x.len() == k).count()
    }

    pub fn permuted(&self, perm: &[u32]) -> LatticeCopy {
        LatticeCopy::new(self.0.iter().map(|x| x.permuted(perm)).collect())
    }
}

impl fmt::Debug for LatticeCopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}
