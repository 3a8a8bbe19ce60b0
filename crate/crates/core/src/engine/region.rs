use super::instance::{members, Set};

/// A product `F_1 × ... × F_d` of ground subsets. A box with no factors is
/// the one-point set `S^0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Box {
    pub factors: Vec<Set>,
}

impl Box {
    pub fn new(factors: Vec<Set>) -> Self {
        Box { factors }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.contains(&0)
    }

    pub fn cells(&self) -> u128 {
        self.factors
            .iter()
            .map(|f| u128::from(f.count_ones()))
            .product()
    }

    pub fn intersect(&self, other: &Box) -> Box {
        Box::new(
            self.factors
                .iter()
                .zip(&other.factors)
                .map(|(a, b)| a & b)
                .collect(),
        )
    }

    pub fn is_subset(&self, other: &Box) -> bool {
        self.is_empty()
            || self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| a & !b == 0)
    }

    /// `self × other`
    pub fn product(&self, other: &Box) -> Box {
        Box::new(self.factors.iter().chain(&other.factors).copied().collect())
    }

    /// `self ∖ other` as disjoint boxes: the `j`-th piece agrees with
    /// `other` before coordinate `j` and avoids it at `j`.
    pub fn subtract(&self, other: &Box) -> Vec<Box> {
        let meet = self.intersect(other);
        if meet.is_empty() {
            return if self.is_empty() {
                vec![]
            } else {
                vec![self.clone()]
            };
        }
        let mut out = Vec::new();
        for j in 0..self.dim() {
            let rest = self.factors[j] & !other.factors[j];
            if rest == 0 {
                continue;
            }
            let mut f = Vec::with_capacity(self.dim());
            f.extend_from_slice(&meet.factors[..j]);
            f.push(rest);
            f.extend_from_slice(&self.factors[j + 1..]);
            out.push(Box::new(f));
        }
        out
    }

    pub fn contains(&self, cell: &[u8]) -> bool {
        self.factors.iter().zip(cell).all(|(f, &v)| f >> v & 1 == 1)
    }

    /// Calls `visit` on every cell, in lexicographic order of ground indices.
    pub fn for_each_cell(&self, mut visit: impl FnMut(&[u8])) {
        if self.is_empty() {
            return;
        }
        let lists: Vec<Vec<u8>> = self.factors.iter().map(|&f| members(f).collect()).collect();
        let mut pos = vec![0usize; lists.len()];
        let mut cell: Vec<u8> = lists.iter().map(|l| l[0]).collect();
        loop {
            visit(&cell);
            let mut j = lists.len();
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                pos[j] += 1;
                if pos[j] < lists[j].len() {
                    cell[j] = lists[j][pos[j]];
                    break;
                }
                pos[j] = 0;
                cell[j] = lists[j][0];
            }
        }
    }
}

/// A union of pairwise-disjoint boxes of one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    dim: usize,
    boxes: Vec<Box>,
}

impl Region {
    pub fn empty(dim: usize) -> Self {
        Region {
            dim,
            boxes: Vec::new(),
        }
    }

    pub fn from_box(b: Box) -> Self {
        let dim = b.dim();
        let boxes = if b.is_empty() { vec![] } else { vec![b] };
        Region { dim, boxes }
    }

    /// Wraps boxes that the caller asserts are pairwise disjoint.
    pub fn from_disjoint(dim: usize, boxes: Vec<Box>) -> Self {
        debug_assert!(boxes.iter().all(|b| b.dim() == dim));
        Region {
            dim,
            boxes: boxes.into_iter().filter(|b| !b.is_empty()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[Box] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn cells(&self) -> u128 {
        self.boxes.iter().map(Box::cells).sum()
    }

    pub fn subtract_box(&self, other: &Box) -> Region {
        let boxes = self.boxes.iter().flat_map(|b| b.subtract(other)).collect();
        Region {
            dim: self.dim,
            boxes,
        }
    }

    pub fn subtract(&self, other: &Region) -> Region {
        other
            .boxes
            .iter()
            .fold(self.clone(), |acc, b| acc.subtract_box(b))
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut boxes = self.boxes.clone();
        boxes.extend(other.subtract(self).boxes);
        Region {
            dim: self.dim,
            boxes,
        }
    }

    pub fn intersect_box(&self, other: &Box) -> Region {
        let boxes = self
            .boxes
            .iter()
            .map(|b| b.intersect(other))
            .filter(|b| !b.is_empty())
            .collect();
        Region {
            dim: self.dim,
            boxes,
        }
    }

    pub fn meets_box(&self, other: &Box) -> bool {
        self.boxes.iter().any(|b| !b.intersect(other).is_empty())
    }

    /// `self × b`
    pub fn product_box(&self, b: &Box) -> Region {
        let boxes = self
            .boxes
            .iter()
            .map(|x| x.product(b))
            .filter(|x| !x.is_empty())
            .collect();
        Region {
            dim: self.dim + b.dim(),
            boxes,
        }
    }

    /// `self × other`
    pub fn product_region(&self, other: &Region) -> Region {
        let boxes = self
            .boxes
            .iter()
            .flat_map(|a| other.boxes.iter().map(move |b| a.product(b)))
            .collect();
        Region {
            dim: self.dim + other.dim,
            boxes,
        }
    }

    pub fn contains(&self, cell: &[u8]) -> bool {
        self.boxes.iter().any(|b| b.contains(cell))
    }

    pub fn for_each_cell(&self, mut visit: impl FnMut(&[u8])) {
        for b in &self.boxes {
            b.for_each_cell(&mut visit);
        }
    }

    /// Per-coordinate union of the factors.
    pub fn bounding(&self) -> Vec<Set> {
        let mut out = vec![0; self.dim];
        for b in &self.boxes {
            for (o, f) in out.iter_mut().zip(&b.factors) {
                *o |= f;
            }
        }
        out
    }

    /// Canonical form: boxes sorted.
    pub fn sorted(mut self) -> Self {
        self.boxes.sort();
        self
    }
}
