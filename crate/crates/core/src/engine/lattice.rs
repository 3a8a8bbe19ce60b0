use std::collections::HashMap;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poset::{is_copy, LatticeCopy, LatticeElement, Poset};

/// A claimed partition of `B(n)` into copies of `poset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePartition {
    pub poset: Poset,
    pub n: u32,
    pub tiles: Vec<LatticeCopy>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LatticeReport {
    /// Tiles that are not copies of the poset, by position.
    pub not_copies: Vec<usize>,
    /// Elements lying in two tiles, with the tile positions.
    pub overlaps: Vec<(LatticeElement, usize, usize)>,
    /// Number of elements of `B(n)` covered by no tile.
    pub uncovered: u64,
    pub first_uncovered: Option<LatticeElement>,
}

impl LatticeReport {
    pub fn is_ok(&self) -> bool {
        self.not_copies.is_empty() && self.overlaps.is_empty() && self.uncovered == 0
    }
}

pub fn verify_lattice_partition(p: &LatticePartition, budget: &Budget) -> Result<LatticeReport> {
    if p.n > 63 || (1u64 << p.n) > budget.cells {
        return Err(Error::budget(
            format!("checking all of B({})", p.n),
            budget.cells,
        ));
    }
    let mut report = LatticeReport::default();
    let mut owner: HashMap<u64, usize> = HashMap::new();
    for (ti, tile) in p.tiles.iter().enumerate() {
        if tile.dim().is_some_and(|d| d != p.n) || !is_copy(&p.poset, tile) {
            report.not_copies.push(ti);
        }
        for x in tile.elements() {
            let Some(mask) = x.to_mask().filter(|_| x.dim() == p.n) else {
                report.not_copies.push(ti);
                continue;
            };
            if let Some(&prev) = owner.get(&mask) {
                report.overlaps.push((x.clone(), prev, ti));
            } else {
                owner.insert(mask, ti);
            }
        }
    }
    report.not_copies.dedup();
    for mask in 0..1u64 << p.n {
        if !owner.contains_key(&mask) {
            report.uncovered += 1;
            if report.first_uncovered.is_none() {
                report.first_uncovered = Some(LatticeElement::from_mask(p.n, mask));
            }
        }
    }
    Ok(report)
}

/// From partitions of `B(n)` into copies of `P` and of `B(m)` into copies
/// of `Q`, the partition of `B(n+m)` into copies of `P × Q` with tiles
/// `{x ∪ (y + n)}`.
pub fn product_compose(p: &LatticePartition, q: &LatticePartition) -> Result<LatticePartition> {
    let n = p.n + q.n;
    let shift = |y: &LatticeElement| -> Result<LatticeElement> {
        LatticeElement::from_indices(n, y.iter().map(|i| i + p.n))
    };
    let mut tiles = Vec::with_capacity(p.tiles.len() * q.tiles.len());
    for a in &p.tiles {
        for b in &q.tiles {
            let mut elems = Vec::with_capacity(a.len() * b.len());
            for x in a.elements() {
                let x = x.with_dim(n)?;
                for y in b.elements() {
                    elems.push(x.union(&shift(y)?));
                }
            }
            tiles.push(LatticeCopy::new(elems));
        }
    }
    tiles.sort();
    Ok(LatticePartition {
        poset: p.poset.product(&q.poset),
        n,
        tiles,
    })
}
