use super::cover::{exact_cover_solve, CoverMode, CoverProblem};
use crate::budget::Budget;
use crate::engine::LatticePartition;
use crate::error::{Error, Result};
use crate::poset::{enumerate_copies, Poset};

/// Outcome of searching for partitions of `B(n)` into copies of a poset.
/// An empty `partitions` with `count == 0` is UNSAT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSearch {
    pub copies: usize,
    pub count: u64,
    pub partitions: Vec<LatticePartition>,
    pub nodes: u64,
}

impl LatticeSearch {
    pub fn is_unsat(&self) -> bool {
        self.count == 0
    }
}

/// Exact cover of `B(n)` by all copies of `poset`.
pub fn direct_lattice_partition(
    poset: &Poset,
    n: u32,
    mode: CoverMode,
    budget: &Budget,
) -> Result<LatticeSearch> {
    if n > 24 || (1u64 << n) > budget.cells {
        return Err(Error::budget(format!("searching B({n})"), budget.cells));
    }
    let copies = enumerate_copies(poset, n, budget)?;
    let candidates = copies
        .iter()
        .map(|c| {
            c.elements()
                .iter()
                .map(|x| x.to_mask().unwrap_or(0) as usize)
                .collect()
        })
        .collect();
    let problem = CoverProblem::new(1 << n, candidates)?;
    let out = exact_cover_solve(&problem, mode, budget.nodes)?;
    let partitions = out
        .solutions
        .iter()
        .map(|sol| LatticePartition {
            poset: poset.clone(),
            n,
            tiles: sol.iter().map(|&i| copies[i].clone()).collect(),
        })
        .collect();
    Ok(LatticeSearch {
        copies: copies.len(),
        count: out.count,
        partitions,
        nodes: out.nodes,
    })
}
