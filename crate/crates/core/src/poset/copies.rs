use std::collections::BTreeSet;
use std::ops::ControlFlow;

use super::embed::{EmbeddingSearch, Space};
use super::{LatticeCopy, LatticeElement, Poset};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Every subset of `B(n)` on which the inclusion order is isomorphic to `P`,
/// sorted and without duplicates.
pub fn enumerate_copies(poset: &Poset, n: u32, budget: &Budget) -> Result<Vec<LatticeCopy>> {
    if n > budget.max_enumeration_dim.min(63) {
        return Err(Error::budget(
            format!("copy enumeration in B({n})"),
            u64::from(budget.max_enumeration_dim),
        ));
    }
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut search = EmbeddingSearch::new(poset, Space::Lattice(n), budget.nodes);
    let _ = search.run(&mut |imgs| {
        let mut key = imgs.to_vec();
        key.sort_unstable();
        seen.insert(key);
        ControlFlow::Continue(())
    })?;
    Ok(seen
        .into_iter()
        .map(|masks| {
            LatticeCopy::new(
                masks
                    .into_iter()
                    .map(|m| LatticeElement::from_mask(n, m))
                    .collect(),
            )
        })
        .collect())
}

/// `true` iff the inclusion order on `set` is isomorphic to `P`.
pub fn is_copy(poset: &Poset, set: &LatticeCopy) -> bool {
    let elems = set.elements();
    if elems.len() != poset.len() {
        return false;
    }
    let le = |a: u64, b: u64| elems[a as usize].is_subset(&elems[b as usize]);
    let mut search = EmbeddingSearch::new(
        poset,
        Space::Points {
            count: elems.len() as u64,
            le: &le,
        },
        u64::MAX,
    );
    let mut found = false;
    // the node limit is u64::MAX, so the search cannot fail
    let _ = search.run(&mut |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}
