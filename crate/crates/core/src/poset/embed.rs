use std::ops::ControlFlow;

use super::{LatticeCopy, LatticeElement, Poset};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A map from the elements of a poset (by index) into `B(dim)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub dim: u32,
    pub images: Vec<LatticeElement>,
}

impl Embedding {
    pub fn image(&self, element: usize) -> &LatticeElement {
        &self.images[element]
    }

    /// The copy `f(P)` as an unordered set.
    pub fn copy(&self) -> LatticeCopy {
        LatticeCopy::new(self.images.clone())
    }
}

/// `true` iff `images` is injective and `images[x] ⊆ images[y] ⇔ x ≤ y`.
pub fn is_embedding(poset: &Poset, dim: u32, images: &[LatticeElement]) -> bool {
    if images.len() != poset.len() {
        return false;
    }
    if images.iter().any(|x| x.iter().any(|i| i > dim)) {
        return false;
    }
    for a in 0..images.len() {
        for b in 0..images.len() {
            if a != b && images[a] == images[b] {
                return false;
            }
            if images[a].is_subset(&images[b]) != poset.leq(a, b) {
                return false;
            }
        }
    }
    true
}

/// Where a backtracking embedding search draws its candidate images from.
pub(crate) enum Space<'a> {
    /// All of `B(dim)` as machine masks (`dim <= 63`).
    Lattice(u32),
    /// Abstract points `0..count` with the given order relation.
    Points {
        count: u64,
        le: &'a dyn Fn(u64, u64) -> bool,
    },
}

/// Depth-first search for order embeddings, visiting solutions in
/// lexicographic order of `(image of order[0], image of order[1], ...)`.
pub(crate) struct EmbeddingSearch<'a> {
    pub poset: &'a Poset,
    pub order: Vec<usize>,
    pub forced: Vec<Option<u64>>,
    pub space: Space<'a>,
    pub node_limit: u64,
    pub nodes: u64,
}

impl<'a> EmbeddingSearch<'a> {
    pub fn new(poset: &'a Poset, space: Space<'a>, node_limit: u64) -> Self {
        EmbeddingSearch {
            poset,
            order: poset.linear_extension(),
            forced: vec![None; poset.len()],
            space,
            node_limit,
            nodes: 0,
        }
    }

    fn le(&self, a: u64, b: u64) -> bool {
        match &self.space {
            Space::Lattice(_) => a & !b == 0,
            Space::Points { le, .. } => le(a, b),
        }
    }

    fn consistent(&self, x: usize, m: u64, images: &[Option<u64>]) -> bool {
        self.order.iter().all(|&y| match images[y] {
            None => true,
            Some(iy) => {
                iy != m
                    && self.le(iy, m) == self.poset.leq(y, x)
                    && self.le(m, iy) == self.poset.leq(x, y)
            }
        })
    }

    /// Runs the search; `visit` sees each complete embedding (indexed by
    /// element) and may stop the search early.
    pub fn run(
        &mut self,
        visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let mut images = vec![None; self.poset.len()];
        self.step(0, &mut images, visit)
    }

    fn bump(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::budget("embedding search nodes", self.node_limit));
        }
        Ok(())
    }

    fn step(
        &mut self,
        pos: usize,
        images: &mut Vec<Option<u64>>,
        visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        if pos == self.order.len() {
            let full: Vec<u64> = images.iter().map(|m| m.expect("all assigned")).collect();
            return Ok(visit(&full));
        }
        let x = self.order[pos];
        let candidates: Box<dyn Iterator<Item = u64>> = if let Some(m) = self.forced[x] {
            Box::new(std::iter::once(m))
        } else {
            match self.space {
                Space::Lattice(dim) => {
                    let all = if dim == 64 {
                        u64::MAX
                    } else {
                        (1u64 << dim) - 1
                    };
                    let mut lower = 0u64;
                    let mut upper = all;
                    for (y, iy) in images.iter().enumerate() {
                        if let Some(iy) = iy {
                            if self.poset.leq(y, x) {
                                lower |= iy;
                            }
                            if self.poset.leq(x, y) {
                                upper &= iy;
                            }
                        }
                    }
                    if lower & !upper != 0 {
                        Box::new(std::iter::empty())
                    } else {
                        Box::new(Submasks::new(upper & !lower).map(move |s| s | lower))
                    }
                }
                Space::Points { count, .. } => Box::new(0..count),
            }
        };
        for m in candidates {
            self.bump()?;
            if !self.consistent(x, m, images) {
                continue;
            }
            images[x] = Some(m);
            let flow = self.step(pos + 1, images, visit)?;
            images[x] = None;
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Submasks of a mask in increasing numeric order.
struct Submasks {
    mask: u64,
    next: Option<u64>,
}

impl Submasks {
    fn new(mask: u64) -> Self {
        Submasks {
            mask,
            next: Some(0),
        }
    }
}

impl Iterator for Submasks {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some(((cur | !self.mask).wrapping_add(1)) & self.mask)
        };
        Some(cur)
    }
}

/// Smallest `d` with an embedding `P → B(d)` sending the greatest element to
/// `{1..d}` and the least element to `∅`, and the first such embedding in
/// search order (bottom and top fixed, remaining elements in linear-extension
/// order, candidates in numeric mask order).
pub fn find_base_embedding(poset: &Poset, budget: &Budget) -> Result<(u32, Embedding)> {
    let (top, bottom) = match (poset.top(), poset.bottom()) {
        (Some(t), Some(b)) => (t, b),
        _ => {
            return Err(Error::Precondition(
                "poset needs a greatest and a least element".into(),
            ))
        }
    };
    let s = poset.len() as u64;
    let start = if s <= 1 {
        0
    } else {
        64 - (s - 1).leading_zeros()
    };
    let cap = budget.max_embedding_dim.min(63);
    for d in start..=cap {
        let mut search = EmbeddingSearch::new(poset, Space::Lattice(d), budget.nodes);
        let full = (1u64 << d) - 1;
        search.forced[bottom] = Some(0);
        search.forced[top] = Some(full);
        let mut order = vec![bottom];
        if top != bottom {
            order.push(top);
        }
        order.extend(
            poset
                .linear_extension()
                .into_iter()
                .filter(|&x| x != top && x != bottom),
        );
        search.order = order;
        let mut found = None;
        let _ = search.run(&mut |imgs| {
            found = Some(imgs.to_vec());
            ControlFlow::Break(())
        })?;
        if let Some(masks) = found {
            let images = masks
                .iter()
                .map(|&m| LatticeElement::from_mask(d, m))
                .collect();
            return Ok((d, Embedding { dim: d, images }));
        }
    }
    Err(Error::budget("base embedding dimension", u64::from(cap)))
}

fn check_base(poset: &Poset, psi: &Embedding) -> Result<(usize, usize)> {
    let (top, bottom) = match (poset.top(), poset.bottom()) {
        (Some(t), Some(b)) => (t, b),
        _ => {
            return Err(Error::Precondition(
                "poset needs a greatest and a least element".into(),
            ))
        }
    };
    if !is_embedding(poset, psi.dim, &psi.images)
        || psi.images[top] != LatticeElement::full(psi.dim)
        || !psi.images[bottom].is_empty()
    {
        return Err(Error::Precondition(
            "base map is not an embedding fixing top and bottom".into(),
        ));
    }
    Ok((top, bottom))
}

/// Lifts a base embedding `ψ : P → B(d)` to `φ : P → B(n)` whose image
/// occupies exactly the levels in `levels`.
///
/// Elements are taken in order of `|ψ(p)|` (ties by index) and matched with
/// the levels in increasing order; `φ(p) = ψ(p) ∪ {d+1, ..., d + a - |ψ(p)|}`.
pub fn scattered_embedding(
    poset: &Poset,
    psi: &Embedding,
    n: u32,
    levels: &[u32],
) -> Result<Embedding> {
    check_base(poset, psi)?;
    let d = psi.dim;
    let s = poset.len();
    if levels.len() != s {
        return Err(Error::Precondition(format!(
            "need {s} levels, got {}",
            levels.len()
        )));
    }
    let mut sorted = levels.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[1] < w[0] + d.max(1)) {
        return Err(Error::Precondition(format!(
            "levels {sorted:?} are not {d}-scattered"
        )));
    }
    if let Some(&max) = sorted.last() {
        if max > n {
            return Err(Error::Precondition(format!("level {max} exceeds n = {n}")));
        }
    }
    if u64::from(n) < (s as u64 - 1) * u64::from(d) {
        return Err(Error::Precondition(format!(
            "n = {n} is below (|P| - 1)·d = {}",
            (s as u64 - 1) * u64::from(d)
        )));
    }
    let mut by_level: Vec<usize> = (0..s).collect();
    by_level.sort_by_key(|&p| (psi.images[p].len(), p));
    let mut images = vec![LatticeElement::empty(n); s];
    for (&p, &a) in by_level.iter().zip(&sorted) {
        let base = &psi.images[p];
        let pad = a - base.len();
        let mut img = base.with_dim(n)?;
        for j in d + 1..=d + pad {
            img.insert(j);
        }
        images[p] = img;
    }
    Ok(Embedding { dim: n, images })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremeRole {
    /// The copy's greatest element is `x`.
    Top,
    /// The copy's least element is `x`.
    Bottom,
}

/// A copy of `P` in `B(n)` with `x` as its greatest (or least) element.
///
/// For `Top`, `D` is the `d` lowest-numbered ground elements of `x` and the
/// copy sits in the interval `[x ∖ D, x]`; for `Bottom`, `D` is the `d`
/// lowest-numbered elements outside `x` and the copy sits in `[x, x ∪ D]`.
pub fn copy_with_extreme(
    poset: &Poset,
    psi: &Embedding,
    n: u32,
    x: &LatticeElement,
    role: ExtremeRole,
) -> Result<Embedding> {
    check_base(poset, psi)?;
    let d = psi.dim;
    if x.dim() != n {
        return Err(Error::Precondition(format!(
            "{x} is not an element of B({n})"
        )));
    }
    let free: Vec<u32> = match role {
        ExtremeRole::Top => {
            if x.len() < d {
                return Err(Error::Precondition(format!("|{x}| < d = {d}")));
            }
            x.iter().take(d as usize).collect()
        }
        ExtremeRole::Bottom => {
            if x.len() + d > n {
                return Err(Error::Precondition(format!("|{x}| > n - d = {}", n - d)));
            }
            (1..=n)
                .filter(|&i| !x.contains(i))
                .take(d as usize)
                .collect()
        }
    };
    let mut base = x.clone();
    if role == ExtremeRole::Top {
        for &i in &free {
            base.remove(i);
        }
    }
    let images = psi
        .images
        .iter()
        .map(|img| {
            let mut out = base.clone();
            for j in img.iter() {
                out.insert(free[(j - 1) as usize]);
            }
            out
        })
        .collect();
    Ok(Embedding { dim: n, images })
}
