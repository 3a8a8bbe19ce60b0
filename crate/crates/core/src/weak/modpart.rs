use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ValueDomain, WeakCertificate, WeakKind, WeightFunction};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poset::{
    copy_with_extreme, find_base_embedding, Embedding, ExtremeRole, LatticeCopy, LatticeElement,
    Poset,
};

/// Replaces every weight by its residue in `{0, ..., r - 1}`.
pub fn reduce_mod_r(
    w: &WeightFunction<LatticeCopy>,
    r: &BigUint,
) -> Result<WeightFunction<LatticeCopy>> {
    if r.is_zero() {
        return Err(Error::InvalidInput("r must be positive".into()));
    }
    let r = BigInt::from(r.clone());
    let mut out = WeightFunction::new(ValueDomain::NonNegInteger);
    for (copy, v) in w.iter() {
        if !v.is_integer() {
            return Err(Error::InvalidInput(format!("weight {v} is not an integer")));
        }
        out.set(
            copy.clone(),
            BigRational::from_integer(v.to_integer().mod_floor(&r)),
        )?;
    }
    Ok(out)
}

struct Moves<'a> {
    poset: &'a Poset,
    psi: &'a Embedding,
    n: u32,
    top: usize,
    bottom: usize,
    acc: BTreeMap<LatticeCopy, BigInt>,
}

impl Moves<'_> {
    fn put(&mut self, images: Vec<LatticeElement>, c: &BigInt) {
        let e = self
            .acc
            .entry(LatticeCopy::new(images))
            .or_insert_with(BigInt::zero);
        *e += c;
    }

    /// Adds `c·(ind{x} - ind{x_+})` when `|x| ≥ d`, or `c·(ind{x} - ind{x_-})`
    /// otherwise, as the difference of two copies sharing all but one element.
    fn unit(&mut self, x: &LatticeElement, c: &BigInt) -> Result<()> {
        let upper = x.len() >= self.psi.dim;
        let (role, slot, far) = if upper {
            (ExtremeRole::Top, self.top, LatticeElement::full(self.n))
        } else {
            (
                ExtremeRole::Bottom,
                self.bottom,
                LatticeElement::empty(self.n),
            )
        };
        if *x == far {
            return Ok(());
        }
        let a = copy_with_extreme(self.poset, self.psi, self.n, x, role)?;
        let mut swapped = a.images.clone();
        swapped[slot] = far;
        self.put(a.images, c);
        self.put(swapped, &-c);
        Ok(())
    }
}

/// Builds a weighting of copies of `P` in `B(n)`, `n = max(2d - 1, 1)`,
/// whose multiplicities are all `≡ 1 (mod r)`; the integer stage before
/// reduction has every multiplicity exactly 1.
///
/// The upper class (levels `≥ d`) and the lower class (levels `< d`) each
/// have `2^(n-1)` elements. The base function puts `2^(n-1-k)` on the copy
/// with least element `∅` and on the copy with greatest element `[n]`; each
/// contributes one element to one class and `2^k - 1` to the other, so the
/// base already has the right total on each class. The remaining
/// difference is routed inside each class by moves `ind{x} - ind{x_±}`.
pub fn build_mod_certificate(
    poset: &Poset,
    r: &BigUint,
    budget: &Budget,
) -> Result<WeakCertificate> {
    if r.is_zero() {
        return Err(Error::InvalidInput("r must be positive".into()));
    }
    let k = poset.log2_size().ok_or_else(|| {
        Error::Precondition(format!("|P| = {} is not a power of two", poset.len()))
    })?;
    let (d, psi) = find_base_embedding(poset, budget)?;
    let (top, bottom) = (poset.top().unwrap_or(0), poset.bottom().unwrap_or(0));
    let n = (2 * d).saturating_sub(1).max(1);
    if n > budget.max_enumeration_dim.min(30) {
        return Err(Error::budget(
            format!("mod-partition over B({n})"),
            u64::from(budget.max_enumeration_dim.min(30)),
        ));
    }

    let mut moves = Moves {
        poset,
        psi: &psi,
        n,
        top,
        bottom,
        acc: BTreeMap::new(),
    };
    let cells = 1u64 << n;
    let mut target: Vec<BigInt> = vec![BigInt::one(); cells as usize];

    let low = copy_with_extreme(
        poset,
        &psi,
        n,
        &LatticeElement::empty(n),
        ExtremeRole::Bottom,
    )?;
    let base: Vec<(Embedding, BigInt)> = if d >= 2 {
        let high = copy_with_extreme(poset, &psi, n, &LatticeElement::full(n), ExtremeRole::Top)?;
        let c = BigInt::one() << (n - 1 - k);
        vec![(low, c.clone()), (high, c)]
    } else {
        vec![(low, BigInt::one() << (n - k))]
    };
    for (emb, c) in &base {
        for img in &emb.images {
            target[img.to_mask().unwrap_or(0) as usize] -= c;
        }
        moves.put(emb.images.clone(), c);
    }

    // pair surpluses with deficits inside each class, closest levels first
    let class = |m: u64| m.count_ones() >= d;
    let mut surplus: Vec<(u64, BigInt)> = Vec::new();
    let mut deficit: Vec<(u64, BigInt)> = Vec::new();
    for (m, v) in target.iter().enumerate() {
        if v.is_positive() {
            surplus.push((m as u64, v.clone()));
        } else if v.is_negative() {
            deficit.push((m as u64, -v));
        }
    }
    let mut pairs: Vec<(u32, u64, u64, usize, usize)> = Vec::new();
    for (i, (x, _)) in surplus.iter().enumerate() {
        for (j, (y, _)) in deficit.iter().enumerate() {
            if class(*x) == class(*y) {
                let gap = x.count_ones().abs_diff(y.count_ones());
                pairs.push((gap, *x, *y, i, j));
            }
        }
    }
    pairs.sort_unstable();
    for (_, x, y, i, j) in pairs {
        let c = surplus[i].1.clone().min(deficit[j].1.clone());
        if !c.is_positive() {
            continue;
        }
        surplus[i].1 -= &c;
        deficit[j].1 -= &c;
        moves.unit(&LatticeElement::from_mask(n, x), &c)?;
        moves.unit(&LatticeElement::from_mask(n, y), &-&c)?;
    }
    if surplus.iter().chain(&deficit).any(|(_, v)| !v.is_zero()) {
        return Err(Error::Precondition("class totals do not balance".into()));
    }

    let mut stage = WeightFunction::new(ValueDomain::Integer);
    for (copy, v) in moves.acc {
        stage.set(copy, BigRational::from_integer(v))?;
    }
    let weights = reduce_mod_r(&stage, r)?;
    Ok(WeakCertificate {
        kind: WeakKind::ModPartition,
        poset: poset.clone(),
        n,
        r: r.clone(),
        base_embedding: psi,
        weights,
        integer_stage: Some(stage),
    })
}
