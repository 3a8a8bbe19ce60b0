use std::collections::BTreeSet;

use super::cert::{verify_certificate, PartitionCertificate};
use super::instance::{MemberRef, ProductInstance};
use super::region::{Box, Region};
use super::tiles::Tiles;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// `C_{i,d}`: `Bc` at coordinate `i` (1-based), `Ac` elsewhere; all `Ac`
/// when `i = 0`.
pub fn corner_box(inst: &ProductInstance, i: usize, d: usize) -> Result<Box> {
    if i > d {
        return Err(Error::InvalidInput(format!(
            "corner index {i} exceeds dimension {d}"
        )));
    }
    Ok(corner(inst, i, d))
}

pub(crate) fn corner(inst: &ProductInstance, i: usize, d: usize) -> Box {
    let mut f = vec![inst.ac(); d];
    if i >= 1 {
        f[i - 1] = inst.bc();
    }
    Box::new(f)
}

pub(crate) fn u_box(inst: &ProductInstance, d: usize) -> Box {
    Box::new(vec![inst.u(); d])
}

pub(crate) fn check_cells(region: &Region, budget: &Budget) -> Result<()> {
    if region.cells() > u128::from(budget.cells) {
        return Err(Error::budget(
            format!("{} cells", region.cells()),
            budget.cells,
        ));
    }
    Ok(())
}

/// Tiles of `U^k ∖ X` lifted to `U^{k+1} ∖ (X × Ac)`.
pub(crate) fn blowup_tiles(inst: &ProductInstance, tiles: &Tiles) -> Tiles {
    let k = tiles.dim();
    let mut out = tiles.times(inst.ac());
    let mut b = u_box(inst, k);
    b.factors.push(inst.a);
    out.fill_box(MemberRef::A, k, &b);
    out
}

/// Tiles of `U^k ∖ C_{i,k}` by copies of `A` and `B`. `k = 0` gives the
/// empty tiling of `U^0 ∖ C_{0,0} = ∅`.
pub(crate) fn onecorner_tiles(inst: &ProductInstance, k: usize, i: usize) -> Tiles {
    debug_assert!(i <= k);
    match (k, i) {
        (0, _) => Tiles::new(0),
        (1, _) => {
            let mut t = Tiles::new(1);
            let (m, set) = if i == 0 {
                (MemberRef::A, inst.a)
            } else {
                (MemberRef::B, inst.b)
            };
            t.fill_box(m, 0, &Box::new(vec![set]));
            t
        }
        _ if i < k => blowup_tiles(inst, &onecorner_tiles(inst, k - 1, i)),
        _ => onecorner_tiles(inst, k, 1).permute(&swap(k, 0, k - 1)),
    }
}

fn swap(d: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    p.swap(a, b);
    p
}

/// Tiles of `U^{k+1} ∖ Y`, `Y = ((X × Ac) ∪ C_{k+1,k+1}) ∖ C_{i,k+1}`, from
/// tiles of `U^k ∖ X` where `C_{i,k} ⊆ X`.
pub(crate) fn modify_tiles(inst: &ProductInstance, tiles: &Tiles, i: usize) -> Tiles {
    let k = tiles.dim();
    let mut out = onecorner_tiles(inst, k, 0).times(inst.bc());
    out.append(onecorner_tiles(inst, k, i).times(inst.a & inst.b));
    let mut z3 = corner(inst, i, k);
    z3.factors.push(inst.b);
    out.fill_box(MemberRef::B, k, &z3);
    out.append(tiles.times(inst.ac()));
    out
}

pub(crate) fn changes_tiles(
    inst: &ProductInstance,
    k: usize,
    l: usize,
    is: &BTreeSet<usize>,
    js: &BTreeSet<usize>,
) -> Tiles {
    if l == 0 {
        return Tiles::new(k);
    }
    if js.contains(&(k + l)) {
        let i_star = *is.iter().next().expect("|I| = |J|");
        let mut is = is.clone();
        is.remove(&i_star);
        let mut js = js.clone();
        js.remove(&(k + l));
        modify_tiles(inst, &changes_tiles(inst, k, l - 1, &is, &js), i_star)
    } else {
        blowup_tiles(inst, &changes_tiles(inst, k, l - 1, is, js))
    }
}

/// `U^{k+l} ∖ Y` with `Y = ((U^k × Ac^l) ∪ ⋃_J C_j) ∖ ⋃_I C_i`.
pub(crate) fn changes_region(
    inst: &ProductInstance,
    k: usize,
    l: usize,
    is: &BTreeSet<usize>,
    js: &BTreeSet<usize>,
) -> Region {
    let d = k + l;
    let mut base = u_box(inst, k);
    base.factors.extend(std::iter::repeat_n(inst.ac(), l));
    let mut y = Region::from_box(base);
    for &j in js {
        y = y.union(&Region::from_box(corner(inst, j, d)));
    }
    for &i in is {
        y = y.subtract_box(&corner(inst, i, d));
    }
    Region::from_box(u_box(inst, d)).subtract(&y)
}

fn complement(inst: &ProductInstance, region: &Region) -> Region {
    Region::from_box(u_box(inst, region.dim())).subtract(region)
}

fn check_ab_input(c: &PartitionCertificate, budget: &Budget) -> Result<()> {
    if c.extra_labels().len() != c.palette.len()
        || c.palette
            .iter()
            .any(|p| !matches!(p.member, MemberRef::A | MemberRef::B))
    {
        return Err(Error::InvalidInput(
            "input tiles must be copies of A and B".into(),
        ));
    }
    if c.region.dim() != c.dim
        || c.region
            .boxes()
            .iter()
            .any(|b| !b.is_subset(&u_box(&c.instance, c.dim)))
    {
        return Err(Error::InvalidInput("input region must lie in U^k".into()));
    }
    let report = verify_certificate(c, budget)?;
    if !report.is_ok() {
        return Err(Error::InvalidInput(format!(
            "input certificate is invalid: {}",
            report.violations[0]
        )));
    }
    Ok(())
}

/// From a partition of `U^k ∖ X` into copies of `A` and `B`, a partition of
/// `U^{k+1} ∖ (X × Ac)`.
pub fn partition_blowup(c: &PartitionCertificate, budget: &Budget) -> Result<PartitionCertificate> {
    check_ab_input(c, budget)?;
    let inst = &c.instance;
    let x = complement(inst, &c.region);
    let region = complement(inst, &x.product_box(&Box::new(vec![inst.ac()])));
    check_cells(&region, budget)?;
    Ok(PartitionCertificate::assemble(
        inst,
        region,
        blowup_tiles(inst, &c.tiles),
        None,
    ))
}

/// A partition of `U^k ∖ C_{i,k}` into copies of `A` and `B`.
pub fn partition_onecorner(
    inst: &ProductInstance,
    k: usize,
    i: usize,
    budget: &Budget,
) -> Result<PartitionCertificate> {
    if k == 0 || i > k {
        return Err(Error::InvalidInput(format!(
            "need k ≥ 1 and 0 ≤ i ≤ k, got k = {k}, i = {i}"
        )));
    }
    let region = Region::from_box(u_box(inst, k)).subtract_box(&corner(inst, i, k));
    check_cells(&region, budget)?;
    let perm = (i == k && k >= 2).then(|| swap(k, 0, k - 1));
    Ok(PartitionCertificate::assemble(
        inst,
        region,
        onecorner_tiles(inst, k, i),
        perm,
    ))
}

/// From a partition of `U^k ∖ X` with `C_{i,k} ⊆ X`, a partition of
/// `U^{k+1} ∖ Y`, `Y = ((X × Ac) ∪ C_{k+1,k+1}) ∖ C_{i,k+1}`.
pub fn partition_modify(
    c: &PartitionCertificate,
    i: usize,
    budget: &Budget,
) -> Result<PartitionCertificate> {
    let inst = &c.instance;
    let k = c.dim;
    if i > k {
        return Err(Error::Precondition(format!(
            "corner index {i} exceeds k = {k}"
        )));
    }
    check_ab_input(c, budget)?;
    if c.region.meets_box(&corner(inst, i, k)) {
        return Err(Error::Precondition(format!(
            "C_({i},{k}) is not contained in X"
        )));
    }
    let x = complement(inst, &c.region);
    let y = x
        .product_box(&Box::new(vec![inst.ac()]))
        .union(&Region::from_box(corner(inst, k + 1, k + 1)))
        .subtract_box(&corner(inst, i, k + 1));
    let region = complement(inst, &y);
    check_cells(&region, budget)?;
    Ok(PartitionCertificate::assemble(
        inst,
        region,
        modify_tiles(inst, &c.tiles, i),
        None,
    ))
}

pub(crate) fn check_changes(
    k: usize,
    l: usize,
    is: &BTreeSet<usize>,
    js: &BTreeSet<usize>,
) -> Result<()> {
    if is.len() != js.len() {
        return Err(Error::InvalidInput(format!(
            "|I| = {} but |J| = {}",
            is.len(),
            js.len()
        )));
    }
    if is.iter().any(|&i| i > k) {
        return Err(Error::InvalidInput(format!("I must lie in 0..={k}")));
    }
    if js.iter().any(|&j| j <= k || j > k + l) {
        return Err(Error::InvalidInput(format!(
            "J must lie in {}..={}",
            k + 1,
            k + l
        )));
    }
    Ok(())
}

/// A partition of `U^{k+l} ∖ Y`, `Y = ((U^k × Ac^l) ∪ ⋃_{j∈J} C_{j,k+l}) ∖
/// ⋃_{i∈I} C_{i,k+l}`, into copies of `A` and `B`.
pub fn partition_multiplechanges(
    inst: &ProductInstance,
    k: usize,
    l: usize,
    is: &BTreeSet<usize>,
    js: &BTreeSet<usize>,
    budget: &Budget,
) -> Result<PartitionCertificate> {
    check_changes(k, l, is, js)?;
    let region = changes_region(inst, k, l, is, js);
    check_cells(&region, budget)?;
    Ok(PartitionCertificate::assemble(
        inst,
        region,
        changes_tiles(inst, k, l, is, js),
        None,
    ))
}
