use std::collections::BTreeSet;

use super::cert::PartitionCertificate;
use super::corner::{changes_tiles, check_cells, corner, u_box};
use super::instance::{members, MemberRef, ProductInstance};
use super::region::{Box, Region};
use super::tiles::Tiles;
use crate::budget::Budget;
use crate::error::{Error, Result};

fn s_box(inst: &ProductInstance) -> Box {
    Box::new(vec![inst.full()])
}

/// Tiles of `(S × U^t) ∖ (Q_0 ∪ ... ∪ Q_t)` with `Q_0 = S × C_{0,t}` and
/// `Q_i = P_i × C_{i,t}`.
pub(crate) fn fillin_tiles(inst: &ProductInstance, ps: &[usize]) -> Tiles {
    let t = ps.len();
    if t == 0 {
        return Tiles::new(1);
    }
    let pt = ps[t - 1];
    let pt_set = inst.family[pt].set;
    let mut out = fillin_tiles(inst, &ps[..t - 1]).times(inst.ac());

    // A-tiles on the last coordinate off P_t × C_{0,t-1}
    let slab = s_box(inst).product(&u_box(inst, t - 1));
    let hole = Box::new(vec![pt_set]).product(&corner(inst, 0, t - 1));
    for b in Region::from_box(slab).subtract_box(&hole).boxes() {
        let mut b = b.clone();
        b.factors.push(inst.a);
        out.fill_box(MemberRef::A, t, &b);
    }

    // P_t-tiles on the first coordinate over C_{0,t-1} × (A ∩ B)
    let mut b = hole;
    b.factors.push(inst.a & inst.b);
    out.fill_box(MemberRef::F(pt as u32), 0, &b);
    out
}

pub(crate) fn fillin_region(inst: &ProductInstance, ps: &[usize]) -> Region {
    let t = ps.len();
    let mut r = Region::from_box(s_box(inst).product(&u_box(inst, t)));
    r = r.subtract_box(&s_box(inst).product(&corner(inst, 0, t)));
    for (i, &p) in ps.iter().enumerate() {
        r = r.subtract_box(&Box::new(vec![inst.family[p].set]).product(&corner(inst, i + 1, t)));
    }
    r
}

fn check_members(inst: &ProductInstance, ps: &[usize]) -> Result<()> {
    match ps.iter().find(|&&p| p >= inst.family.len()) {
        Some(p) => Err(Error::Reference(format!(
            "member #{p} is not in the family"
        ))),
        None => Ok(()),
    }
}

/// A partition of `(S × U^t) ∖ (Q_0 ∪ ... ∪ Q_t)` into copies of the listed
/// family members and of `A`.
pub fn partition_fillin(
    inst: &ProductInstance,
    ps: &[usize],
    budget: &Budget,
) -> Result<PartitionCertificate> {
    check_members(inst, ps)?;
    let region = fillin_region(inst, ps);
    check_cells(&region, budget)?;
    Ok(PartitionCertificate::assemble(
        inst,
        region,
        fillin_tiles(inst, ps),
        None,
    ))
}

/// Smallest `l ≥ k + (k-1)m/r`.
pub fn manychoices_dimension(k: usize, m: usize, r: u32) -> usize {
    k + (k.saturating_sub(1) * m).div_ceil(r as usize)
}

/// Tiles of `S × (U^l ∖ ⋃_{j∈J} C_{j,l})` and the coordinate permutation
/// from the layout with `J = {l-t+1, ..., l}`.
fn manychoices_tiles(
    inst: &ProductInstance,
    k_bound: usize,
    r: u32,
    plist: &[usize],
    js: &BTreeSet<usize>,
) -> (Tiles, Vec<usize>) {
    let l = manychoices_dimension(k_bound, plist.len(), r);
    let t = js.len();
    let a = (t - 1) / r as usize;
    let list: Vec<usize> = (0..a).flat_map(|_| plist.iter().copied()).collect();
    let am = list.len();

    let mut out = fillin_tiles(inst, &list).times_box(&Box::new(vec![inst.ac(); l - am]));
    let canonical_j: BTreeSet<usize> = (l - t + 1..=l).collect();
    for z in members(inst.full()) {
        // P_0 = S contains every z
        let mut is: BTreeSet<usize> = BTreeSet::from([0]);
        is.extend((1..=am).filter(|&i| inst.family[list[i - 1]].set >> z & 1 == 1));
        out.append(changes_tiles(inst, am, l - am, &is, &canonical_j).insert_coord(0, z));
    }

    // canonical J and its complement go to J and its complement, in order
    let mut sigma = vec![0; l + 1];
    let targets_j = js.iter();
    let targets_rest = (1..=l).filter(|c| !js.contains(c));
    for (c, &dest) in (l - t + 1..=l).zip(targets_j) {
        sigma[c] = dest;
    }
    for (c, dest) in (1..=l - t).zip(targets_rest) {
        sigma[c] = dest;
    }
    (out.permute(&sigma), sigma)
}

fn manychoices_region(inst: &ProductInstance, l: usize, js: &BTreeSet<usize>) -> Region {
    let mut r = Region::from_box(u_box(inst, l));
    for &j in js {
        r = r.subtract_box(&corner(inst, j, l));
    }
    Region::from_box(s_box(inst)).product_region(&r)
}

/// A partition of `S × (U^l ∖ ⋃_{j∈J} C_{j,l})` into copies of members of
/// `F ∪ {A, B}`, where `l = k + ⌈(k-1)m/r⌉` and `|J| ≤ k`, `|J| ≡ 1 (mod r)`.
pub fn partition_manychoices(
    inst: &ProductInstance,
    k_bound: usize,
    js: &BTreeSet<usize>,
    budget: &Budget,
) -> Result<PartitionCertificate> {
    let (r, plist) = inst.checked_r_witness()?;
    let l = manychoices_dimension(k_bound, plist.len(), r);
    let t = js.len();
    if t == 0 || !(t - 1).is_multiple_of(r as usize) {
        return Err(Error::Precondition(format!("|J| = {t} is not 1 mod {r}")));
    }
    if t > k_bound {
        return Err(Error::Precondition(format!(
            "|J| = {t} exceeds k = {k_bound}"
        )));
    }
    if js.iter().any(|&j| j == 0 || j > l) {
        return Err(Error::Precondition(format!("J must lie in 1..={l}")));
    }
    let region = manychoices_region(inst, l, js);
    check_cells(&region, budget)?;
    let (tiles, sigma) = manychoices_tiles(inst, k_bound, r, &plist, js);
    let identity = sigma.iter().enumerate().all(|(i, &s)| i == s);
    Ok(PartitionCertificate::assemble(
        inst,
        region,
        tiles,
        (!identity).then_some(sigma),
    ))
}

/// A partition of `S^2 × U^n` into copies of members of `F ∪ {A, B}`.
/// Returns `n` with the certificate.
pub fn partition_main(
    inst: &ProductInstance,
    budget: &Budget,
) -> Result<(usize, PartitionCertificate)> {
    let (r, plist) = inst.checked_r_witness()?;
    let rs = inst.checked_mod_witness()?;
    let k = rs.len();
    let n = main_dimension(inst)?;
    let mut full = s_box(inst).product(&s_box(inst));
    full = full.product(&u_box(inst, n));
    let region = Region::from_box(full);
    check_cells(&region, budget)?;

    let mut tiles = Tiles::new(n + 2);
    for (i, &ri) in rs.iter().enumerate() {
        let mut b = Box::new(vec![inst.full(), inst.family[ri].set]);
        b.factors.extend(corner(inst, i + 1, n).factors);
        tiles.fill_box(MemberRef::F(ri as u32), 1, &b);
    }
    for y in members(inst.full()) {
        let jy: BTreeSet<usize> = (1..=k)
            .filter(|&j| inst.family[rs[j - 1]].set >> y & 1 == 1)
            .collect();
        let (slice, _) = manychoices_tiles(inst, k, r, &plist, &jy);
        tiles.append(slice.insert_coord(1, y));
    }
    Ok((n, PartitionCertificate::assemble(inst, region, tiles, None)))
}

/// The `n` used by [`partition_main`]; it depends only on the witnesses.
pub fn main_dimension(inst: &ProductInstance) -> Result<usize> {
    let (r, plist) = inst.checked_r_witness()?;
    let rs = inst.checked_mod_witness()?;
    Ok(manychoices_dimension(rs.len(), plist.len(), r))
}
