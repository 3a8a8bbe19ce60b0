use num_bigint::BigUint;

use super::cert::{verify_certificate, PartitionCertificate};
use super::fill::{main_dimension, partition_main};
use super::instance::{MemberRef, ProductInstance, Set};
use super::region::{Box, Region};
use super::tiles::{TileRef, Tiles};
use crate::budget::Budget;
use crate::error::{Error, Result};

fn require_valid(c: &PartitionCertificate, what: &str, budget: &Budget) -> Result<()> {
    let report = verify_certificate(c, budget)?;
    if !report.is_ok() {
        return Err(Error::InvalidInput(format!(
            "{what} is invalid: {}",
            report.violations[0]
        )));
    }
    Ok(())
}

fn is_box(region: &Region, b: &Box) -> bool {
    region.dim() == b.dim()
        && region.boxes().iter().all(|x| x.is_subset(b))
        && region.cells() == b.cells()
}

/// Block of the tile `t` inside a product: its member's set on the host
/// coordinate, its fixed values elsewhere.
fn tile_factors(t: &TileRef<'_>, set: Set, out: &mut Vec<Set>) {
    for (j, &v) in t.coords.iter().enumerate() {
        out.push(if j == t.host { set } else { 1 << v });
    }
}

/// From a partition of `S^p` into copies of members of `F ∪ {X}` and a
/// partition of `S^2 × X^q` (with `X` the first certificate's `A`), a
/// partition of `S^{pq+2}` using the second certificate's labels and the
/// family members of the first.
pub fn partition_buildbigger(
    cp: &PartitionCertificate,
    cq: &PartitionCertificate,
    budget: &Budget,
) -> Result<PartitionCertificate> {
    let (pi, qi) = (&cp.instance, &cq.instance);
    if pi.ground != qi.ground || pi.family != qi.family {
        return Err(Error::InvalidInput(
            "certificates are over different instances".into(),
        ));
    }
    let full = pi.full();
    let p = cp.dim;
    if p == 0 || !is_box(&cp.region, &Box::new(vec![full; p])) {
        return Err(Error::InvalidInput(
            "first certificate must cover S^p".into(),
        ));
    }
    if let Some(m) = cp.extra_labels().into_iter().find(|&m| m != MemberRef::A) {
        return Err(Error::InvalidInput(format!(
            "first certificate uses {}, which is neither A nor a family member",
            pi.label(m)
        )));
    }
    let x = pi.a;
    if cq.dim < 2 {
        return Err(Error::InvalidInput(
            "second certificate must cover S^2 × A^q".into(),
        ));
    }
    let q = cq.dim - 2;
    let mut want = vec![full, full];
    want.extend(std::iter::repeat_n(x, q));
    if !is_box(&cq.region, &Box::new(want)) {
        return Err(Error::InvalidInput(
            "second certificate must cover S^2 × A^q for the first certificate's A".into(),
        ));
    }
    let dim = p * q + 2;
    let cells = BigUint::from(pi.size()).pow(dim as u32);
    if cells > BigUint::from(budget.cells) {
        return Err(Error::budget(
            format!("S^{dim} with {cells} cells"),
            budget.cells,
        ));
    }
    require_valid(cp, "first certificate", budget)?;
    require_valid(cq, "second certificate", budget)?;

    let set_of = |c: &PartitionCertificate, m: MemberRef| c.declared(m).unwrap_or(0);
    let mut out = Tiles::new(dim);
    let n_tiles = cp.tiles.len();
    let mut pick = vec![0usize; q];
    let mut factors: Vec<Set> = Vec::with_capacity(dim);
    let mut coords = vec![0u8; dim];
    loop {
        let zs: Vec<TileRef<'_>> = pick.iter().map(|&i| cp.tiles.get(i)).collect();
        match zs.iter().position(|z| z.member != MemberRef::A) {
            None => {
                // a clone of S^2 × X^q: map each tile of the second certificate
                for t in cq.tiles.iter() {
                    coords[0] = t.coords[0];
                    coords[1] = t.coords[1];
                    let mut host = t.host;
                    for (j, z) in zs.iter().enumerate() {
                        let at = 2 + j * p;
                        coords[at..at + p].copy_from_slice(z.coords);
                        coords[at + z.host] = t.coords[2 + j];
                        if t.host == 2 + j {
                            host = at + z.host;
                        }
                    }
                    out.push(t.member, host, &coords);
                }
            }
            Some(j) => {
                // split along the first family tile
                factors.clear();
                factors.extend([full, full]);
                for z in &zs {
                    tile_factors(z, set_of(cp, z.member), &mut factors);
                }
                let host = 2 + j * p + zs[j].host;
                out.fill_box(zs[j].member, host, &Box::new(factors.clone()));
            }
        }
        // odometer
        let mut i = q;
        loop {
            if i == 0 {
                let region = Region::from_box(Box::new(vec![full; dim]));
                return Ok(PartitionCertificate::assemble(qi, region, out, None));
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < n_tiles {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// `B_1, ..., B_k` covering `S`, as family positions: `S` itself when it is
/// a member, otherwise greedily from the support of the `r`-partition
/// witness (most new elements first, earliest on ties).
pub fn extract_cover(inst: &ProductInstance) -> Result<Vec<usize>> {
    let full = inst.full();
    if let Some(i) = inst.family.iter().position(|m| m.set == full) {
        return Ok(vec![i]);
    }
    let (_, list) = inst.checked_r_witness()?;
    let mut support: Vec<usize> = Vec::new();
    for i in list {
        if !support.contains(&i) {
            support.push(i);
        }
    }
    let mut covered: Set = 0;
    let mut out = Vec::new();
    while covered != full {
        let best = support
            .iter()
            .copied()
            .max_by_key(|&i| {
                (
                    (inst.family[i].set & !covered).count_ones(),
                    std::cmp::Reverse(i),
                )
            })
            .filter(|&i| inst.family[i].set & !covered != 0)
            .ok_or_else(|| Error::Precondition("witness does not cover S".into()))?;
        covered |= inst.family[best].set;
        out.push(best);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneralMode {
    /// Expand fully; exceeding the cell budget is an error.
    Full,
    /// Expand when the projected size fits the budget, otherwise plan only.
    Auto,
    /// Plan and per-stage certificates only.
    Plan,
}

/// One step of the reverse induction: a partition of `S^2 × A_{i+1}^q`
/// into copies of members of `F ∪ {A_i, B_{i+1}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    /// 1-based stage index `i`.
    pub index: usize,
    pub a: Set,
    pub b_member: usize,
    pub cert: PartitionCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralPlan {
    pub cover: Vec<usize>,
    pub q: usize,
    /// `p_1, ..., p_k`.
    pub dims: Vec<usize>,
    /// `|S|^{p_1}`.
    pub projected_cells: BigUint,
    pub stages: Vec<Stage>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneralOutcome {
    Full {
        n: usize,
        cert: PartitionCertificate,
        plan: GeneralPlan,
    },
    PlanOnly {
        plan: GeneralPlan,
        reason: String,
    },
}

pub fn plan_general(inst: &ProductInstance, budget: &Budget) -> Result<GeneralPlan> {
    inst.checked_mod_witness()?;
    let cover = extract_cover(inst)?;
    let k = cover.len();
    let q = main_dimension(inst)?;
    let mut dims = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        dims[i] = dims[i + 1]
            .checked_mul(q)
            .and_then(|v| v.checked_add(2))
            .ok_or_else(|| Error::budget("dimension plan overflow", u64::MAX))?;
    }
    let projected_cells = BigUint::from(inst.size()).pow(dims[0] as u32);
    let mut stages = Vec::new();
    let mut a: Set = 0;
    for i in 0..k.saturating_sub(1) {
        a |= inst.family[cover[i]].set;
        let b_member = cover[i + 1];
        let stage_inst = inst.with_ab(a, inst.family[b_member].set);
        let (_, cert) = partition_main(&stage_inst, budget)?;
        stages.push(Stage {
            index: i + 1,
            a,
            b_member,
            cert,
        });
    }
    Ok(GeneralPlan {
        cover,
        q,
        dims,
        projected_cells,
        stages,
    })
}

/// A partition of `S^n` into copies of family members.
pub fn partition_general(
    inst: &ProductInstance,
    mode: GeneralMode,
    budget: &Budget,
) -> Result<GeneralOutcome> {
    let plan = plan_general(inst, budget)?;
    let fits = plan.projected_cells <= BigUint::from(budget.cells);
    match (mode, fits) {
        (GeneralMode::Plan, _) => {
            return Ok(GeneralOutcome::PlanOnly {
                plan,
                reason: "plan requested".into(),
            })
        }
        (GeneralMode::Auto, false) => {
            let reason = format!(
                "projected {} cells exceed the budget of {}",
                plan.projected_cells, budget.cells
            );
            return Ok(GeneralOutcome::PlanOnly { plan, reason });
        }
        (GeneralMode::Full, false) => {
            return Err(Error::budget(
                format!("full expansion of {} cells", plan.projected_cells),
                budget.cells,
            ))
        }
        _ => {}
    }

    let full = inst.full();
    let mut tiles = Tiles::new(1);
    tiles.push(MemberRef::A, 0, &[0]);
    let mut cur = PartitionCertificate::assemble(
        &inst.with_ab(full, 0),
        Region::from_box(Box::new(vec![full])),
        tiles,
        None,
    );
    for stage in plan.stages.iter().rev() {
        let mut cq = stage.cert.clone();
        cq.relabel(MemberRef::B, MemberRef::F(stage.b_member as u32));
        cur = partition_buildbigger(&cur, &cq, budget)?;
    }
    cur.relabel(MemberRef::A, MemberRef::F(plan.cover[0] as u32));
    debug_assert_eq!(cur.dim, plan.dims[0]);
    Ok(GeneralOutcome::Full {
        n: cur.dim,
        cert: cur,
        plan,
    })
}
