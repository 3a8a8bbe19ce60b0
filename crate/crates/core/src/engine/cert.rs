use std::collections::BTreeMap;
use std::fmt;

use super::instance::{members, MemberRef, ProductInstance, Set};
use super::region::Region;
use super::tiles::Tiles;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// The set a certificate declares for one of its member labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaletteEntry {
    pub member: MemberRef,
    pub set: Set,
}

/// A claimed exact cover of `region ⊆ S^dim` by clones of members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub instance: ProductInstance,
    pub dim: usize,
    pub region: Region,
    pub palette: Vec<PaletteEntry>,
    pub tiles: Tiles,
    /// Where each coordinate of the construction's canonical layout was
    /// moved to, when the construction permuted coordinates.
    pub permutation: Option<Vec<usize>>,
}

impl PartitionCertificate {
    /// Canonical certificate: tiles and region sorted, palette listing the
    /// instance's set for every label in use.
    pub fn assemble(
        instance: &ProductInstance,
        region: Region,
        tiles: Tiles,
        permutation: Option<Vec<usize>>,
    ) -> Self {
        let mut used: Vec<MemberRef> = tiles.member_refs().collect();
        used.sort_unstable();
        used.dedup();
        let palette = used
            .into_iter()
            .map(|m| PaletteEntry {
                member: m,
                set: instance.resolve(m).unwrap_or(0),
            })
            .collect();
        PartitionCertificate {
            instance: instance.clone(),
            dim: region.dim(),
            region: region.sorted(),
            palette,
            tiles: tiles.sorted(),
            permutation,
        }
    }

    pub fn declared(&self, m: MemberRef) -> Option<Set> {
        self.palette.iter().find(|p| p.member == m).map(|p| p.set)
    }

    /// Labels other than family members that appear in the palette.
    pub fn extra_labels(&self) -> Vec<MemberRef> {
        self.palette
            .iter()
            .map(|p| p.member)
            .filter(|m| !matches!(m, MemberRef::F(_)))
            .collect()
    }

    /// Replaces one label by another in tiles and palette.
    pub fn relabel(&mut self, from: MemberRef, to: MemberRef) {
        let mut tiles = std::mem::replace(&mut self.tiles, Tiles::new(0));
        tiles.relabel(from, to);
        *self = PartitionCertificate::assemble(
            &self.instance,
            self.region.clone(),
            tiles,
            self.permutation.take(),
        );
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    Shape,
    InvalidClone,
    RegionOverlap,
    OutsideRegion,
    Overlap,
    Uncovered,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub tile: Option<usize>,
    pub cell: Option<Vec<String>>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::Shape => "malformed",
            ViolationKind::InvalidClone => "invalid clone",
            ViolationKind::RegionOverlap => "region boxes overlap",
            ViolationKind::OutsideRegion => "tile leaves the region",
            ViolationKind::Overlap => "overlap",
            ViolationKind::Uncovered => "uncovered",
        };
        write!(f, "{what}")?;
        if let Some(cell) = &self.cell {
            write!(f, " at cell ({})", cell.join(", "))?;
        }
        if let Some(t) = self.tile {
            write!(f, " (tile {t})")?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CertReport {
    /// The first violations found, at most [`CertReport::LIMIT`].
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub by_kind: BTreeMap<String, u64>,
    pub region_cells: u64,
    pub tiles: u64,
}

impl CertReport {
    pub const LIMIT: usize = 20;

    pub fn is_ok(&self) -> bool {
        self.violation_count == 0
    }

    fn push(&mut self, v: Violation) {
        self.violation_count += 1;
        *self.by_kind.entry(format!("{:?}", v.kind)).or_default() += 1;
        if self.violations.len() < Self::LIMIT {
            self.violations.push(v);
        }
    }
}

struct Grid {
    local: Vec<[u32; 64]>,
    strides: Vec<u64>,
    total: u64,
}

impl Grid {
    fn new(bounds: &[Set]) -> Option<Grid> {
        let mut local = Vec::with_capacity(bounds.len());
        let mut strides = vec![0u64; bounds.len()];
        let mut total: u64 = 1;
        for (j, &b) in bounds.iter().enumerate().rev() {
            let mut map = [u32::MAX; 64];
            for (k, v) in members(b).enumerate() {
                map[v as usize] = k as u32;
            }
            local.push(map);
            strides[j] = total;
            total = total.checked_mul(u64::from(b.count_ones()))?;
        }
        local.reverse();
        Some(Grid {
            local,
            strides,
            total,
        })
    }

    fn index(&self, cell: &[u8]) -> Option<u64> {
        let mut idx = 0;
        for (j, &v) in cell.iter().enumerate() {
            let k = *self.local[j].get(v as usize)?;
            if k == u32::MAX {
                return None;
            }
            idx += u64::from(k) * self.strides[j];
        }
        Some(idx)
    }
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(n: u64) -> Self {
        Bits(vec![0; n.div_ceil(64) as usize])
    }

    /// Sets the bit and returns its previous value.
    fn set(&mut self, i: u64) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        let old = self.0[w] >> b & 1 == 1;
        self.0[w] |= 1 << b;
        old
    }

    fn get(&self, i: u64) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }
}

/// Checks, cell by cell, that the tiles are clones of their declared
/// members, lie in the region, are pairwise disjoint, and cover it.
pub fn verify_certificate(c: &PartitionCertificate, budget: &Budget) -> Result<CertReport> {
    let inst = &c.instance;
    let mut report = CertReport {
        tiles: c.tiles.len() as u64,
        ..Default::default()
    };
    let labels = |cell: &[u8]| -> Vec<String> {
        cell.iter()
            .map(|&v| {
                inst.ground
                    .get(v as usize)
                    .cloned()
                    .unwrap_or_else(|| format!("#{v}"))
            })
            .collect()
    };
    let shape = |detail: String| Violation {
        kind: ViolationKind::Shape,
        tile: None,
        cell: None,
        detail,
    };

    if c.region.dim() != c.dim || c.tiles.dim() != c.dim {
        report.push(shape(format!(
            "dimension {} but region has {} and tiles have {}",
            c.dim,
            c.region.dim(),
            c.tiles.dim()
        )));
        return Ok(report);
    }
    if let Some(p) = &c.permutation {
        let mut seen = p.clone();
        seen.sort_unstable();
        if seen != (0..c.dim).collect::<Vec<_>>() {
            report.push(shape(format!(
                "{p:?} is not a permutation of the coordinates"
            )));
        }
    }
    let full = inst.full();
    for b in c.region.boxes() {
        if b.factors.iter().any(|f| f & !full != 0) {
            report.push(shape("region box outside the ground set".into()));
            return Ok(report);
        }
    }
    let mut declared: BTreeMap<MemberRef, Set> = BTreeMap::new();
    for p in &c.palette {
        match inst.resolve(p.member) {
            Some(set) if set == p.set => {}
            Some(set) => report.push(Violation {
                kind: ViolationKind::InvalidClone,
                tile: None,
                cell: None,
                detail: format!(
                    "{} is declared as {{{}}} but is {{{}}}",
                    inst.label(p.member),
                    inst.labels_of(p.set).join(","),
                    inst.labels_of(set).join(",")
                ),
            }),
            None => report.push(Violation {
                kind: ViolationKind::InvalidClone,
                tile: None,
                cell: None,
                detail: format!("{} is not a member", inst.label(p.member)),
            }),
        }
        declared.insert(p.member, p.set);
    }

    let cells = c.region.cells();
    report.region_cells = u64::try_from(cells).unwrap_or(u64::MAX);
    let bounds = c.region.bounding();
    let grid = match Grid::new(&bounds) {
        Some(g) if g.total <= budget.cells => g,
        _ => {
            return Err(Error::budget(
                format!("verification grid for {cells} region cells"),
                budget.cells,
            ))
        }
    };
    let mut in_region = Bits::new(grid.total);
    let mut region_error = false;
    c.region.for_each_cell(|cell| {
        let i = grid.index(cell).unwrap_or(0);
        if in_region.set(i) && !region_error {
            region_error = true;
            report.push(Violation {
                kind: ViolationKind::RegionOverlap,
                tile: None,
                cell: Some(labels(cell)),
                detail: String::new(),
            });
        }
    });

    let mut covered = Bits::new(grid.total);
    let mut cell = vec![0u8; c.dim];
    for (ti, t) in c.tiles.iter().enumerate() {
        let Some(&set) = declared.get(&t.member) else {
            report.push(Violation {
                kind: ViolationKind::InvalidClone,
                tile: Some(ti),
                cell: None,
                detail: format!("member {} is not declared", inst.label(t.member)),
            });
            continue;
        };
        if set == 0 || set & !full != 0 {
            report.push(Violation {
                kind: ViolationKind::InvalidClone,
                tile: Some(ti),
                cell: None,
                detail: format!(
                    "member {} is empty or outside the ground set",
                    inst.label(t.member)
                ),
            });
            continue;
        }
        if t.coords.iter().any(|&v| u64::from(v) >= inst.size() as u64) {
            report.push(Violation {
                kind: ViolationKind::Shape,
                tile: Some(ti),
                cell: None,
                detail: "coordinate outside the ground set".into(),
            });
            continue;
        }
        cell.copy_from_slice(t.coords);
        for v in members(set) {
            cell[t.host] = v;
            match grid.index(&cell) {
                Some(i) if in_region.get(i) => {
                    if covered.set(i) {
                        report.push(Violation {
                            kind: ViolationKind::Overlap,
                            tile: Some(ti),
                            cell: Some(labels(&cell)),
                            detail: String::new(),
                        });
                    }
                }
                _ => report.push(Violation {
                    kind: ViolationKind::OutsideRegion,
                    tile: Some(ti),
                    cell: Some(labels(&cell)),
                    detail: String::new(),
                }),
            }
        }
    }

    c.region.for_each_cell(|cell| {
        if let Some(i) = grid.index(cell) {
            if !covered.get(i) {
                // mark so that overlapping region boxes report once
                covered.set(i);
                report.push(Violation {
                    kind: ViolationKind::Uncovered,
                    tile: None,
                    cell: Some(labels(cell)),
                    detail: String::new(),
                });
            }
        }
    });
    Ok(report)
}
