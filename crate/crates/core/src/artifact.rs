//! Files read and written by the tools: one JSON document per file,
//!
//! ```text
//! { "format_version": 1, "kind": "...", "inputs": [...], "body": {...} }
//! ```
//!
//! Bodies are written in a canonical order, so equal artifacts serialize to
//! identical bytes. Lattice elements are written as `{1,3}`, product boxes
//! as `{a,b} x {c}`, and tiles as `member: c1 * c3` with `*` on the host
//! coordinate.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::engine::{
    Box, GeneralPlan, LatticePartition, PaletteEntry, PartitionCertificate, ProductInstance,
    Region, Set, Stage, Tiles,
};
use crate::error::{Error, Result};
use crate::oracle::{Finding, WeakFindings};
use crate::poset::{Embedding, LatticeCopy, LatticeElement, Poset, PosetSpec};
use crate::weak::{ValueDomain, WeakCertificate, WeakKind, WeightFunction};

pub const FORMAT_VERSION: u32 = 1;

/// Path and SHA-256 of a file an artifact was derived from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub tool_version: String,
    pub budget: Budget,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<InputDigest>,
    pub outcome: String,
    pub exit_code: i32,
}

/// Result of an exhaustive weight search over a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FindingsReport {
    pub instance: ProductInstance,
    pub r_max: u32,
    pub weight_bound: u32,
    pub findings: WeakFindings,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Artifact {
    Poset(Poset),
    Instance(ProductInstance),
    WeakCertificate(WeakCertificate),
    PartitionCertificate(PartitionCertificate),
    LatticePartition(LatticePartition),
    /// Dimension plan with per-stage certificates, written instead of a full
    /// certificate.
    GeneralPlan {
        instance: ProductInstance,
        plan: GeneralPlan,
        reason: String,
    },
    WeakFindings(FindingsReport),
    Manifest(RunManifest),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Poset(_) => "poset",
            Artifact::Instance(_) => "instance",
            Artifact::WeakCertificate(_) => "weak-certificate",
            Artifact::PartitionCertificate(_) => "partition-certificate",
            Artifact::LatticePartition(_) => "lattice-partition",
            Artifact::GeneralPlan { .. } => "general-plan",
            Artifact::WeakFindings(_) => "weak-findings",
            Artifact::Manifest(_) => "run-manifest",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub artifact: Artifact,
    pub inputs: Vec<InputDigest>,
}

impl Document {
    pub fn new(artifact: Artifact) -> Self {
        Document {
            artifact,
            inputs: Vec::new(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    format_version: u32,
    kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    inputs: Vec<InputDigest>,
    body: T,
}

#[derive(Deserialize)]
struct Header {
    format_version: u32,
    kind: String,
}

#[derive(Serialize, Deserialize)]
struct MemberDto {
    id: String,
    elements: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDto {
    ground: Vec<String>,
    family: Vec<MemberDto>,
    #[serde(default)]
    a: Vec<String>,
    #[serde(default)]
    b: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r_witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mod_witness: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct PaletteDto {
    member: String,
    elements: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CertDto {
    dim: usize,
    region: Vec<String>,
    palette: Vec<PaletteDto>,
    tiles: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    permutation: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PartitionCertDto {
    instance: InstanceDto,
    certificate: CertDto,
}

#[derive(Serialize, Deserialize)]
struct EmbeddingDto {
    dim: u32,
    images: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct WeightDto {
    copy: Vec<String>,
    weight: String,
}

#[derive(Serialize, Deserialize)]
struct WeakCertDto {
    partition: String,
    poset: PosetSpec,
    n: u32,
    r: String,
    base_embedding: EmbeddingDto,
    weights: Vec<WeightDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    integer_stage: Option<Vec<WeightDto>>,
}

#[derive(Serialize, Deserialize)]
struct LatticeDto {
    poset: PosetSpec,
    n: u32,
    tiles: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct StageDto {
    index: usize,
    a: Vec<String>,
    b: String,
    certificate: CertDto,
}

#[derive(Serialize, Deserialize)]
struct PlanDto {
    instance: InstanceDto,
    plan_only: bool,
    reason: String,
    cover: Vec<String>,
    q: usize,
    dims: Vec<usize>,
    projected_cells: String,
    stages: Vec<StageDto>,
}

#[derive(Serialize, Deserialize)]
struct FindingDto {
    r: u32,
    weights: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct FindingsDto {
    instance: InstanceDto,
    r_max: u32,
    weight_bound: u32,
    vectors: u64,
    r_partitions: Vec<FindingDto>,
    mod_partitions: Vec<FindingDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exact: Option<Vec<u32>>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

// ---- lattice elements

fn element_str(x: &LatticeElement) -> String {
    x.to_string()
}

fn parse_element(s: &str, n: u32) -> Result<LatticeElement> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("lattice element {s:?} is not of the form {{1,3}}")))?;
    let mut idx = Vec::new();
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        idx.push(
            u32::from_str(part)
                .map_err(|_| Error::Parse(format!("bad index {part:?} in {s:?}")))?,
        );
    }
    LatticeElement::from_indices(n, idx).map_err(|e| Error::Parse(format!("{s}: {e}")))
}

fn copy_strs(c: &LatticeCopy) -> Vec<String> {
    c.elements().iter().map(element_str).collect()
}

fn parse_copy(v: &[String], n: u32) -> Result<LatticeCopy> {
    Ok(LatticeCopy::new(
        v.iter()
            .map(|s| parse_element(s, n))
            .collect::<Result<_>>()?,
    ))
}

fn weights_dto(w: &WeightFunction<LatticeCopy>) -> Vec<WeightDto> {
    w.iter()
        .map(|(c, v)| WeightDto {
            copy: copy_strs(c),
            weight: v.to_string(),
        })
        .collect()
}

fn parse_weights(
    v: &[WeightDto],
    n: u32,
    domain: ValueDomain,
) -> Result<WeightFunction<LatticeCopy>> {
    let mut w = WeightFunction::new(domain);
    for e in v {
        let value = BigRational::from_str(&e.weight)
            .map_err(|_| Error::Parse(format!("weight {:?} is not a rational", e.weight)))?;
        w.add(parse_copy(&e.copy, n)?, value)?;
    }
    Ok(w)
}

// ---- instances

fn instance_dto(inst: &ProductInstance) -> InstanceDto {
    let ids = |list: &Option<Vec<usize>>| {
        list.as_ref()
            .map(|l| l.iter().map(|&i| inst.family[i].id.clone()).collect())
    };
    InstanceDto {
        ground: inst.ground.clone(),
        family: inst
            .family
            .iter()
            .map(|m| MemberDto {
                id: m.id.clone(),
                elements: inst.labels_of(m.set),
            })
            .collect(),
        a: inst.labels_of(inst.a),
        b: inst.labels_of(inst.b),
        r: inst.r,
        r_witness: ids(&inst.r_witness),
        mod_witness: ids(&inst.mod_witness),
    }
}

fn parse_instance(d: InstanceDto) -> Result<ProductInstance> {
    let family = d.family.into_iter().map(|m| (m.id, m.elements)).collect();
    let mut inst = ProductInstance::new(d.ground, family, &d.a, &d.b)?;
    let positions =
        |inst: &ProductInstance, list: Option<Vec<String>>| -> Result<Option<Vec<usize>>> {
            list.map(|l| {
                l.iter()
                    .map(|id| {
                        inst.member_index(id).ok_or_else(|| {
                            Error::Reference(format!("witness names undefined member {id}"))
                        })
                    })
                    .collect()
            })
            .transpose()
        };
    inst.r = d.r;
    inst.r_witness = positions(&inst, d.r_witness)?;
    inst.mod_witness = positions(&inst, d.mod_witness)?;
    Ok(inst)
}

// ---- product certificates

fn set_str(inst: &ProductInstance, set: Set) -> String {
    format!("{{{}}}", inst.labels_of(set).join(","))
}

fn parse_set(inst: &ProductInstance, s: &str) -> Result<Set> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("factor {s:?} is not of the form {{a,b}}")))?;
    let labels: Vec<String> = inner
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(String::from)
        .collect();
    inst.set_of(&labels)
}

fn box_str(inst: &ProductInstance, b: &Box) -> String {
    b.factors
        .iter()
        .map(|&f| set_str(inst, f))
        .collect::<Vec<_>>()
        .join(" x ")
}

fn parse_box(inst: &ProductInstance, s: &str, dim: usize) -> Result<Box> {
    let factors: Vec<Set> = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(" x ")
            .map(|f| parse_set(inst, f))
            .collect::<Result<_>>()?
    };
    if factors.len() != dim {
        return Err(Error::Parse(format!(
            "box {s:?} has {} factors, expected {dim}",
            factors.len()
        )));
    }
    Ok(Box::new(factors))
}

fn cert_dto(c: &PartitionCertificate) -> CertDto {
    let inst = &c.instance;
    let tiles = c
        .tiles
        .iter()
        .map(|t| {
            let cells: Vec<&str> = t
                .coords
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    if j == t.host {
                        "*"
                    } else {
                        inst.ground[v as usize].as_str()
                    }
                })
                .collect();
            format!("{}: {}", inst.label(t.member), cells.join(" "))
        })
        .collect();
    CertDto {
        dim: c.dim,
        region: c.region.boxes().iter().map(|b| box_str(inst, b)).collect(),
        palette: c
            .palette
            .iter()
            .map(|p| PaletteDto {
                member: inst.label(p.member),
                elements: inst.labels_of(p.set),
            })
            .collect(),
        tiles,
        permutation: c.permutation.clone(),
    }
}

fn parse_tile(inst: &ProductInstance, s: &str, dim: usize, out: &mut Tiles) -> Result<()> {
    let (member, cells) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("tile {s:?} is not of the form `member: c1 * c3`")))?;
    let member = inst.parse_label(member.trim())?;
    let cells: Vec<&str> = cells.split_whitespace().collect();
    if cells.len() != dim {
        return Err(Error::Parse(format!(
            "tile {s:?} has {} coordinates, expected {dim}",
            cells.len()
        )));
    }
    let mut host = None;
    let mut coords = vec![0u8; dim];
    for (j, c) in cells.iter().enumerate() {
        if *c == "*" {
            if host.replace(j).is_some() {
                return Err(Error::Parse(format!("tile {s:?} has two free coordinates")));
            }
        } else {
            coords[j] = inst.ground_index(c).ok_or_else(|| {
                Error::Reference(format!("tile {s:?} uses undefined ground element {c}"))
            })?;
        }
    }
    let host =
        host.ok_or_else(|| Error::Parse(format!("tile {s:?} has no free coordinate `*`")))?;
    out.push(member, host, &coords);
    Ok(())
}

fn parse_cert(instance: ProductInstance, d: CertDto) -> Result<PartitionCertificate> {
    let boxes = d
        .region
        .iter()
        .map(|s| parse_box(&instance, s, d.dim))
        .collect::<Result<Vec<_>>>()?;
    let mut palette = Vec::with_capacity(d.palette.len());
    for p in &d.palette {
        let member = instance.parse_label(&p.member)?;
        palette.push(PaletteEntry {
            member,
            set: instance.set_of(&p.elements)?,
        });
    }
    let mut tiles = Tiles::new(d.dim);
    for s in &d.tiles {
        parse_tile(&instance, s, d.dim, &mut tiles)?;
    }
    Ok(PartitionCertificate {
        instance,
        dim: d.dim,
        region: Region::from_disjoint(d.dim, boxes),
        palette,
        tiles,
        permutation: d.permutation,
    })
}

// ---- documents

fn envelope<T: Serialize>(kind: &str, inputs: &[InputDigest], body: T) -> Result<String> {
    let env = Envelope {
        format_version: FORMAT_VERSION,
        kind: kind.to_string(),
        inputs: inputs.to_vec(),
        body,
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(parse_err)?;
    s.push('\n');
    Ok(s)
}

/// Canonical text of a document.
pub fn to_string(doc: &Document) -> Result<String> {
    let k = doc.artifact.kind();
    let inputs = &doc.inputs;
    match &doc.artifact {
        Artifact::Poset(p) => envelope(k, inputs, p.to_spec()),
        Artifact::Instance(i) => envelope(k, inputs, instance_dto(i)),
        Artifact::WeakCertificate(c) => envelope(
            k,
            inputs,
            WeakCertDto {
                partition: match c.kind {
                    WeakKind::RPartition => "r".into(),
                    WeakKind::ModPartition => "mod".into(),
                },
                poset: c.poset.to_spec(),
                n: c.n,
                r: c.r.to_string(),
                base_embedding: EmbeddingDto {
                    dim: c.base_embedding.dim,
                    images: c.base_embedding.images.iter().map(element_str).collect(),
                },
                weights: weights_dto(&c.weights),
                integer_stage: c.integer_stage.as_ref().map(weights_dto),
            },
        ),
        Artifact::PartitionCertificate(c) => envelope(
            k,
            inputs,
            PartitionCertDto {
                instance: instance_dto(&c.instance),
                certificate: cert_dto(c),
            },
        ),
        Artifact::LatticePartition(p) => envelope(
            k,
            inputs,
            LatticeDto {
                poset: p.poset.to_spec(),
                n: p.n,
                tiles: p.tiles.iter().map(copy_strs).collect(),
            },
        ),
        Artifact::GeneralPlan {
            instance,
            plan,
            reason,
        } => envelope(
            k,
            inputs,
            PlanDto {
                instance: instance_dto(instance),
                plan_only: true,
                reason: reason.clone(),
                cover: plan
                    .cover
                    .iter()
                    .map(|&i| instance.family[i].id.clone())
                    .collect(),
                q: plan.q,
                dims: plan.dims.clone(),
                projected_cells: plan.projected_cells.to_string(),
                stages: plan
                    .stages
                    .iter()
                    .map(|s| StageDto {
                        index: s.index,
                        a: instance.labels_of(s.a),
                        b: instance.family[s.b_member].id.clone(),
                        certificate: cert_dto(&s.cert),
                    })
                    .collect(),
            },
        ),
        Artifact::WeakFindings(f) => {
            let dto = |v: &[Finding]| {
                v.iter()
                    .map(|f| FindingDto {
                        r: f.r,
                        weights: f.weights.clone(),
                    })
                    .collect()
            };
            envelope(
                k,
                inputs,
                FindingsDto {
                    instance: instance_dto(&f.instance),
                    r_max: f.r_max,
                    weight_bound: f.weight_bound,
                    vectors: f.findings.vectors,
                    r_partitions: dto(&f.findings.r_partitions),
                    mod_partitions: dto(&f.findings.mod_partitions),
                    exact: f.findings.exact.clone(),
                },
            )
        }
        Artifact::Manifest(m) => envelope(k, inputs, m),
    }
}

fn body<T: DeserializeOwned>(text: &str) -> Result<(T, Vec<InputDigest>)> {
    let env: Envelope<T> = serde_json::from_str(text).map_err(parse_err)?;
    Ok((env.body, env.inputs))
}

/// Parses a document. Malformed text is a [`Error::Parse`] with serde's
/// line and column; names that do not resolve are [`Error::Reference`].
pub fn from_str(text: &str) -> Result<Document> {
    let header: Header = serde_json::from_str(text).map_err(parse_err)?;
    if header.format_version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported format_version {} (expected {FORMAT_VERSION})",
            header.format_version
        )));
    }
    let (artifact, inputs) = match header.kind.as_str() {
        "poset" => {
            let (spec, inputs) = body::<PosetSpec>(text)?;
            (Artifact::Poset(Poset::from_spec(&spec)?), inputs)
        }
        "instance" => {
            let (d, inputs) = body::<InstanceDto>(text)?;
            (Artifact::Instance(parse_instance(d)?), inputs)
        }
        "weak-certificate" => {
            let (d, inputs) = body::<WeakCertDto>(text)?;
            let (kind, domain) = match d.partition.as_str() {
                "r" => (WeakKind::RPartition, ValueDomain::NonNegRational),
                "mod" => (WeakKind::ModPartition, ValueDomain::NonNegInteger),
                other => return Err(Error::Parse(format!("unknown partition kind {other:?}"))),
            };
            let r = BigUint::from_str(&d.r)
                .map_err(|_| Error::Parse(format!("r {:?} is not a natural number", d.r)))?;
            let images = d
                .base_embedding
                .images
                .iter()
                .map(|s| parse_element(s, d.base_embedding.dim))
                .collect::<Result<_>>()?;
            let cert = WeakCertificate {
                kind,
                poset: Poset::from_spec(&d.poset)?,
                n: d.n,
                r,
                base_embedding: Embedding {
                    dim: d.base_embedding.dim,
                    images,
                },
                weights: parse_weights(&d.weights, d.n, domain)?,
                integer_stage: d
                    .integer_stage
                    .as_ref()
                    .map(|v| parse_weights(v, d.n, ValueDomain::Integer))
                    .transpose()?,
            };
            (Artifact::WeakCertificate(cert), inputs)
        }
        "partition-certificate" => {
            let (d, inputs) = body::<PartitionCertDto>(text)?;
            let inst = parse_instance(d.instance)?;
            (
                Artifact::PartitionCertificate(parse_cert(inst, d.certificate)?),
                inputs,
            )
        }
        "lattice-partition" => {
            let (d, inputs) = body::<LatticeDto>(text)?;
            let tiles = d
                .tiles
                .iter()
                .map(|t| parse_copy(t, d.n))
                .collect::<Result<_>>()?;
            (
                Artifact::LatticePartition(LatticePartition {
                    poset: Poset::from_spec(&d.poset)?,
                    n: d.n,
                    tiles,
                }),
                inputs,
            )
        }
        "general-plan" => {
            let (d, inputs) = body::<PlanDto>(text)?;
            let instance = parse_instance(d.instance)?;
            let index = |id: &str| {
                instance
                    .member_index(id)
                    .ok_or_else(|| Error::Reference(format!("plan names undefined member {id}")))
            };
            let cover = d.cover.iter().map(|id| index(id)).collect::<Result<_>>()?;
            let mut stages = Vec::new();
            for s in d.stages {
                let b_member = index(&s.b)?;
                let a = instance.set_of(&s.a)?;
                let stage_inst = instance.with_ab(a, instance.family[b_member].set);
                stages.push(Stage {
                    index: s.index,
                    a,
                    b_member,
                    cert: parse_cert(stage_inst, s.certificate)?,
                });
            }
            let projected_cells = BigUint::from_str(&d.projected_cells)
                .map_err(|_| Error::Parse(format!("projected_cells {:?}", d.projected_cells)))?;
            let plan = GeneralPlan {
                cover,
                q: d.q,
                dims: d.dims,
                projected_cells,
                stages,
            };
            (
                Artifact::GeneralPlan {
                    instance,
                    plan,
                    reason: d.reason,
                },
                inputs,
            )
        }
        "weak-findings" => {
            let (d, inputs) = body::<FindingsDto>(text)?;
            let back = |v: Vec<FindingDto>| {
                v.into_iter()
                    .map(|f| Finding {
                        r: f.r,
                        weights: f.weights,
                    })
                    .collect()
            };
            let report = FindingsReport {
                instance: parse_instance(d.instance)?,
                r_max: d.r_max,
                weight_bound: d.weight_bound,
                findings: WeakFindings {
                    r_partitions: back(d.r_partitions),
                    mod_partitions: back(d.mod_partitions),
                    exact: d.exact,
                    vectors: d.vectors,
                },
            };
            (Artifact::WeakFindings(report), inputs)
        }
        "run-manifest" => {
            let (m, inputs) = body::<RunManifest>(text)?;
            (Artifact::Manifest(m), inputs)
        }
        other => return Err(Error::Parse(format!("unknown artifact kind {other:?}"))),
    };
    Ok(Document { artifact, inputs })
}

pub fn save(path: &Path, doc: &Document) -> Result<()> {
    std::fs::write(path, to_string(doc)?)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Document> {
    from_str(&std::fs::read_to_string(path)?)
}
