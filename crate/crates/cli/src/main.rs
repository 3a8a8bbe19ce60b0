mod io;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use latticetile::artifact::{Artifact, FindingsReport};
use latticetile::engine::{
    main_dimension, partition_fillin, partition_general, partition_main, partition_manychoices,
    partition_modify, partition_multiplechanges, partition_onecorner, product_compose,
    verify_certificate, verify_lattice_partition, GeneralMode, GeneralOutcome, LatticePartition,
    PartitionCertificate, ProductInstance, Set,
};
use latticetile::oracle::{direct_lattice_partition, weak_partition_search, CoverMode};
use latticetile::poset::Poset;
use latticetile::weak::{
    build_mod_certificate, build_r_certificate, verify_weak_certificate, WeakCertificate, WeakKind,
};
use latticetile::Budget;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use io::{Failure, Outcome, Run};

/// Builders, verifiers and brute-force oracles for partitions of Boolean
/// lattices and product sets.
#[derive(Parser)]
#[command(name = "latticetile", version)]
struct Cli {
    /// Most cells a product certificate (or a verifier grid) may have.
    #[arg(long, global = true, env = "LATTICETILE_BUDGET_CELLS", default_value_t = Budget::DEFAULT_CELLS)]
    budget_cells: u64,
    /// Most nodes a backtracking search may visit.
    #[arg(long, global = true, env = "LATTICETILE_BUDGET_NODES", default_value_t = Budget::DEFAULT_NODES)]
    budget_nodes: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Poset files.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// r-partitions of B(n) into copies of a poset.
    #[command(subcommand)]
    Rpart(WeakCmd),
    /// (1 mod r)-partitions of B(n) into copies of a poset.
    #[command(subcommand)]
    Modpart(WeakCmd),
    /// Partitions of product sets.
    #[command(subcommand)]
    Engine(EngineCmd),
    /// Brute-force searches.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Check any certificate file.
    Verify { cert: PathBuf },
}

#[derive(Subcommand)]
enum PosetCmd {
    /// Check that a file describes a partial order.
    Validate {
        #[arg(long)]
        poset: PathBuf,
    },
}

#[derive(Subcommand)]
enum WeakCmd {
    Build {
        #[arg(long)]
        poset: PathBuf,
        /// Modulus, for modpart.
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        cert: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plan,
    Full,
    Auto,
}

#[derive(Subcommand)]
enum EngineCmd {
    /// U^k minus the corner C_{i,k}, by copies of A and B.
    Onecorner {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend a partition of U^k minus X by one coordinate.
    Modify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exchange the corners in I for the corners in J.
    Changes {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long = "from", value_delimiter = ',', num_args = 0..)]
        from: Vec<usize>,
        #[arg(long = "to", value_delimiter = ',', num_args = 0..)]
        to: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// S × U^t minus Q_0 ∪ ... ∪ Q_t for the listed members P_1..P_t.
    Fillin {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        members: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// S × (U^l minus the corners in J).
    Manychoices {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        j: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// S^2 × U^n by copies of members of F, A and B.
    Main {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// S^n by copies of family members.
    General {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product of two lattice partitions.
    Compose {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverArg {
    First,
    Count,
    All,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Exact cover of B(n) by copies of a poset.
    Cover {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "first")]
        mode: CoverArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search for weak-partition witnesses of a family.
    Weak {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 4)]
        r_max: u32,
        #[arg(long, default_value_t = 6)]
        weight_bound: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random families until one has r- and (1 mod r)-partition witnesses
    /// for the same r ≥ 2; writes it as an instance.
    Discover {
        #[arg(long, env = "LATTICETILE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        ground: usize,
        #[arg(long, default_value_t = 5)]
        members: usize,
        #[arg(long, default_value_t = 3)]
        r_max: u32,
        #[arg(long, default_value_t = 6)]
        weight_bound: u32,
        #[arg(long, default_value_t = 1000)]
        tries: u32,
        /// Largest |S|^2 |U|^n accepted for the main construction.
        #[arg(long, default_value_t = 1_000_000)]
        max_cells: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let budget = Budget::default()
        .with_cells(cli.budget_cells)
        .with_nodes(cli.budget_nodes);
    let mut run = Run::new(std::env::args().collect(), budget);
    let (code, outcome) = match dispatch(cli.cmd, &mut run) {
        Ok(msg) => {
            eprintln!("{msg}");
            (0, msg)
        }
        Err(f) => {
            eprintln!("error: {f}");
            (f.code(), f.to_string())
        }
    };
    run.write_manifest(&outcome, code);
    std::process::exit(code);
}

fn load_poset(run: &mut Run, path: &Path) -> Outcome<Poset> {
    match run.load(path)? {
        Artifact::Poset(p) => Ok(p),
        other => Err(Failure::Usage(format!(
            "{} is a {}, expected a poset",
            path.display(),
            other.kind()
        ))),
    }
}

fn load_instance(run: &mut Run, path: &Path) -> Outcome<ProductInstance> {
    match run.load(path)? {
        Artifact::Instance(i) => Ok(i),
        Artifact::PartitionCertificate(c) => Ok(c.instance),
        other => Err(Failure::Usage(format!(
            "{} is a {}, expected an instance",
            path.display(),
            other.kind()
        ))),
    }
}

fn load_lattice(run: &mut Run, path: &Path) -> Outcome<LatticePartition> {
    match run.load(path)? {
        Artifact::LatticePartition(p) => Ok(p),
        other => Err(Failure::Usage(format!(
            "{} is a {}, expected a lattice partition",
            path.display(),
            other.kind()
        ))),
    }
}

fn check_weak(c: &WeakCertificate) -> Outcome<String> {
    let report = verify_weak_certificate(c);
    if !report.is_ok() {
        let lines: Vec<String> = report
            .violations
            .iter()
            .take(20)
            .map(|v| format!("  {v}"))
            .collect();
        return Err(Failure::Rejected(format!(
            "{} violation(s):\n{}",
            report.violations.len(),
            lines.join("\n")
        )));
    }
    Ok(format!(
        "verified: n = {}, r = {}, {} copies with nonzero weight, {} levels, {} elements checked",
        c.n,
        c.r,
        c.weights.len(),
        report.levels_checked,
        report.elements_checked
    ))
}

fn check_partition(c: &PartitionCertificate, budget: &Budget) -> Outcome<String> {
    let report = verify_certificate(c, budget).map_err(Failure::from_input)?;
    if !report.is_ok() {
        let lines: Vec<String> = report.violations.iter().map(|v| format!("  {v}")).collect();
        return Err(Failure::Rejected(format!(
            "{} violation(s):\n{}",
            report.violation_count,
            lines.join("\n")
        )));
    }
    Ok(format!(
        "verified: {} cells in S^{}, {} tiles",
        report.region_cells, c.dim, report.tiles
    ))
}

fn check_lattice(p: &LatticePartition, budget: &Budget) -> Outcome<String> {
    let report = verify_lattice_partition(p, budget).map_err(Failure::from_input)?;
    if !report.is_ok() {
        let mut msg = String::from("not a partition:");
        if !report.not_copies.is_empty() {
            msg += &format!("\n  tiles that are not copies: {:?}", report.not_copies);
        }
        for (x, a, b) in report.overlaps.iter().take(20) {
            msg += &format!("\n  overlap at {x} (tiles {a} and {b})");
        }
        if let Some(x) = &report.first_uncovered {
            msg += &format!("\n  {} uncovered element(s), first {x}", report.uncovered);
        }
        return Err(Failure::Rejected(msg));
    }
    Ok(format!(
        "verified: B({}) into {} copies",
        p.n,
        p.tiles.len()
    ))
}

/// Re-verifies a fresh certificate, then writes it.
fn emit_partition(
    run: &mut Run,
    out: Option<&PathBuf>,
    c: PartitionCertificate,
) -> Outcome<String> {
    let msg = check_partition(&c, &run.budget)?;
    run.emit(out, Artifact::PartitionCertificate(c))?;
    Ok(msg)
}

fn parse_set_list(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

fn dispatch(cmd: Cmd, run: &mut Run) -> Outcome<String> {
    let budget = run.budget;
    match cmd {
        Cmd::Poset(PosetCmd::Validate { poset }) => {
            let p = load_poset(run, &poset)?;
            let lattice = p
                .log2_size()
                .map_or(String::new(), |d| format!(", isomorphic size to B({d})"));
            Ok(format!(
                "valid poset: {} elements, {} cover relations, top {}, bottom {}{lattice}",
                p.len(),
                p.covers().len(),
                p.top().map_or("none".into(), |t| p.id(t).to_string()),
                p.bottom().map_or("none".into(), |b| p.id(b).to_string()),
            ))
        }
        Cmd::Rpart(WeakCmd::Build { poset, r, out }) => {
            if r.is_some() {
                return Err(Failure::Usage(
                    "rpart build takes no --r; r is determined by the poset".into(),
                ));
            }
            let p = load_poset(run, &poset)?;
            let c = build_r_certificate(&p, &budget).map_err(Failure::from_build)?;
            let msg = check_weak(&c)?;
            run.emit(out.as_ref(), Artifact::WeakCertificate(c))?;
            Ok(msg)
        }
        Cmd::Modpart(WeakCmd::Build { poset, r, out }) => {
            let r = r.ok_or_else(|| Failure::Usage("modpart build needs --r".into()))?;
            let r: BigUint = r
                .parse()
                .map_err(|_| Failure::Usage(format!("--r {r:?} is not a natural number")))?;
            let p = load_poset(run, &poset)?;
            let c = build_mod_certificate(&p, &r, &budget).map_err(Failure::from_build)?;
            let msg = check_weak(&c)?;
            run.emit(out.as_ref(), Artifact::WeakCertificate(c))?;
            Ok(msg)
        }
        Cmd::Rpart(WeakCmd::Verify { cert }) | Cmd::Modpart(WeakCmd::Verify { cert }) => {
            match run.load(&cert)? {
                Artifact::WeakCertificate(c) => check_weak(&c),
                other => Err(Failure::Usage(format!(
                    "{} is a {}, not a weak certificate",
                    cert.display(),
                    other.kind()
                ))),
            }
        }
        Cmd::Engine(e) => engine(e, run),
        Cmd::Oracle(o) => oracle(o, run),
        Cmd::Verify { cert } => verify_any(run, &cert),
    }
}

fn verify_any(run: &mut Run, path: &Path) -> Outcome<String> {
    let budget = run.budget;
    match run.load(path)? {
        Artifact::WeakCertificate(c) => {
            let kind = match c.kind {
                WeakKind::RPartition => "r-partition",
                WeakKind::ModPartition => "(1 mod r)-partition",
            };
            Ok(format!("{kind}: {}", check_weak(&c)?))
        }
        Artifact::PartitionCertificate(c) => check_partition(&c, &budget),
        Artifact::LatticePartition(p) => check_lattice(&p, &budget),
        Artifact::GeneralPlan { instance, plan, .. } => {
            for s in &plan.stages {
                let want = instance.with_ab(s.a, instance.family[s.b_member].set);
                if s.cert.instance != want {
                    return Err(Failure::Rejected(format!(
                        "stage {} is over a different instance",
                        s.index
                    )));
                }
                check_partition(&s.cert, &budget)
                    .map_err(|f| Failure::Rejected(format!("stage {}: {f}", s.index)))?;
            }
            Ok(format!(
                "plan only: {} stage certificate(s) verified, n = {}, {} projected cells",
                plan.stages.len(),
                plan.dims.first().copied().unwrap_or(0),
                plan.projected_cells
            ))
        }
        other => Err(Failure::Usage(format!(
            "{} is a {}, not a certificate",
            path.display(),
            other.kind()
        ))),
    }
}

fn member_positions(inst: &ProductInstance, ids: &[String]) -> Outcome<Vec<usize>> {
    ids.iter()
        .map(|id| {
            inst.member_index(id)
                .ok_or_else(|| Failure::Usage(format!("no family member {id}")))
        })
        .collect()
}

fn engine(cmd: EngineCmd, run: &mut Run) -> Outcome<String> {
    let budget = run.budget;
    let built = |r: latticetile::Result<PartitionCertificate>| r.map_err(Failure::from_build);
    match cmd {
        EngineCmd::Onecorner {
            instance,
            k,
            i,
            out,
        } => {
            let inst = load_instance(run, &instance)?;
            let c = built(partition_onecorner(&inst, k, i, &budget))?;
            emit_partition(run, out.as_ref(), c)
        }
        EngineCmd::Modify { cert, i, out } => {
            let c = match run.load(&cert)? {
                Artifact::PartitionCertificate(c) => c,
                other => {
                    return Err(Failure::Usage(format!(
                        "{} is a {}, expected a certificate",
                        cert.display(),
                        other.kind()
                    )))
                }
            };
            let c = partition_modify(&c, i, &budget).map_err(|e| match e {
                latticetile::Error::InvalidInput(_) => Failure::Rejected(e.to_string()),
                e => Failure::from_build(e),
            })?;
            emit_partition(run, out.as_ref(), c)
        }
        EngineCmd::Changes {
            instance,
            k,
            l,
            from,
            to,
            out,
        } => {
            let inst = load_instance(run, &instance)?;
            let c = built(partition_multiplechanges(
                &inst,
                k,
                l,
                &parse_set_list(&from),
                &parse_set_list(&to),
                &budget,
            ))?;
            emit_partition(run, out.as_ref(), c)
        }
        EngineCmd::Fillin {
            instance,
            members,
            out,
        } => {
            let inst = load_instance(run, &instance)?;
            let ps = member_positions(&inst, &members)?;
            let c = built(partition_fillin(&inst, &ps, &budget))?;
            emit_partition(run, out.as_ref(), c)
        }
        EngineCmd::Manychoices {
            instance,
            k,
            j,
            out,
        } => {
            let inst = load_instance(run, &instance)?;
            let c = built(partition_manychoices(
                &inst,
                k,
                &parse_set_list(&j),
                &budget,
            ))?;
            emit_partition(run, out.as_ref(), c)
        }
        EngineCmd::Main { instance, out } => {
            let inst = load_instance(run, &instance)?;
            let (n, c) = partition_main(&inst, &budget).map_err(Failure::from_build)?;
            let msg = emit_partition(run, out.as_ref(), c)?;
            Ok(format!("n = {n}; {msg}"))
        }
        EngineCmd::General {
            instance,
            mode,
            out,
        } => {
            let inst = load_instance(run, &instance)?;
            let mode = match mode {
                ModeArg::Plan => GeneralMode::Plan,
                ModeArg::Full => GeneralMode::Full,
                ModeArg::Auto => GeneralMode::Auto,
            };
            match partition_general(&inst, mode, &budget).map_err(Failure::from_build)? {
                GeneralOutcome::Full { n, cert, plan } => {
                    let msg = emit_partition(run, out.as_ref(), cert)?;
                    Ok(format!(
                        "full: n = {n}, cover of size {}; {msg}",
                        plan.cover.len()
                    ))
                }
                GeneralOutcome::PlanOnly { plan, reason } => {
                    for s in &plan.stages {
                        check_partition(&s.cert, &budget)
                            .map_err(|f| Failure::Rejected(format!("stage {}: {f}", s.index)))?;
                    }
                    let msg = format!(
                        "PLAN ONLY ({reason}): cover of size {}, q = {}, dimensions {:?}, {} projected cells, {} stage certificate(s) verified",
                        plan.cover.len(),
                        plan.q,
                        plan.dims,
                        plan.projected_cells,
                        plan.stages.len()
                    );
                    run.emit(
                        out.as_ref(),
                        Artifact::GeneralPlan {
                            instance: inst,
                            plan,
                            reason,
                        },
                    )?;
                    Ok(msg)
                }
            }
        }
        EngineCmd::Compose { left, right, out } => {
            let p = load_lattice(run, &left)?;
            let q = load_lattice(run, &right)?;
            check_lattice(&p, &budget)
                .map_err(|f| Failure::Rejected(format!("{}: {f}", left.display())))?;
            check_lattice(&q, &budget)
                .map_err(|f| Failure::Rejected(format!("{}: {f}", right.display())))?;
            let c = product_compose(&p, &q).map_err(Failure::from_build)?;
            let msg = check_lattice(&c, &budget)?;
            run.emit(out.as_ref(), Artifact::LatticePartition(c))?;
            Ok(msg)
        }
    }
}

/// `sol.json` → `sol-3.json`
fn numbered(path: &Path, i: usize) -> PathBuf {
    let stem = path
        .file_stem()
        .map_or("solution".into(), |s| s.to_string_lossy().into_owned());
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{i}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{i}"),
    };
    path.with_file_name(name)
}

fn oracle(cmd: OracleCmd, run: &mut Run) -> Outcome<String> {
    let budget = run.budget;
    match cmd {
        OracleCmd::Cover {
            poset,
            n,
            mode,
            out,
        } => {
            let p = load_poset(run, &poset)?;
            let mode = match mode {
                CoverArg::First => CoverMode::First,
                CoverArg::Count => CoverMode::Count,
                CoverArg::All => CoverMode::All,
            };
            let found =
                direct_lattice_partition(&p, n, mode, &budget).map_err(Failure::from_build)?;
            if found.is_unsat() {
                return Err(Failure::Rejected(format!(
                    "UNSAT: B({n}) has no partition into copies ({} copies, {} search nodes)",
                    found.copies, found.nodes
                )));
            }
            for (i, part) in found.partitions.iter().enumerate() {
                check_lattice(part, &budget)?;
                let target = match (&out, found.partitions.len()) {
                    (Some(o), 1) => Some(o.clone()),
                    (Some(o), _) => Some(numbered(o, i + 1)),
                    (None, _) => None,
                };
                run.emit(target.as_ref(), Artifact::LatticePartition(part.clone()))?;
            }
            Ok(match mode {
                CoverMode::Count => format!("{} partition(s) of B({n})", found.count),
                _ => format!(
                    "{} partition(s) of B({n}) written, {} tiles each",
                    found.partitions.len(),
                    found.partitions[0].tiles.len()
                ),
            })
        }
        OracleCmd::Weak {
            instance,
            r_max,
            weight_bound,
            out,
        } => {
            let inst = load_instance(run, &instance)?;
            let family: Vec<Set> = inst.family.iter().map(|m| m.set).collect();
            let findings =
                weak_partition_search(inst.full(), &family, r_max, weight_bound, &budget)
                    .map_err(Failure::from_build)?;
            let rs: Vec<u32> = findings.r_partitions.iter().map(|f| f.r).collect();
            let ms: Vec<u32> = findings.mod_partitions.iter().map(|f| f.r).collect();
            let msg = format!(
                "{} weightings: r-partitions for r in {rs:?}, (1 mod r)-partitions for r in {ms:?}, exact partition: {}",
                findings.vectors,
                if findings.exact.is_some() { "yes" } else { "no" }
            );
            let report = FindingsReport {
                instance: inst,
                r_max,
                weight_bound,
                findings,
            };
            run.emit(out.as_ref(), Artifact::WeakFindings(report))?;
            Ok(msg)
        }
        OracleCmd::Discover {
            seed,
            ground,
            members,
            r_max,
            weight_bound,
            tries,
            max_cells,
            out,
        } => {
            if !(2..=12).contains(&ground) || members == 0 {
                return Err(Failure::Usage(
                    "need 2 ≤ --ground ≤ 12 and --members ≥ 1".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let full: Set = (1 << ground) - 1;
            // proper nonempty subsets, so that S itself is never a member
            let mut pool: Vec<Set> = (1..full).collect();
            for attempt in 1..=tries {
                pool.shuffle(&mut rng);
                let take = members.min(pool.len());
                let mut family: Vec<Set> = pool[..take].to_vec();
                family.sort_unstable();
                let findings = weak_partition_search(full, &family, r_max, weight_bound, &budget)
                    .map_err(Failure::from_build)?;
                let Some(r) = (2..=r_max).find(|&r| {
                    findings.r_partition(r).is_some() && findings.mod_partition(r).is_some()
                }) else {
                    continue;
                };
                let rw = findings
                    .r_partition(r)
                    .map(|f| f.as_list())
                    .unwrap_or_default();
                let mw = findings
                    .mod_partition(r)
                    .map(|f| f.as_list())
                    .unwrap_or_default();
                let inst = discovered_instance(
                    ground,
                    &family,
                    r,
                    &rw,
                    &mw,
                    rng.gen_range(0..family.len()),
                );
                let inst = match inst {
                    Ok(i) => i,
                    Err(_) => continue,
                };
                let n = main_dimension(&inst).map_err(Failure::from_build)?;
                let cells = (ground as u128).pow(2) * (inst.u().count_ones() as u128).pow(n as u32);
                if cells > u128::from(max_cells) {
                    continue;
                }
                let msg = format!(
                    "found after {attempt} famil{}: r = {r}, {} members, main dimension {n}, {cells} cells",
                    if attempt == 1 { "y" } else { "ies" },
                    family.len()
                );
                run.emit(out.as_ref(), Artifact::Instance(inst))?;
                return Ok(msg);
            }
            Err(Failure::Rejected(format!(
                "no suitable family in {tries} tries"
            )))
        }
    }
}

/// Ground `1..=g`, members `f1, f2, ...`; `A` and `B` are the first two
/// distinct members of the r-witness after rotating it by `shift`.
fn discovered_instance(
    ground: usize,
    family: &[Set],
    r: u32,
    rw: &[usize],
    mw: &[usize],
    shift: usize,
) -> latticetile::Result<ProductInstance> {
    let labels: Vec<String> = (1..=ground).map(|i| i.to_string()).collect();
    let fam = family
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let elems = (0..ground)
                .filter(|&j| s >> j & 1 == 1)
                .map(|j| labels[j].clone())
                .collect();
            (format!("f{}", i + 1), elems)
        })
        .collect();
    let inst = ProductInstance::new(labels.clone(), fam, &[], &[])?;
    let ids = |list: &[usize]| {
        list.iter()
            .map(|&i| format!("f{}", i + 1))
            .collect::<Vec<_>>()
    };
    let inst = inst.with_witnesses(r, &ids(rw), &ids(mw))?;
    let mut support: Vec<usize> = Vec::new();
    for &i in rw {
        if !support.contains(&i) {
            support.push(i);
        }
    }
    let s = shift % support.len().max(1);
    support.rotate_left(s);
    let a = family[support[0]];
    let b = family[*support.get(1).unwrap_or(&support[0])];
    Ok(inst.with_ab(a, b))
}
