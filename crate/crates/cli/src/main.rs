//! Command-line front end: model ingestion, command dispatch, structured
//! reports, DOT exports, and the enumeration harness.
//!
//! Exit codes: 0 all checked clauses pass, 1 a checked clause fails,
//! 2 input or usage error.  Reports are byte-deterministic for identical
//! inputs and seeds.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use finmet::dot::{entourage_lattice_dot, open_lattice_dot, specialization_dot};
use finmet::io::{BaseDoc, IoError, MvsDoc, SpaceDoc, TopologyDoc};
use finmet::{
    alexandrov_metrize, base_from_qm, base_topology, compare_bases, convexify_until,
    embed_full, entourage_mvs, enumerate_mvs, enumerate_topologies, full_convex_report,
    generates_uniformity, glue, metrize_from_base, product, roundtrip, validate_base, AxiomCheck,
    BallKind, CharError, Clause, Entourage, FiniteTopology, MvsClass, MvsError, MvsTable,
    PointSet, QmError, QmSpace, Report,
};

#[derive(Parser)]
#[command(name = "finmet", version, about = "Exact finite models of value-set quasimetrics, their topologies and quasiuniformities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Report rendering: text, json, or dot (where a graph view exists).
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Where to write the emitted model file (or, for check-only commands,
    /// the report) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Convexification stage budget.
    #[arg(long, global = true, default_value_t = 8)]
    max_stages: usize,
    /// Convexification carrier-size budget.
    #[arg(long, global = true, default_value_t = 5000)]
    max_points: usize,
    /// Seed for `random:` space sources.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Reduce enumerated value sets up to isomorphism.
    #[arg(long, global = true, default_value_t = false)]
    up_to_iso: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a value-set table and classify it.
    CheckMvs { file: String },
    /// Validate a quasimetric space file.
    CheckQmf { space: String },
    /// Induced topology of a space: minimal open sets, open count.
    Topology { space: String },
    /// Neighbourhood-system axioms of the open and closed ball systems.
    NbhdCheck { space: String },
    /// Metrize a finite topology over ({0,1,2}, max).
    Alexandrov { topology: String },
    /// Pull a space back along a map given by old-point labels.
    Pullback {
        space: String,
        /// Comma-separated labels of the new points.
        #[arg(long)]
        points: String,
        /// Comma-separated labels of the image points, one per new point.
        #[arg(long)]
        map: String,
    },
    /// Restrict a space to a subset of its points.
    Restrict {
        space: String,
        /// Comma-separated labels of the kept points.
        #[arg(long)]
        points: String,
    },
    /// Product of spaces over one value set, with the sum quasimetric.
    Product { spaces: Vec<String> },
    /// Glue pieces over an open cover of a topology into a space over M-infinity.
    Glue {
        topology: String,
        /// Space files, one per cover member; each point set names a subset
        /// of the topology's points.
        pieces: Vec<String>,
    },
    /// Closed-ball system axioms and open/closed equivalence.
    ClosedBalls { space: String },
    /// Validate a quasiuniform base file (UB1-UB3, uniformity check).
    QuBase { base: String },
    /// Topology induced by a quasiuniform base.
    BaseTopology { base: String },
    /// Entourage base of a space over an atom-free value set.
    BaseFromQmf { space: String },
    /// Fullness and convexity scan of a space.
    FullConvex { space: String },
    /// Embed a space into a full one over the same value set.
    EmbedFull { space: String },
    /// Iterate midpoint stages until convex or out of budget.
    Convexify { space: String },
    /// Entourage value set of a full convex space.
    EntourageMvs { space: String },
    /// Quasimetric from a base file whose first entourage is U0.
    MetrizeFromBase { base: String },
    /// Full pipeline: fill, convexify, extract, metrize, compare topologies.
    Roundtrip { space: String },
    /// Enumerate all value sets of one order.
    EnumerateMvs { order: usize },
    /// Enumerate all topologies on n labeled points by two code paths.
    EnumerateTopologies { n: usize },
}

/// Input or usage problem: reported on stderr with exit code 2.
struct Usage(String);

fn usage<E: std::fmt::Display>(e: E) -> Usage {
    Usage(e.to_string())
}

/// What a command produced: a report (always), an optional emitted model
/// document, and an optional DOT view.
struct CmdOut {
    report: Report,
    model: Option<String>,
    dot: Option<String>,
}

impl CmdOut {
    fn report(report: Report) -> CmdOut {
        CmdOut { report, model: None, dot: None }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => emit(&cli, out),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, out: CmdOut) -> ExitCode {
    let rendered = match cli.format {
        Format::Text => out.report.render_text(),
        Format::Json => out.report.render_json(),
        Format::Dot => match out.dot {
            Some(d) => d,
            None => {
                eprintln!("error: this command has no DOT view");
                return ExitCode::from(2);
            }
        },
    };
    let status = if out.report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) };
    match (&cli.out, &out.model, cli.format) {
        // A produced model goes to --out; the report stays on stdout.
        (Some(path), Some(model), Format::Text | Format::Json) => {
            if let Err(e) = std::fs::write(path, model) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            print!("{rendered}");
        }
        (Some(path), _, _) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        _ => print!("{rendered}"),
    }
    status
}

fn run(cli: &Cli) -> Result<CmdOut, Usage> {
    match &cli.cmd {
        Cmd::CheckMvs { file } => check_mvs(file),
        Cmd::CheckQmf { space } => check_qmf(&load_space(space, cli.seed)?),
        Cmd::Topology { space } => topology_cmd(&load_space(space, cli.seed)?),
        Cmd::NbhdCheck { space } => nbhd_check(&load_space(space, cli.seed)?),
        Cmd::Alexandrov { topology } => alexandrov_cmd(topology),
        Cmd::Pullback { space, points, map } => {
            pullback_cmd(&load_space(space, cli.seed)?, points, map)
        }
        Cmd::Restrict { space, points } => restrict_cmd(&load_space(space, cli.seed)?, points),
        Cmd::Product { spaces } => {
            let loaded: Vec<QmSpace> = spaces
                .iter()
                .map(|p| load_space(p, cli.seed))
                .collect::<Result<_, _>>()?;
            product_cmd(&loaded)
        }
        Cmd::Glue { topology, pieces } => glue_cmd(topology, pieces, cli.seed),
        Cmd::ClosedBalls { space } => closed_balls(&load_space(space, cli.seed)?),
        Cmd::QuBase { base } => qu_base(&load_base(base)?),
        Cmd::BaseTopology { base } => base_topology_cmd(&load_base(base)?),
        Cmd::BaseFromQmf { space } => base_from_qmf(&load_space(space, cli.seed)?),
        Cmd::FullConvex { space } => full_convex(&load_space(space, cli.seed)?),
        Cmd::EmbedFull { space } => embed_full_cmd(&load_space(space, cli.seed)?),
        Cmd::Convexify { space } => {
            convexify_cmd(&load_space(space, cli.seed)?, cli.max_stages, cli.max_points)
        }
        Cmd::EntourageMvs { space } => entourage_mvs_cmd(&load_space(space, cli.seed)?),
        Cmd::MetrizeFromBase { base } => metrize_cmd(&load_base(base)?),
        Cmd::Roundtrip { space } => {
            roundtrip_cmd(&load_space(space, cli.seed)?, cli.max_stages, cli.max_points)
        }
        Cmd::EnumerateMvs { order } => enumerate_mvs_cmd(*order, cli.up_to_iso),
        Cmd::EnumerateTopologies { n } => enumerate_topologies_cmd(*n),
    }
}

// ---- ingestion -------------------------------------------------------------

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Usage(format!("{path}: {e}")))
}

/// Spaces come from a JSON file or a `random:n=..,k=..` source seeded with
/// `--seed`: a random matrix over ({0..k-1}, max) repaired to a triangle
/// fixpoint.
fn load_space(source: &str, seed: u64) -> Result<QmSpace, Usage> {
    if let Some(params) = source.strip_prefix("random:") {
        return random_space(params, seed);
    }
    let doc: SpaceDoc = read_json(source)?;
    let dir = Path::new(source).parent().map(Path::to_path_buf).unwrap_or_default();
    doc.parse(|rel| {
        let full = dir.join(rel);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| IoError::UnresolvedRef(format!("{}: {e}", full.display())))?;
        Ok(serde_json::from_str(&text)?)
    })
    .map_err(|e| Usage(format!("{source}: {e}")))
}

fn random_space(params: &str, seed: u64) -> Result<QmSpace, Usage> {
    let mut n = None;
    let mut k = None;
    for part in params.split(',') {
        match part.split_once('=') {
            Some(("n", v)) => n = Some(v.parse::<usize>().map_err(usage)?),
            Some(("k", v)) => k = Some(v.parse::<usize>().map_err(usage)?),
            _ => return Err(Usage(format!("bad random source component {part:?}"))),
        }
    }
    let (n, k) = match (n, k) {
        (Some(n), Some(k)) if n >= 1 && k >= 2 => (n, k),
        _ => return Err(Usage("random source needs n>=1 and k>=2".into())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![vec![0usize; n]; n];
    for row in d.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.gen_range(0..k);
        }
    }
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = 0;
    }
    for y in 0..n {
        for x in 0..n {
            for z in 0..n {
                let bound = d[x][y].max(d[y][z]);
                if d[x][z] > bound {
                    d[x][z] = bound;
                }
            }
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    Ok(QmSpace::validate(labels, Arc::new(MvsTable::max_mvs(k)), d)
        .expect("repaired matrix satisfies the axioms"))
}

/// Topology files parse literally; a family that is merely a subbase is
/// closed up, with a note in the report.
fn load_topology(path: &str) -> Result<(Vec<String>, FiniteTopology, Option<Clause>), Usage> {
    let doc: TopologyDoc = read_json(path)?;
    match doc.parse() {
        Ok(t) => Ok((doc.points, t, None)),
        Err(IoError::Topo(_)) => {
            let t = doc.parse_as_subbase().map_err(|e| Usage(format!("{path}: {e}")))?;
            let note = Clause::note("Thm 1.10", "listed opens treated as a subbase");
            Ok((doc.points, t, Some(note)))
        }
        Err(e) => Err(Usage(format!("{path}: {e}"))),
    }
}

fn load_base(path: &str) -> Result<(Vec<String>, Vec<(String, Entourage)>), Usage> {
    let doc: BaseDoc = read_json(path)?;
    let named = doc.parse().map_err(|e| Usage(format!("{path}: {e}")))?;
    if named.is_empty() {
        return Err(Usage(format!("{path}: base file lists no entourages")));
    }
    Ok((doc.points, named))
}

fn split_labels(list: &str) -> Vec<String> {
    list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn label_indices(points: &[String], labels: &[String]) -> Result<Vec<usize>, Usage> {
    labels
        .iter()
        .map(|l| {
            points
                .iter()
                .position(|p| p == l)
                .ok_or_else(|| Usage(format!("unknown point label {l:?}")))
        })
        .collect()
}

fn space_model(q: &QmSpace) -> Option<String> {
    Some(serde_json::to_string_pretty(&SpaceDoc::from_space(q)).expect("document serializes"))
}

fn set_text(points: &[String], s: &PointSet) -> String {
    let names: Vec<&str> = s.iter().map(|i| points[i].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

fn axiom_clause(anchor: &str, name: &str, check: &AxiomCheck) -> Clause {
    match &check.witness {
        None => Clause::pass(anchor, format!("({name}) holds")),
        Some(w) => Clause::fail(anchor, format!("({name}) fails: {w}")),
    }
}

// ---- commands --------------------------------------------------------------

fn check_mvs(path: &str) -> Result<CmdOut, Usage> {
    let doc: MvsDoc = read_json(path)?;
    let mut report = Report::new(format!("value set {path}"));
    match doc.parse() {
        Ok(m) => {
            report.push(Clause::pass(
                "Def 1.1",
                format!("axioms (M1)-(M4) hold on {} elements", m.order()),
            ));
            let c = MvsClass::of(&m);
            let word = |b: bool, name: &str| {
                if b { name.to_string() } else { format!("not {name}") }
            };
            report.push(Clause::note(
                "Def 1.1",
                format!(
                    "{}, {}, {}",
                    word(c.commutative, "commutative"),
                    word(c.atom_free, "atom-free"),
                    word(c.strictly_atom_free, "strictly atom-free")
                ),
            ));
            Ok(CmdOut::report(report))
        }
        Err(IoError::Mvs(MvsError::Violation { axiom, witness })) => {
            report.push(Clause::fail(
                "Def 1.1",
                format!("axiom ({axiom:?}) violated at {witness:?}"),
            ));
            Ok(CmdOut::report(report))
        }
        Err(e) => Err(Usage(format!("{path}: {e}"))),
    }
}

fn check_qmf(q: &QmSpace) -> Result<CmdOut, Usage> {
    let mut report = Report::new(format!("quasimetric on {} points", q.len()));
    report.push(Clause::pass(
        "Def 1.2",
        "(f1) triangle inequality and (f2) identity hold",
    ));
    let yn = |b: bool| if b { "yes" } else { "no" };
    report.push(Clause::note("Def 1.2", format!("symmetric (f3): {}", yn(q.is_symmetric()))));
    report.push(Clause::note("Def 1.2", format!("strict: {}", yn(q.is_strict()))));
    let t = q.induced_topology();
    let dot = specialization_dot(q.points(), &t);
    Ok(CmdOut { report, model: None, dot: Some(dot) })
}

fn topology_report(points: &[String], t: &FiniteTopology) -> Report {
    let mut report = Report::new(format!("topology on {} points", t.points()));
    for x in 0..t.points() {
        report.push(Clause::note(
            "Thm 1.10",
            format!("U({}) = {}", points[x], set_text(points, t.min_open(x))),
        ));
    }
    match t.open_count() {
        Ok(n) => report.push(Clause::note("Thm 1.10", format!("open sets: {n}"))),
        Err(_) => report.push(Clause::note(
            "Thm 1.10",
            "open family too large to materialize; minimal opens shown",
        )),
    }
    report
}

fn topology_cmd(q: &QmSpace) -> Result<CmdOut, Usage> {
    let t = q.induced_topology();
    let report = topology_report(q.points(), &t);
    let dot = open_lattice_dot(q.points(), &t).ok();
    Ok(CmdOut { report, model: None, dot })
}

fn nbhd_check(q: &QmSpace) -> Result<CmdOut, Usage> {
    let mut report = Report::new("ball neighbourhood systems");
    for (kind, name) in [(BallKind::Open, "open"), (BallKind::Closed, "closed")] {
        let flags = q.ball_system(kind).system.validate();
        for (axiom, check) in [
            ("B1", &flags.b1),
            ("B2", &flags.b2),
            ("B3", &flags.b3),
            ("B3'", &flags.b3_prime),
        ] {
            report.push(match &check.witness {
                None => Clause::pass("Thm 2.2", format!("{name} balls: ({axiom}) holds")),
                Some(w) => Clause::fail("Thm 2.2", format!("{name} balls: ({axiom}) fails: {w}")),
            });
        }
    }
    Ok(CmdOut::report(report))
}

fn alexandrov_cmd(path: &str) -> Result<CmdOut, Usage> {
    let (points, t, note) = load_topology(path)?;
    let mut report = Report::new(format!("Alexandrov metrization of {path}"));
    report.extend(note);
    let q = alexandrov_metrize(&t, points);
    report.push(Clause::pass("Thm 1.10", "T_f = T"));
    report.push(Clause::pass("Thm 1.10", "U(x) = B_f(x, 1) for every x"));
    report.push(Clause::pass("Thm 1.10", "f is strict"));
    Ok(CmdOut { report, model: space_model(&q), dot: None })
}

fn pullback_cmd(q: &QmSpace, points: &str, map: &str) -> Result<CmdOut, Usage> {
    let new_points = split_labels(points);
    let images = split_labels(map);
    if new_points.len() != images.len() {
        return Err(Usage("--points and --map must have the same length".into()));
    }
    let g = label_indices(q.points(), &images)?;
    let pulled = q.pullback(new_points, &g).map_err(|e| Usage(e.to_string()))?;
    let mut report = Report::new("pullback");
    report.push(Clause::pass(
        "Thm 1.4",
        "g*f is a quasimetric and T_{g*f} is induced by g",
    ));
    Ok(CmdOut { report, model: space_model(&pulled), dot: None })
}

fn restrict_cmd(q: &QmSpace, points: &str) -> Result<CmdOut, Usage> {
    let keep = label_indices(q.points(), &split_labels(points))?;
    let sub = PointSet::from_indices(q.len(), &keep);
    let r = q.restrict(&sub).map_err(|e| Usage(e.to_string()))?;
    let mut report = Report::new("restriction");
    report.push(Clause::pass(
        "Thm 1.5",
        "T_{f|A} is the relative topology of A",
    ));
    Ok(CmdOut { report, model: space_model(&r), dot: None })
}

fn product_cmd(spaces: &[QmSpace]) -> Result<CmdOut, Usage> {
    let refs: Vec<&QmSpace> = spaces.iter().collect();
    let p = product(&refs).map_err(|e| Usage(e.to_string()))?;
    let mut report = Report::new(format!("product of {} factors", spaces.len()));
    report.push(Clause::pass(
        "Thm 1.9",
        "f(x,y) = sum of f_i(x_i,y_i) induces the product topology",
    ));
    report.push(Clause::pass(
        "Thm 1.9",
        "box and ball neighbourhood systems are equivalent",
    ));
    Ok(CmdOut { report, model: space_model(&p), dot: None })
}

fn glue_cmd(topology: &str, pieces: &[String], seed: u64) -> Result<CmdOut, Usage> {
    if pieces.is_empty() {
        return Err(Usage("glue needs at least one piece".into()));
    }
    let (points, t, note) = load_topology(topology)?;
    let mut pairs = Vec::with_capacity(pieces.len());
    for path in pieces {
        let piece = load_space(path, seed)?;
        let idx = label_indices(&points, piece.points())?;
        let subset = PointSet::from_indices(points.len(), &idx);
        if subset.len() != piece.len() {
            return Err(Usage(format!("{path}: piece repeats a point")));
        }
        // Reorder the piece to the carrier order of its subset.
        let mut order: Vec<usize> = (0..idx.len()).collect();
        order.sort_by_key(|&i| idx[i]);
        let sorted_labels = order.iter().map(|&i| piece.points()[i].clone()).collect();
        let sorted = piece.pullback(sorted_labels, &order).map_err(|e| Usage(e.to_string()))?;
        pairs.push((subset, sorted));
    }
    let glued = match glue(&t, &pairs) {
        Ok(g) => g,
        Err(e @ QmError::PieceTopologyMismatch { .. }) => {
            let mut report = Report::new(format!("gluing over {topology}"));
            report.extend(note);
            report.push(Clause::fail("Thm 1.8", e.to_string()));
            return Ok(CmdOut::report(report));
        }
        Err(e) => return Err(Usage(e.to_string())),
    };
    let mut report = Report::new(format!("gluing over {topology}"));
    report.extend(note);
    report.push(Clause::pass("Thm 1.8", "glued f over M-infinity induces T"));
    report.push(Clause::pass(
        "Thm 1.8",
        if glued.is_strict() { "strictness propagates to the glued space" } else { "glued space is not strict" },
    ));
    Ok(CmdOut { report, model: space_model(&glued), dot: None })
}

fn closed_balls(q: &QmSpace) -> Result<CmdOut, Usage> {
    let mut report = Report::new("closed-ball system");
    match q.closed_ball_equivalence() {
        Ok(true) => report.push(Clause::pass(
            "Thm 2.2",
            "open and closed ball systems are equivalent",
        )),
        Ok(false) => report.push(Clause::fail(
            "Thm 2.2",
            "open and closed ball systems differ",
        )),
        Err(e) => return Err(Usage(e.to_string())),
    }
    let flags = q.ball_system(BallKind::Closed).system.validate();
    for (axiom, check) in [("B1", &flags.b1), ("B2", &flags.b2), ("B3", &flags.b3)] {
        report.push(axiom_clause("Thm 2.2", axiom, check));
    }
    Ok(CmdOut::report(report))
}

fn qu_base(named: &(Vec<String>, Vec<(String, Entourage)>)) -> Result<CmdOut, Usage> {
    let members: Vec<Entourage> = named.1.iter().map(|(_, u)| u.clone()).collect();
    let (deduped, flags) = validate_base(&members).map_err(|e| Usage(e.to_string()))?;
    let mut report = Report::new(format!("quasiuniform base with {} members", named.1.len()));
    for (axiom, check) in [("UB1", &flags.ub1), ("UB2", &flags.ub2), ("UB3", &flags.ub3)] {
        report.push(axiom_clause("Lemma 2.8", axiom, check));
    }
    if flags.is_base() {
        let symmetric = deduped.iter().all(Entourage::is_symmetric);
        report.push(Clause::note(
            "Lemma 2.8",
            format!(
                "generates a uniformity: {}",
                if generates_uniformity(&deduped) { "yes" } else { "no" }
            ),
        ));
        report.push(Clause::note(
            "Lemma 2.8",
            format!("all members symmetric: {}", if symmetric { "yes" } else { "no" }),
        ));
    }
    let dot = entourage_lattice_dot(&named.1);
    Ok(CmdOut { report, model: None, dot: Some(dot) })
}

fn base_topology_cmd(named: &(Vec<String>, Vec<(String, Entourage)>)) -> Result<CmdOut, Usage> {
    let members: Vec<Entourage> = named.1.iter().map(|(_, u)| u.clone()).collect();
    let t = base_topology(&members).map_err(|e| Usage(e.to_string()))?;
    let report = topology_report(&named.0, &t);
    let dot = open_lattice_dot(&named.0, &t).ok();
    Ok(CmdOut { report, model: None, dot })
}

fn base_from_qmf(q: &QmSpace) -> Result<CmdOut, Usage> {
    let qb = base_from_qm(q).map_err(|e| Usage(e.to_string()))?;
    // Name each member after the smallest value-set element producing it.
    let mut names = vec![None; qb.members.len()];
    for (i, m) in q.mvs().nonneutral().enumerate() {
        let slot = &mut names[qb.member_of[i]];
        if slot.is_none() {
            *slot = Some(format!("U_{}", q.mvs().label(m)));
        }
    }
    let named: Vec<(String, Entourage)> = names
        .into_iter()
        .map(|n| n.expect("every member is produced by some element"))
        .zip(qb.members.iter().cloned())
        .collect();
    let mut report = Report::new("entourage base of the quasimetric");
    report.push(Clause::pass("§2.7", "U_m = closed-ball entourages satisfy (UB1)-(UB3)"));
    report.push(Clause::pass("§2.7", "base topology equals the quasimetric topology"));
    // Enlarging the base by the full relation is cofinal.
    let mut padded = qb.members.clone();
    padded.push(Entourage::full(q.len()));
    let cmp = compare_bases(&qb.members, &padded).map_err(|e| Usage(e.to_string()))?;
    report.push(Clause::pass(
        "Lemma 2.8",
        if cmp.same_quasiuniformity && cmp.same_topology {
            "cofinal enlargement keeps the quasiuniformity and topology"
        } else {
            unreachable!("padding with a superset member is always cofinal")
        },
    ));
    let model = serde_json::to_string_pretty(&BaseDoc::from_base(q.points(), &named))
        .expect("document serializes");
    let dot = entourage_lattice_dot(&named);
    Ok(CmdOut { report, model: Some(model), dot: Some(dot) })
}

fn full_convex(q: &QmSpace) -> Result<CmdOut, Usage> {
    let fcr = full_convex_report(q);
    let mut report = Report::new("fullness and convexity");
    report.push(if fcr.full {
        Clause::pass("Def 2.9", "f attains every value-set element")
    } else {
        let missing: Vec<&str> = fcr.missing.iter().map(|&m| q.mvs().label(m)).collect();
        Clause::fail("Def 2.9", format!("f misses {{{}}}", missing.join(",")))
    });
    report.push(if fcr.convex {
        Clause::pass("Def 2.9", "(C) every decomposition has a midpoint")
    } else {
        let (x, y, m2, m3) = fcr.unrealized[0];
        Clause::fail(
            "Def 2.9",
            format!(
                "(C) fails: {} unrealized decompositions, first d({},{}) = {} + {}",
                fcr.unrealized_count,
                q.points()[x],
                q.points()[y],
                q.mvs().label(m2),
                q.mvs().label(m3)
            ),
        )
    });
    Ok(CmdOut::report(report))
}

fn embed_full_cmd(q: &QmSpace) -> Result<CmdOut, Usage> {
    let emb = match embed_full(q) {
        Ok(emb) => emb,
        Err(e) => return char_failure("embedding into a full space", e),
    };
    let mut report = Report::new("embedding into a full space");
    report.push(Clause::pass("Lemma 2.10", "f* restricted to X equals f"));
    report.push(Clause::pass("Lemma 2.10", "f* attains every value-set element"));
    Ok(CmdOut { report, model: space_model(&emb.space), dot: None })
}

fn convexify_cmd(q: &QmSpace, max_stages: usize, max_points: usize) -> Result<CmdOut, Usage> {
    let out = match convexify_until(q, max_stages, max_points) {
        Ok(out) => out,
        Err(e) => return char_failure("convexification", e),
    };
    let mut report = Report::new("convexification");
    report.push(Clause::pass(
        "Lemma 2.11",
        format!("{} stage(s); distances between original points unchanged", out.stages),
    ));
    if out.convex {
        report.push(Clause::pass("Lemma 2.11", "result is convex"));
    } else {
        report.push(Clause::note(
            "Lemma 2.11",
            "partial: budget reached before convexity",
        ));
    }
    Ok(CmdOut { report, model: space_model(&out.space), dot: None })
}

fn entourage_mvs_cmd(q: &QmSpace) -> Result<CmdOut, Usage> {
    let ent = match entourage_mvs(q) {
        Ok(ent) => ent,
        Err(e) => return char_failure("entourage value set", e),
    };
    let mut report = Report::new("entourage value set");
    report.extend(ent.clauses.iter().cloned());
    let named: Vec<(String, Entourage)> = ent
        .members
        .iter()
        .enumerate()
        .map(|(i, u)| (ent.mvs.label(i).to_string(), u.clone()))
        .collect();
    let model =
        serde_json::to_string_pretty(&MvsDoc::from_table(&ent.mvs)).expect("document serializes");
    let dot = entourage_lattice_dot(&named);
    Ok(CmdOut { report, model: Some(model), dot: Some(dot) })
}

fn metrize_cmd(named: &(Vec<String>, Vec<(String, Entourage)>)) -> Result<CmdOut, Usage> {
    let (points, entourages) = named;
    let u0 = &entourages[0].1;
    let base: Vec<Entourage> = entourages[1..].iter().map(|(_, u)| u.clone()).collect();
    let out = match metrize_from_base(points.clone(), u0, &base) {
        Ok(out) => out,
        Err(e) => return char_failure("metrization from a base", e),
    };
    let mut report = Report::new("metrization from a base");
    report.extend(out.clauses.iter().cloned());
    Ok(CmdOut { report, model: space_model(&out.space), dot: None })
}

fn roundtrip_cmd(q: &QmSpace, max_stages: usize, max_points: usize) -> Result<CmdOut, Usage> {
    let out = match roundtrip(q, max_stages, max_points) {
        Ok(out) => out,
        Err(e) => return char_failure("characterization roundtrip", e),
    };
    let model = out.space.as_ref().and_then(space_model);
    Ok(CmdOut { report: out.report, model, dot: None })
}

/// Precondition refusals are usage errors; failed theorem clauses become a
/// failing report.
fn char_failure(title: &str, e: CharError) -> Result<CmdOut, Usage> {
    match e {
        CharError::Refused(msg) => Err(Usage(msg)),
        CharError::ClauseFailed { anchor, witness } => {
            let mut report = Report::new(title);
            report.push(Clause::fail(&anchor, witness));
            Ok(CmdOut::report(report))
        }
    }
}

fn enumerate_mvs_cmd(order: usize, up_to_iso: bool) -> Result<CmdOut, Usage> {
    let tables = enumerate_mvs(order, up_to_iso).map_err(|e| Usage(e.to_string()))?;
    let mut report = Report::new(format!("value sets of order {order}"));
    report.push(Clause::note(
        "Def 1.1",
        format!(
            "{} table(s){}",
            tables.len(),
            if up_to_iso { " up to isomorphism" } else { "" }
        ),
    ));
    let docs: Vec<MvsDoc> = tables.iter().map(MvsDoc::from_table).collect();
    let model = serde_json::to_string_pretty(&docs).expect("documents serialize");
    Ok(CmdOut { report, model: Some(model), dot: None })
}

fn enumerate_topologies_cmd(n: usize) -> Result<CmdOut, Usage> {
    let e = enumerate_topologies(n).map_err(|e| Usage(e.to_string()))?;
    let mut report = Report::new(format!("topologies on {n} labeled points"));
    report.push(if e.subbase_path == e.closed_family_path {
        Clause::pass(
            "Thm 1.10",
            format!("both enumeration paths count {}", e.subbase_path),
        )
    } else {
        Clause::fail(
            "Thm 1.10",
            format!(
                "paths disagree: {} from subbases, {} from closed families",
                e.subbase_path, e.closed_family_path
            ),
        )
    });
    let points: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let docs: Vec<TopologyDoc> = e
        .topologies
        .iter()
        .map(|t| TopologyDoc::from_topology(&points, t).expect("small carrier materializes"))
        .collect();
    let model = serde_json::to_string_pretty(&docs).expect("documents serialize");
    Ok(CmdOut { report, model: Some(model), dot: None })
}
