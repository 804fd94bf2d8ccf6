//! Command dispatch for the `seqwalk` binary. Every command returns its
//! output as a string plus an exit code, so tests can drive it in-process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use seqwalk_core::algebra::{AlgebraError, TruncatedAlgebra};
use seqwalk_core::detector::{
    detect_c_sequential_walks, detect_intertwined_double_zero, detect_sequential_pairs, detect_sequential_walks, relation_extension_quiver, DetectorConfig, DetectorError,
};
use seqwalk_core::format::{self, ParseError};
use seqwalk_core::homology::{
    default_bound, inj_dim, proj_dim, shod_obstruction_report, HomDim, HomologyError, ModuleSpec, ShodReport,
};
use seqwalk_core::reduction::{standard_reduction, ReductionError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_ADMISSIBLE: i32 = 3;
pub const EXIT_BOUND_EXCEEDED: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "seqwalk", version, about = "Sequential walks and homological dimensions of bound quiver algebras")]
pub struct Cli {
    /// Worker threads for the detector; output order does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Also print the quiver in Graphviz format.
    #[arg(long, global = true)]
    pub dot: bool,
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the algebra, verify admissibility, print dimensions and top relations.
    Check { file: PathBuf },
    /// List sequential walks, or one of the related families.
    Detect {
        file: PathBuf,
        #[command(flatten)]
        bound: WalkBound,
        #[command(flatten)]
        mode: DetectMode,
    },
    /// Standard reduction of one certificate: the reduced bound quiver and walk.
    Reduce {
        file: PathBuf,
        /// Index into the list printed by `detect`.
        #[arg(long)]
        cert: usize,
        #[command(flatten)]
        bound: WalkBound,
    },
    /// Dimension vector, projective and injective dimension of a module.
    Dims {
        file: PathBuf,
        /// simple:<point>, proj:<point>, inj:<point> or string:<walk>.
        #[arg(long)]
        module: ModuleSpec,
        /// Syzygies to compute before giving up; defaults to the algebra's dimension.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Detect, reduce and verify every certificate; gives the verdict.
    Report {
        file: PathBuf,
        #[command(flatten)]
        bound: WalkBound,
    },
}

#[derive(Debug, Args)]
pub struct WalkBound {
    /// Bound on the letters of the middle part; defaults to max(8, 2 * arrows).
    #[arg(long = "max-walk")]
    pub max_walk: Option<usize>,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct DetectMode {
    /// Sequential pairs of zero relations.
    #[arg(long)]
    pub pairs: bool,
    /// Intertwined double zeros.
    #[arg(long)]
    pub intertwined: bool,
    /// Walks in the relation-extension quiver.
    #[arg(long)]
    pub csw: bool,
}

/// Output and exit code of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Parse(ParseError),
    NotAdmissible(String),
    Internal(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Io(_) | Failure::Other(_) => EXIT_OTHER,
            Failure::Parse(_) => EXIT_PARSE,
            Failure::NotAdmissible(_) => EXIT_NOT_ADMISSIBLE,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(m) | Failure::NotAdmissible(m) | Failure::Internal(m) | Failure::Other(m) => m.clone(),
            Failure::Parse(e) => format!("parse error: {e}"),
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::NotAdmissible(_) => Failure::NotAdmissible(e.to_string()),
            e => Failure::Other(e.to_string()),
        }
    }
}

impl From<DetectorError> for Failure {
    fn from(e: DetectorError) -> Self {
        match e {
            DetectorError::Algebra(e) => e.into(),
            e => Failure::Other(e.to_string()),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Algebra(e) => e.into(),
            e => Failure::Other(e.to_string()),
        }
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Algebra(e) => e.into(),
            HomologyError::Detector(e) => e.into(),
            HomologyError::Reduction(e) => e.into(),
            HomologyError::InternalInconsistency(_) => Failure::Internal(e.to_string()),
            e => Failure::Other(e.to_string()),
        }
    }
}

/// Output of a successful command before `--dot` and formatting.
struct Done {
    text: String,
    json: Value,
    /// Quiver to draw with `--dot`: name and DOT source.
    dot: Option<String>,
    code: i32,
}

fn load(path: &PathBuf) -> Result<TruncatedAlgebra, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let parsed = format::parse(&text).map_err(Failure::Parse)?;
    Ok(parsed.build()?)
}

fn detector_config(a: &TruncatedAlgebra, bound: &WalkBound, threads: usize) -> DetectorConfig {
    let cfg = DetectorConfig { threads: threads.max(1), ..DetectorConfig::for_algebra(a) };
    match bound.max_walk {
        Some(n) => cfg.with_max_walk_len(n),
        None => cfg,
    }
}

fn own_dot(a: &TruncatedAlgebra) -> Option<String> {
    Some(format::dot(a.quiver(), &a.bound().name))
}

fn check(a: &TruncatedAlgebra) -> Result<Done, Failure> {
    let q = a.quiver();
    let tops: Vec<String> = a.top_relations()?.iter().map(|r| r.display(q)).collect();
    let n = a.num_points();
    let cartan: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| a.block_dim(x, y)).collect()).collect();
    let mut text = String::new();
    writeln!(text, "algebra {}", a.bound().name).unwrap();
    writeln!(text, "points {}, arrows {}, truncation {}, admissible", n, q.num_arrows(), a.truncation()).unwrap();
    writeln!(text, "dimension {}", a.dim()).unwrap();
    for x in 0..n {
        let row: Vec<String> = cartan[x].iter().map(usize::to_string).collect();
        writeln!(text, "  e{} A: {}", q.point_name(x), row.join(" ")).unwrap();
    }
    writeln!(text, "top relations ({}):", tops.len()).unwrap();
    for r in &tops {
        writeln!(text, "  {r}").unwrap();
    }
    let json = json!({
        "algebra": a.bound().name,
        "points": q.points(),
        "arrows": q.num_arrows(),
        "truncation": a.truncation(),
        "admissible": a.verify_admissible(),
        "dim": a.dim(),
        "block_dims": cartan,
        "top_relations": tops,
    });
    Ok(Done { text, json, dot: own_dot(a), code: EXIT_OK })
}

fn detect(a: &TruncatedAlgebra, cfg: &DetectorConfig, mode: &DetectMode) -> Result<Done, Failure> {
    let q = a.quiver();
    let (kind, lines, items): (&str, Vec<String>, Vec<Value>) = if mode.intertwined {
        let found = detect_intertwined_double_zero(a, cfg)?;
        let lines = found.iter().map(|d| format!("{}  band {}", d.full_walk.display(q), d.band.display(q))).collect();
        let items = found
            .iter()
            .map(|d| {
                json!({
                    "walk": d.full_walk.tokens(q),
                    "band": d.band.tokens(q),
                    "rho1": a.top_relations().map(|t| t[d.rho1_index].display(q)).unwrap_or_default(),
                    "rho2": a.top_relations().map(|t| t[d.rho2_index].display(q)).unwrap_or_default(),
                    "orientation": d.orientation,
                })
            })
            .collect();
        ("intertwined_double_zeros", lines, items)
    } else if mode.csw {
        let found = detect_c_sequential_walks(a, cfg)?;
        let tops = a.top_relations()?;
        let ext = relation_extension_quiver(a)?.quiver;
        let lines = found.iter().map(|c| format!("{}  rho {}  sigma {}", c.full_walk.display(&ext), tops[c.rho_index].display(q), tops[c.sigma_index].display(q))).collect();
        let items = found
            .iter()
            .map(|c| {
                json!({
                    "walk": c.full_walk.tokens(&ext),
                    "rho": tops[c.rho_index].display(q),
                    "sigma": tops[c.sigma_index].display(q),
                    "orientation": c.orientation,
                })
            })
            .collect();
        ("c_sequential_walks", lines, items)
    } else {
        let (kind, found) = if mode.pairs { ("sequential_pairs", detect_sequential_pairs(a, cfg)?) } else { ("sequential_walks", detect_sequential_walks(a, cfg)?) };
        let lines = found.iter().map(|c| format!("{}  rho {}  sigma {}  {}", c.display(q), c.rho.display(q), c.sigma.display(q), c.orientation)).collect();
        let items = found.iter().map(|c| serde_json::to_value(c.to_json(q)).expect("certificate serializes")).collect();
        (kind, lines, items)
    };
    let mut text = format!("{} {} (max walk length {}): {}\n", a.bound().name, kind.replace('_', " "), cfg.max_walk_len, lines.len());
    for (i, l) in lines.iter().enumerate() {
        writeln!(text, "{i:>3}  {l}").unwrap();
    }
    let json = json!({ "algebra": a.bound().name, "kind": kind, "max_walk_len": cfg.max_walk_len, "found": items });
    Ok(Done { text, json, dot: own_dot(a), code: EXIT_OK })
}

fn reduce(a: &TruncatedAlgebra, cfg: &DetectorConfig, index: usize) -> Result<Done, Failure> {
    let q = a.quiver();
    let certs = detect_sequential_walks(a, cfg)?;
    let cert = certs.get(index).ok_or_else(|| Failure::Other(format!("no certificate {index}: {} found at max walk length {}", certs.len(), cfg.max_walk_len)))?;
    let r = standard_reduction(a, cert)?;
    let bq = &r.presented.quiver;
    let w2 = r.w2.as_ref().map(|w| w.tokens(bq)).unwrap_or_default();
    let retained: Vec<&str> = r.retained.iter().map(|&x| q.point_name(x)).collect();
    let cut: Vec<&str> = r.cut.iter().map(|&c| r.eae_quiver.quiver.arrow(c).name.as_str()).collect();
    let presented = format::emit(&r.presented);
    let mut text = String::new();
    writeln!(text, "# walk {}", cert.full_walk.display(q)).unwrap();
    writeln!(text, "# retained points {}", retained.join(" ")).unwrap();
    writeln!(text, "# cut {}", if cut.is_empty() { "(none)".to_string() } else { cut.join(" ") }).unwrap();
    match &r.w2 {
        Some(w) => writeln!(text, "# reduced walk {}", w.display(bq)).unwrap(),
        None => writeln!(text, "# reduced walk is the point {}", q.point_name(cert.u(q).target())).unwrap(),
    }
    text.push_str(&presented);
    let json = json!({
        "certificate": cert.to_json(q),
        "walk": cert.full_walk.tokens(q),
        "retained": retained,
        "cut": cut,
        "reduced": presented,
        "reduced_dim": r.reduced.dim(),
        "reduced_walk": w2,
    });
    Ok(Done { text, json, dot: Some(format::dot(bq, &r.presented.name)), code: EXIT_OK })
}

fn dims(a: &TruncatedAlgebra, spec: &ModuleSpec, bound: Option<usize>) -> Result<Done, Failure> {
    let q = a.quiver();
    let m = spec.build(a)?;
    let bound = bound.unwrap_or_else(|| default_bound(a));
    let pd = proj_dim(a, &m, bound)?;
    let id = inj_dim(a, &m, bound)?;
    let named = |v: &[usize]| -> Vec<(String, usize)> { v.iter().enumerate().filter(|(_, &d)| d > 0).map(|(x, &d)| (q.point_name(x).to_string(), d)).collect() };
    let show = |v: &[(String, usize)]| v.iter().map(|(x, d)| format!("{x}:{d}")).collect::<Vec<_>>().join(" ");
    let (dv, top, soc) = (named(m.dims()), named(&m.top_dims()), named(&m.socle_dims()));
    let mut text = String::new();
    writeln!(text, "module {spec} over {}", a.bound().name).unwrap();
    writeln!(text, "dimension vector {}", show(&dv)).unwrap();
    writeln!(text, "top {}", show(&top)).unwrap();
    writeln!(text, "socle {}", show(&soc)).unwrap();
    writeln!(text, "projective dimension {pd}").unwrap();
    writeln!(text, "injective dimension {id}").unwrap();
    let exceeded = matches!(pd, HomDim::BoundExceeded(_)) || matches!(id, HomDim::BoundExceeded(_));
    if exceeded {
        writeln!(text, "syzygy bound {bound} exceeded").unwrap();
    }
    let json = json!({
        "algebra": a.bound().name,
        "module": spec.to_string(),
        "dims": dv,
        "top": top,
        "socle": soc,
        "pd": pd,
        "id": id,
        "syzygy_bound": bound,
    });
    Ok(Done { text, json, dot: own_dot(a), code: if exceeded { EXIT_BOUND_EXCEEDED } else { EXIT_OK } })
}

fn report_text(r: &ShodReport) -> String {
    let mut text = String::new();
    writeln!(text, "algebra {} (dimension {}, global dimension {})", r.algebra, r.dim, r.global_dimension).unwrap();
    writeln!(text, "top relations: {}", r.top_relations.join(", ")).unwrap();
    writeln!(text, "bounds: walk length {}, syzygies {}", r.max_walk_len, r.syzygy_bound).unwrap();
    for w in &r.witnesses {
        writeln!(text, "witness {}", w.walk).unwrap();
        writeln!(text, "  retained {}; cut {}", w.retained.join(" "), if w.cut.is_empty() { "(none)".into() } else { w.cut.join(" ") }).unwrap();
        writeln!(text, "  reduced algebra: dimension {}, arrows {}, relations {}", w.reduced_dim, w.reduced_arrows.len(), w.reduced_relations.join(", ")).unwrap();
        let dims: Vec<String> = w.module_dims.iter().map(|(x, d)| format!("{x}:{d}")).collect();
        writeln!(text, "  reduced walk {}; module {}; pd {}, id {}", if w.reduced_walk.is_empty() { "(point)".into() } else { w.reduced_walk.join(" ") }, dims.join(" "), w.pd, w.id).unwrap();
    }
    for s in &r.skipped {
        writeln!(text, "skipped {}: {}", s.walk, s.reason).unwrap();
    }
    writeln!(text, "verdict {}", r.verdict).unwrap();
    text
}

fn report(a: &TruncatedAlgebra, cfg: &DetectorConfig) -> Result<Done, Failure> {
    let r = shod_obstruction_report(a, cfg)?;
    Ok(Done { text: report_text(&r), json: serde_json::to_value(&r).expect("report serializes"), dot: own_dot(a), code: EXIT_OK })
}

fn dispatch(cli: &Cli) -> Result<Done, Failure> {
    match &cli.command {
        Command::Check { file } => check(&load(file)?),
        Command::Detect { file, bound, mode } => {
            let a = load(file)?;
            detect(&a, &detector_config(&a, bound, cli.threads), mode)
        }
        Command::Reduce { file, cert, bound } => {
            let a = load(file)?;
            reduce(&a, &detector_config(&a, bound, cli.threads), *cert)
        }
        Command::Dims { file, module, bound } => dims(&load(file)?, module, *bound),
        Command::Report { file, bound } => {
            let a = load(file)?;
            report(&a, &detector_config(&a, bound, cli.threads))
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(done) => {
            let stdout = if cli.json {
                let mut json = done.json;
                if let (true, Some(d), Value::Object(map)) = (cli.dot, &done.dot, &mut json) {
                    map.insert("dot".into(), Value::String(d.clone()));
                }
                format!("{}\n", serde_json::to_string_pretty(&json).expect("json renders"))
            } else {
                let mut text = done.text;
                if let (true, Some(d)) = (cli.dot, &done.dot) {
                    text.push_str(d);
                }
                text
            };
            Outcome { code: done.code, stdout, stderr: String::new() }
        }
        Err(f) => {
            let stdout = if cli.json { format!("{}\n", json!({ "error": f.message(), "exit_code": f.code() })) } else { String::new() };
            Outcome { code: f.code(), stdout, stderr: format!("seqwalk: {}\n", f.message()) }
        }
    }
}

/// Parses arguments and runs; argument errors exit with clap's own code.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_OTHER } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            }
        }
    }
}
