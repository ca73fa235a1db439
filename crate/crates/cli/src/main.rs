use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kd_uncd::diagram::{enumerate_diagram, point_exists, witness_state, DiagramError, Engine, PointStatus, SearchMode};
use kd_uncd::kd::{
    classify_state, half_support_criterion, predict_classicality_dft, support_profile, KdError, StateVector,
    TransitionMatrix, Verdict,
};
use kd_uncd_cli::plot::render_svg;
use kd_uncd_cli::store::DiagramStore;
use kd_uncd_cli::suites::{run_suite, SuiteConfig, SuiteId};
use serde::Serialize;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ABORT: u8 = 3;

#[derive(Parser)]
#[command(name = "kduncd", version, about = "Kirkwood-Dirac classicality and support uncertainty diagrams for the DFT")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the uncertainty diagram of the d-dimensional DFT.
    Diagram(DiagramArgs),
    /// Report supports and KD classicality of a state file.
    Classify(ClassifyArgs),
    /// Check a prediction or property suite over a range of dimensions.
    Verify(VerifyArgs),
    /// Write a state realizing a given support pair.
    Witness(WitnessArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Exact,
    Numeric,
    Both,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Exact => Engine::Exact,
            EngineArg::Numeric => Engine::Numeric,
            EngineArg::Both => Engine::Both,
        }
    }
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Rank engine; defaults to exact up to d = 9 and numeric above.
    #[arg(long, value_enum)]
    engine: Option<EngineArg>,
    /// Only search row and column sets containing index 0.
    #[arg(long)]
    sym_reduce: bool,
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    rank_tol: f64,
    /// Give up on a point after this many rank evaluations.
    #[arg(long)]
    max_rank_calls: Option<u64>,
    /// Directory for reusable diagram results.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl SearchArgs {
    fn mode(&self, d: usize) -> SearchMode {
        let mut mode = match self.engine {
            Some(e) => SearchMode::new(e.into()),
            None => SearchMode::default_for(d),
        };
        mode.sym_reduce = self.sym_reduce;
        mode.rank_tol = self.rank_tol;
        mode.max_rank_calls = self.max_rank_calls;
        mode
    }

    fn store(&self) -> DiagramStore {
        DiagramStore::new(self.mode(1), self.engine.is_some(), self.cache_dir.clone())
    }
}

#[derive(Args)]
struct DiagramArgs {
    #[arg(long)]
    d: usize,
    #[command(flatten)]
    search: SearchArgs,
    /// Accepted for a uniform interface; enumeration is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Diagram JSON path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Exit 0 even when some points stay unresolved.
    #[arg(long)]
    allow_partial: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    /// State JSON: {"d": n, "amps_a": [[re, im], ...]}.
    state: PathBuf,
    /// Expected dimension.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    eps_support: f64,
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    eps_classical: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of T1, C1, T2, T3, T4, T5, L3.
    suite: SuiteId,
    /// Dimension or inclusive range A..B.
    #[arg(long, default_value = "2..12", value_parser = kd_uncd_cli::parse_dims)]
    d: std::ops::RangeInclusive<usize>,
    /// Witness states per dimension (T4).
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Random unbiased pairs per dimension (T5).
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    /// States per unbiased pair (T5).
    #[arg(long, default_value_t = 100)]
    states: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    eps_support: f64,
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    eps_classical: f64,
    #[command(flatten)]
    search: SearchArgs,
    /// Also write the report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    na: usize,
    #[arg(long)]
    nb: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    eps_support: f64,
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    eps_classical: f64,
    #[command(flatten)]
    search: SearchArgs,
    /// State JSON path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive tolerance")),
        Err(e) => Err(e.to_string()),
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        let code = match e {
            DiagramError::TooLarge { .. } | DiagramError::Indeterminate => EXIT_ABORT,
            DiagramError::NotPresent { .. } | DiagramError::OutOfLattice { .. } => EXIT_USAGE,
            _ => EXIT_MISMATCH,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<KdError> for Failure {
    fn from(e: KdError) -> Self {
        Failure::new(EXIT_USAGE, e.to_string())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::new(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dft(d: usize) -> Result<TransitionMatrix, Failure> {
    Ok(TransitionMatrix::dft(d)?)
}

fn cmd_diagram(args: DiagramArgs) -> Result<(), Failure> {
    let u = dft(args.d)?;
    let mode = args.search.mode(args.d);
    let started = Instant::now();
    let diag = enumerate_diagram(&u, &mode)?;
    eprintln!(
        "d = {}: {} present, {} holes, {} unknown; {} rank evaluations in {:.2?}",
        diag.d,
        diag.present().len(),
        diag.holes().len(),
        diag.with_status(PointStatus::Unknown).len(),
        diag.stats.rank_calls,
        started.elapsed()
    );
    let record = diag.to_record();
    emit(args.out.as_deref(), &record.to_json())?;
    if let Some(p) = &args.csv {
        write_file(p, &record.to_csv())?;
    }
    if let Some(p) = &args.svg {
        write_file(p, &render_svg(&diag))?;
    }
    if diag.stats.disagreements > 0 {
        return Err(Failure::new(
            EXIT_MISMATCH,
            format!("exact and numeric ranks disagreed {} times", diag.stats.disagreements),
        ));
    }
    if diag.has_unknown() && !args.allow_partial {
        return Err(Failure::new(EXIT_ABORT, "search budget exhausted; some points are unknown"));
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassifyReport {
    d: usize,
    n_a: usize,
    n_b: usize,
    product: usize,
    verdict: Verdict,
    witness: Option<kd_uncd::kd::WitnessCell>,
    theorem4_prediction: Verdict,
    theorem4_agrees: bool,
    /// "nonclassical" when the half-support criterion applies, else "undetermined".
    theorem5_flag: &'static str,
}

fn cmd_classify(args: ClassifyArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.state)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", args.state.display())))?;
    let (psi, warning) = StateVector::from_json(&text)?;
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
    if let Some(d) = args.d {
        if d != psi.dim() {
            return Err(KdError::DimensionMismatch { expected: d, got: psi.dim() }.into());
        }
    }
    let u = dft(psi.dim())?;
    let prof = support_profile(&psi, &u, args.eps_support)?;
    let class = classify_state(&psi, &u, args.eps_classical)?;
    let prediction = predict_classicality_dft(&prof)?;
    let flag = match half_support_criterion(&prof, &u) {
        Ok(true) => "nonclassical",
        _ => "undetermined",
    };
    let report = ClassifyReport {
        d: prof.d,
        n_a: prof.n_a,
        n_b: prof.n_b,
        product: prof.product(),
        verdict: class.verdict,
        witness: class.witness,
        theorem4_prediction: prediction,
        theorem4_agrees: prediction == class.verdict,
        theorem5_flag: flag,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let cfg = SuiteConfig {
        samples: args.samples,
        mub_pairs: args.pairs,
        states_per_pair: args.states,
        seed: args.seed,
        eps_support: args.eps_support,
        eps_classical: args.eps_classical,
        ..SuiteConfig::default()
    };
    let mut store = args.search.store();
    let report = run_suite(args.suite, args.d.clone(), &cfg, &mut store).map_err(|e| {
        let code = match e {
            kd_uncd_cli::suites::SuiteError::Unknown { .. } => EXIT_ABORT,
            kd_uncd_cli::suites::SuiteError::Diagram(DiagramError::TooLarge { .. }) => EXIT_ABORT,
            _ => EXIT_MISMATCH,
        };
        Failure::new(code, e.to_string())
    })?;
    print!("{}", report.table());
    if let Some(p) = &args.out {
        write_file(p, &serde_json::to_string_pretty(&report).expect("report serializes"))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_MISMATCH, format!("{} failed", args.suite)))
    }
}

fn cmd_witness(args: WitnessArgs) -> Result<(), Failure> {
    let u = dft(args.d)?;
    let point = point_exists(&u, args.na, args.nb, &args.search.mode(args.d))?;
    match point.status {
        PointStatus::Present => {}
        PointStatus::Hole => {
            return Err(Failure::new(EXIT_USAGE, format!("({}, {}) is a hole", args.na, args.nb)));
        }
        PointStatus::Unknown => {
            return Err(Failure::new(EXIT_ABORT, format!("({}, {}) is unresolved", args.na, args.nb)));
        }
    }
    let psi = witness_state(&u, &point, args.seed, args.eps_support)?;
    emit(args.out.as_deref(), &(psi.to_json() + "\n"))?;
    let class = classify_state(&psi, &u, args.eps_classical)?;
    eprintln!("({}, {}) witness: {:?}", args.na, args.nb, class.verdict);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Diagram(a) => cmd_diagram(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Witness(a) => cmd_witness(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
