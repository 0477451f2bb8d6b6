use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use univmetric::embed::{certify, default_depth, embed_space, EmbeddingArtifact};
use univmetric::metricspace::{generate, params, read_csv, read_structured, write_csv, write_structured, FiniteMetricSpace, SpaceKind};
use univmetric::numerics::{parse_number, Dyadic, Rational};
use univmetric::spacefilling::{curve_point, curve_point_exact, preimage, CubePoint};
use univmetric::universal::{universal_dist, RealParam};
use univmetric::verify::{self, CheckReport};

mod error;

use error::CliError;

const DEFAULT_TOL: &str = "1e-9";

#[derive(Parser)]
#[command(name = "univmetric", version, about = "Embed finite metric spaces isometrically into a metric on the real line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embed a finite metric space and certify the result.
    Embed(EmbedArgs),
    /// Evaluate the glued metric between two reals.
    #[command(allow_negative_numbers = true)]
    Dist {
        x: String,
        y: String,
        #[arg(long, default_value = DEFAULT_TOL)]
        tol: String,
    },
    /// Inspect the space-filling curve of dimension N.
    Curve {
        n: u32,
        #[command(subcommand)]
        action: CurveAction,
    },
    /// Run property suites; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Write a generated metric space.
    Gen(GenArgs),
}

#[derive(Subcommand)]
enum CurveAction {
    /// Curve value at parameter T (exact for dyadic T, a box otherwise).
    Map {
        t: String,
        #[arg(long, default_value_t = 8)]
        depth: u64,
    },
    /// Dyadic parameter whose curve value is near the comma-separated point.
    Invert {
        coords: String,
        #[arg(long, default_value_t = 8)]
        depth: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Structured,
    Csv,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    input: PathBuf,
    /// Input format; guessed from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Curve depth; defaults to the smallest depth with 4n·2^-k ≤ 1e-6.
    #[arg(long)]
    depth: Option<u64>,
    #[arg(long, default_value = DEFAULT_TOL)]
    tol: String,
    /// Artifact path; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Curve,
    Axioms,
    Isometry,
    Modulus,
    All,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, env = "UNIVMETRIC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = verify::CURVE_MAX_DIM)]
    nmax: u32,
    #[arg(long, default_value_t = verify::CURVE_MAX_DEPTH)]
    kmax: u64,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values = ["-2", "5"])]
    range: Vec<String>,
    #[arg(long, default_value = DEFAULT_TOL)]
    tol: String,
    #[arg(long, default_value_t = 100)]
    spaces: u64,
    #[arg(long, default_value_t = 6)]
    pmax: usize,
    /// Fixed embedding depth for the isometry suite.
    #[arg(long)]
    depth: Option<u64>,
    /// Dimension for the modulus suite; 1 through 3 when omitted.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, default_value_t = 3)]
    k: u64,
    /// Also write the full reports as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    points: usize,
    #[arg(long, env = "UNIVMETRIC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "structured")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn number(text: &str) -> Result<Rational, CliError> {
    parse_number(text).map_err(|e| CliError::new("number", e))
}

fn tolerance(text: &str) -> Result<Rational, CliError> {
    let tol = number(text)?;
    if !tol.is_positive() {
        return Err(CliError::new("tolerance", format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::new("io", format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

fn read_space(path: &Path, format: Option<Format>) -> Result<FiniteMetricSpace, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    let format = format.unwrap_or(match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Format::Csv,
        _ => Format::Structured,
    });
    let parsed = match format {
        Format::Structured => read_structured(&text),
        Format::Csv => read_csv(&text),
    };
    parsed.map_err(|e| CliError::new(e.kind(), e))
}

#[derive(Serialize)]
struct TrivialArtifact<'a> {
    trivial: bool,
    labels: &'a [String],
    points: [&'static str; 1],
}

fn cmd_embed(args: &EmbedArgs) -> Result<bool, CliError> {
    let x = read_space(&args.input, args.format)?;
    let tol = tolerance(&args.tol)?;
    if x.len() == 1 {
        println!("trivial embedding: the single point maps to 0");
        emit(args.out.as_deref(), &to_json(&TrivialArtifact { trivial: true, labels: x.labels(), points: ["0"] }))?;
        return Ok(true);
    }
    let pr = params(&x).map_err(|e| CliError::new(e.kind(), e))?;
    let depth = args.depth.unwrap_or_else(|| default_depth(&pr));
    let result = embed_space(&x, depth).map_err(|e| CliError::new(e.kind(), e))?;
    let cert = certify(&x, &result, &tol).map_err(|e| CliError::new(e.kind(), e))?;
    let pass = cert.pass;
    let summary = format!(
        "n = {}, depth = {}, delta = {}, bound 4*delta = {}, points = {}, worst deviation = {}{}",
        pr.n,
        depth,
        result.delta,
        result.deviation_bound(),
        result.points.len(),
        cert.worst_deviation,
        cert.worst_pair.map(|(i, j)| format!(" at ({}, {})", x.labels()[i], x.labels()[j])).unwrap_or_default()
    );
    if !pr.floor_rule.agrees(&pr) {
        eprintln!(
            "note: floor-based parameters would give n = {} (covers diameter: {}, 1/n-dispersed: {}); using n = {}",
            pr.floor_rule.n, pr.floor_rule.covers_diameter, pr.floor_rule.dispersed, pr.n
        );
    }
    emit(args.out.as_deref(), &to_json(&EmbeddingArtifact::new(&result, cert)))?;
    println!("{summary}");
    println!("certificate: {}", if pass { "pass" } else { "FAIL" });
    Ok(pass)
}

fn cmd_dist(x: &str, y: &str, tol: &str) -> Result<bool, CliError> {
    let x = RealParam::new(number(x)?);
    let y = RealParam::new(number(y)?);
    let tol = tolerance(tol)?;
    let d = universal_dist(&x, &y, &tol).map_err(|e| CliError::new("distance", e))?;
    if d.is_exact() {
        println!("exact {}", d.lo());
    } else {
        println!("{d} width {}", d.width());
    }
    Ok(true)
}

fn cmd_curve(n: u32, action: &CurveAction) -> Result<bool, CliError> {
    let curve_err = |e: univmetric::spacefilling::CurveError| CliError::new("curve", e);
    match action {
        CurveAction::Map { t, depth } => {
            let t = number(t)?;
            match Dyadic::from_rational(&t) {
                Some(dy) => println!("{}", curve_point_exact(n, &dy).map_err(curve_err)?),
                None => println!("{}", curve_point(n, &t, *depth).map_err(curve_err)?),
            }
        }
        CurveAction::Invert { coords, depth } => {
            let coords = coords.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
            let y = CubePoint::new(coords).map_err(curve_err)?;
            let t = preimage(n, &y, *depth).map_err(curve_err)?;
            let residual = curve_point_exact(n, &t).map_err(curve_err)?.sup_distance(&y);
            println!("t = {t}, residual {residual}, bound {}", Rational::scaled_pow2(n, *depth));
        }
    }
    Ok(true)
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, CliError> {
    let tol = tolerance(&args.tol)?;
    let lo = number(&args.range[0])?;
    let hi = number(&args.range[1])?;
    let verr = |e: verify::VerifyError| {
        let kind = match e {
            verify::VerifyError::ScaleExceeded { .. } => "scale-exceeded",
            verify::VerifyError::InvalidArgument(_) => "invalid-argument",
        };
        CliError::new(kind, e)
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    let wants = |s: Suite| matches!(args.suite, Suite::All) || std::mem::discriminant(&args.suite) == std::mem::discriminant(&s);
    if wants(Suite::Curve) {
        reports.push(verify::check_curve(args.nmax, args.kmax).map_err(verr)?);
    }
    if wants(Suite::Axioms) {
        reports.push(verify::check_axioms(args.samples, &lo, &hi, &tol, args.seed).map_err(verr)?);
    }
    if wants(Suite::Isometry) {
        reports.push(verify::check_isometry(args.spaces, args.pmax, args.depth, &tol, args.seed).map_err(verr)?);
    }
    if wants(Suite::Modulus) {
        let dims = match args.n {
            Some(n) => vec![n],
            None => vec![1, 2, 3],
        };
        for n in dims {
            let mut r = verify::check_modulus(n, args.k, args.samples.min(1000), args.seed).map_err(verr)?;
            r.name = format!("modulus n={n} k={}", args.k);
            reports.push(r);
        }
    }
    for r in &reports {
        println!("{}", r.one_line());
        for w in r.failures.iter().take(5) {
            println!("  witness {}: inputs {:?}, expected {}, got {}", w.check, w.inputs, w.expected, w.got);
        }
    }
    if let Some(path) = &args.report {
        emit(Some(path), &to_json(&reports))?;
    }
    Ok(reports.iter().all(|r| r.pass))
}

fn cmd_gen(args: &GenArgs) -> Result<bool, CliError> {
    let kind: SpaceKind = args.kind.parse().map_err(|e: univmetric::metricspace::MetricError| CliError::new(e.kind(), e))?;
    if args.points < 2 {
        return Err(CliError::new("points", "generated spaces need at least two points"));
    }
    let x = generate(kind, args.points, args.seed);
    let text = match args.format {
        Format::Structured => write_structured(&x),
        Format::Csv => write_csv(&x),
    };
    emit(args.out.as_deref(), text.trim_end())?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Embed(args) => cmd_embed(args),
        Command::Dist { x, y, tol } => cmd_dist(x, y, tol),
        Command::Curve { n, action } => cmd_curve(*n, action),
        Command::Verify(args) => cmd_verify(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}
