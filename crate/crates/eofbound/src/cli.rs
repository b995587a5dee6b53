//! Batch command-line front end.
//!
//! Three subcommands: `bound` emits one lower-bound report per input
//! state, `sandwich` additionally runs the convex-roof upper estimator,
//! and `gen` writes state files for the built-in families. Inputs come
//! either from state files or from a `--gen FAMILY:k=v,…` spec; outputs
//! are JSON Lines or CSV with a fixed header. Malformed states in a batch
//! produce error rows and a nonzero final exit code instead of aborting
//! the run.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bound::{eof_lower_bound_with_tol, BoundReport};
use crate::error::{Error, Result};
use crate::maps::DEFAULT_VERDICT_TOL;
use crate::oracles::{sandwich, SandwichParams, SandwichResult, DEFAULT_ESTIMATOR_ITERATIONS};
use crate::statefile::{self, LoadedState, StateKind};
use crate::states::{
    make_horodecki_3x3_bes, make_isotropic, make_maximally_entangled, make_werner_2x2,
    random_density_matrix, random_product_state, random_pure_state, BipartiteDims,
};

/// Everything went through.
pub const EXIT_OK: i32 = 0;
/// At least one state failed to parse or violated an invariant.
pub const EXIT_INPUT_ERROR: i32 = 2;
/// An internal numeric routine (eigen/SVD iteration) failed.
pub const EXIT_NUMERIC_ERROR: i32 = 3;

/// Fixed, versioned CSV header for `bound` rows.
pub const BOUND_CSV_HEADER: &str =
    "m,n,ppt_norm,realignment_norm,lambda,bound_bits,is_ppt,realignment_detects,branch";

/// CSV header for `sandwich` rows; the trailing status column carries
/// "ok" or "error".
pub const SANDWICH_CSV_HEADER: &str =
    "m,n,lower_bits,upper_bits,gap_bits,ensemble_size,iterations,seed,status";

#[derive(Parser, Debug)]
#[command(
    name = "eofbound",
    version,
    about = "Entanglement-of-formation lower bounds from partial-transpose and realignment trace norms"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit one lower-bound report per input state
    Bound(BoundArgs),
    /// Write a state file for a built-in family
    Gen(GenArgs),
    /// Bracket the EOF: lower bound plus convex-roof upper estimate
    Sandwich(SandwichArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// One JSON object per line
    Json,
    /// Fixed-header CSV
    Csv,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Input state files (JSON documents)
    #[arg(value_name = "FILE", conflicts_with = "gen")]
    files: Vec<PathBuf>,
    /// Generate the input instead of reading files: FAMILY:k=v,…
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
    /// Write rows to this path instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Tolerance for the norm-versus-1 separability comparisons
    #[arg(long, default_value_t = DEFAULT_VERDICT_TOL)]
    tol: f64,
    /// Seed for generated inputs
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Require pure inputs (for --gen: produce the pure family variant)
    #[arg(long)]
    pure: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// FAMILY:k=v,… — one of isotropic, werner2x2, maxent, product,
    /// random, horodecki_bes
    #[arg(value_name = "SPEC")]
    spec: String,
    /// Output path (stdout if omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generate the pure variant of the family where one exists
    #[arg(long)]
    pure: bool,
}

#[derive(Args, Debug)]
struct SandwichArgs {
    #[command(flatten)]
    common: BoundArgs,
    /// Estimator ensemble size (default: state rank + 2)
    #[arg(long, value_name = "K")]
    ensemble_size: Option<usize>,
    /// Total estimator refinement iterations
    #[arg(long, value_name = "T", default_value_t = DEFAULT_ESTIMATOR_ITERATIONS)]
    iters: usize,
}

/// A parsed `FAMILY:k=v,…` generator spec.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Isotropic { d: usize, fidelity: f64 },
    Werner2x2 { p: f64 },
    Maxent { m: usize, n: usize },
    Product { m: usize, n: usize },
    Random { m: usize, n: usize, rank: Option<usize> },
    HorodeckiBes { a: f64 },
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, params) = match s.split_once(':') {
            Some((f, p)) => (f, p),
            None => (s, ""),
        };
        let mut pairs = Vec::new();
        for item in params.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::param(format!("spec item `{item}` is not of the form key=value"))
            })?;
            pairs.push((key.trim().to_ascii_lowercase(), value.trim().to_string()));
        }
        let field = |key: &str| -> Option<&str> {
            pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
        };
        let require = |key: &str| -> Result<&str> {
            field(key).ok_or_else(|| Error::param(format!("family `{family}` needs `{key}=`")))
        };
        let parse_usize = |key: &str, v: &str| -> Result<usize> {
            v.parse()
                .map_err(|_| Error::param(format!("`{key}={v}` is not a positive integer")))
        };
        let parse_f64 = |key: &str, v: &str| -> Result<f64> {
            v.parse().map_err(|_| Error::param(format!("`{key}={v}` is not a number")))
        };

        let known_keys: &[&str] = match family {
            "isotropic" => &["d", "f"],
            "werner2x2" => &["p"],
            "maxent" | "product" => &["m", "n"],
            "random" => &["m", "n", "rank"],
            "horodecki_bes" => &["a"],
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        if let Some((key, _)) = pairs.iter().find(|(k, _)| !known_keys.contains(&k.as_str())) {
            return Err(Error::param(format!("family `{family}` does not take `{key}=`")));
        }

        Ok(match family {
            "isotropic" => StateSpec::Isotropic {
                d: parse_usize("d", require("d")?)?,
                fidelity: parse_f64("f", require("f")?)?,
            },
            "werner2x2" => StateSpec::Werner2x2 {
                p: parse_f64("p", require("p")?)?,
            },
            "maxent" => {
                let m = parse_usize("m", require("m")?)?;
                let n = field("n").map(|v| parse_usize("n", v)).transpose()?.unwrap_or(m);
                StateSpec::Maxent { m, n }
            }
            "product" => {
                let m = parse_usize("m", require("m")?)?;
                let n = field("n").map(|v| parse_usize("n", v)).transpose()?.unwrap_or(m);
                StateSpec::Product { m, n }
            }
            "random" => {
                let m = parse_usize("m", require("m")?)?;
                let n = field("n").map(|v| parse_usize("n", v)).transpose()?.unwrap_or(m);
                let rank = field("rank").map(|v| parse_usize("rank", v)).transpose()?;
                StateSpec::Random { m, n, rank }
            }
            "horodecki_bes" => StateSpec::HorodeckiBes {
                a: parse_f64("a", require("a")?)?,
            },
            _ => unreachable!("family validated above"),
        })
    }
}

/// Instantiates a spec. `pure` selects the pure variant where the family
/// has one (`random`); `maxent` and `product` are pure by nature; the
/// mixed-only families reject the flag.
pub fn generate(spec: &StateSpec, seed: u64, pure: bool) -> Result<LoadedState> {
    let no_pure_variant = |family: &str| {
        Err(Error::param(format!("family `{family}` has no pure variant (drop --pure)")))
    };
    match *spec {
        StateSpec::Isotropic { d, fidelity } => {
            if pure {
                return no_pure_variant("isotropic");
            }
            Ok(LoadedState::Density(make_isotropic(d, fidelity)?))
        }
        StateSpec::Werner2x2 { p } => {
            if pure {
                return no_pure_variant("werner2x2");
            }
            Ok(LoadedState::Density(make_werner_2x2(p)?))
        }
        StateSpec::HorodeckiBes { a } => {
            if pure {
                return no_pure_variant("horodecki_bes");
            }
            Ok(LoadedState::Density(make_horodecki_3x3_bes(a)?))
        }
        StateSpec::Maxent { m, n } => Ok(LoadedState::Pure(make_maximally_entangled(m, n)?)),
        StateSpec::Product { m, n } => {
            Ok(LoadedState::Pure(random_product_state(BipartiteDims::new(m, n)?, seed)))
        }
        StateSpec::Random { m, n, rank } => {
            let dims = BipartiteDims::new(m, n)?;
            if pure {
                if rank.is_some() {
                    return Err(Error::param(
                        "`rank=` conflicts with --pure for the random family".to_string(),
                    ));
                }
                Ok(LoadedState::Pure(random_pure_state(dims, seed)))
            } else {
                let rank = rank.unwrap_or(dims.total());
                Ok(LoadedState::Density(random_density_matrix(dims, rank, seed)?))
            }
        }
    }
}

/// Parses arguments from the process environment and runs; returns the
/// exit code for `main`.
pub fn run() -> i32 {
    dispatch(Cli::parse())
}

fn dispatch(cli: Cli) -> i32 {
    match cli.command {
        Command::Bound(args) => run_bound(args),
        Command::Gen(args) => run_gen(args),
        Command::Sandwich(args) => run_sandwich(args),
    }
}

/// Exit code an error maps to: convergence failures are internal numeric
/// errors, everything else is a bad input.
fn severity(e: &Error) -> i32 {
    match e {
        Error::ConvergenceFailure => EXIT_NUMERIC_ERROR,
        _ => EXIT_INPUT_ERROR,
    }
}

/// Ordered batch inputs: (label for diagnostics, loaded state or error).
fn collect_inputs(
    files: &[PathBuf],
    gen: &Option<String>,
    seed: u64,
    pure: bool,
) -> Result<Vec<(String, Result<LoadedState>)>> {
    if let Some(spec_text) = gen {
        let label = format!("gen:{spec_text}");
        let state = StateSpec::from_str(spec_text).and_then(|spec| generate(&spec, seed, pure));
        return Ok(vec![(label, state)]);
    }
    if files.is_empty() {
        return Err(Error::param(
            "no input: pass state files or --gen FAMILY:k=v,…".to_string(),
        ));
    }
    Ok(files
        .iter()
        .map(|path| {
            let label = path.display().to_string();
            let state = statefile::load(path).and_then(|st| {
                if pure && st.kind() != StateKind::Pure {
                    Err(Error::param(format!(
                        "--pure requires pure-state inputs but `{label}` holds a density matrix"
                    )))
                } else {
                    Ok(st)
                }
            });
            (label, state)
        })
        .collect())
}

fn write_output(out: &Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            detail: format!("write failed: {e}"),
        }),
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle
                .write_all(body.as_bytes())
                .and_then(|()| handle.flush())
                .map_err(|e| Error::Parse {
                    path: "<stdout>".to_string(),
                    detail: format!("write failed: {e}"),
                })
        }
    }
}

#[derive(Serialize)]
struct BoundJsonRow<'a> {
    m: usize,
    n: usize,
    ppt_norm: f64,
    realignment_norm: f64,
    lambda: f64,
    bound_bits: f64,
    is_ppt: bool,
    realignment_detects: bool,
    branch: &'a str,
}

#[derive(Serialize)]
struct SandwichJsonRow {
    m: usize,
    n: usize,
    lower_bits: f64,
    upper_bits: f64,
    gap_bits: f64,
    ensemble_size: usize,
    iterations: usize,
    seed: u64,
}

#[derive(Serialize)]
struct ErrorJsonRow<'a> {
    input: &'a str,
    error: String,
}

fn bound_csv_row(report: &BoundReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        report.dims.dim_a(),
        report.dims.dim_b(),
        report.ppt_norm,
        report.realignment_norm,
        report.lambda_cap,
        report.bound_bits,
        report.verdict.is_ppt,
        report.verdict.realignment_detects,
        report.branch.as_str()
    )
}

fn bound_json_row(report: &BoundReport) -> String {
    serde_json::to_string(&BoundJsonRow {
        m: report.dims.dim_a(),
        n: report.dims.dim_b(),
        ppt_norm: report.ppt_norm,
        realignment_norm: report.realignment_norm,
        lambda: report.lambda_cap,
        bound_bits: report.bound_bits,
        is_ppt: report.verdict.is_ppt,
        realignment_detects: report.verdict.realignment_detects,
        branch: report.branch.as_str(),
    })
    .expect("row serialization cannot fail")
}

fn sandwich_csv_row(dims: BipartiteDims, res: &SandwichResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{},ok",
        dims.dim_a(),
        dims.dim_b(),
        res.lower_bits,
        res.upper_bits,
        res.gap_bits,
        res.ensemble_size,
        res.iterations,
        res.seed
    )
}

fn sandwich_json_row(dims: BipartiteDims, res: &SandwichResult) -> String {
    serde_json::to_string(&SandwichJsonRow {
        m: dims.dim_a(),
        n: dims.dim_b(),
        lower_bits: res.lower_bits,
        upper_bits: res.upper_bits,
        gap_bits: res.gap_bits,
        ensemble_size: res.ensemble_size,
        iterations: res.iterations,
        seed: res.seed,
    })
    .expect("row serialization cannot fail")
}

fn error_json_row(input: &str, err: &Error) -> String {
    serde_json::to_string(&ErrorJsonRow {
        input,
        error: err.to_string(),
    })
    .expect("row serialization cannot fail")
}

/// Shared batch driver: loads inputs, applies `process` to each state,
/// renders rows, writes the stream, and folds per-item failures into the
/// exit code.
fn run_batch<T>(
    common: &BoundArgs,
    csv_header: &str,
    csv_error_row: &str,
    process: impl Fn(&LoadedState) -> Result<T>,
    render_csv: impl Fn(&T) -> String,
    render_json: impl Fn(&T) -> String,
) -> i32 {
    let inputs = match collect_inputs(&common.files, &common.gen, common.seed, common.pure) {
        Ok(inputs) => inputs,
        Err(e) => {
            eprintln!("eofbound: {e}");
            return severity(&e);
        }
    };
    let mut body = String::new();
    if common.format == OutputFormat::Csv {
        body.push_str(csv_header);
        body.push('\n');
    }
    let mut exit = EXIT_OK;
    for (label, loaded) in inputs {
        let outcome = loaded.and_then(|state| process(&state));
        match outcome {
            Ok(value) => {
                let row = match common.format {
                    OutputFormat::Csv => render_csv(&value),
                    OutputFormat::Json => render_json(&value),
                };
                body.push_str(&row);
                body.push('\n');
            }
            Err(e) => {
                eprintln!("eofbound: {label}: {e}");
                exit = exit.max(severity(&e));
                let row = match common.format {
                    OutputFormat::Csv => csv_error_row.to_string(),
                    OutputFormat::Json => error_json_row(&label, &e),
                };
                body.push_str(&row);
                body.push('\n');
            }
        }
    }
    if let Err(e) = write_output(&common.out, &body) {
        eprintln!("eofbound: {e}");
        return EXIT_NUMERIC_ERROR.max(exit);
    }
    exit
}

fn run_bound(args: BoundArgs) -> i32 {
    let tol = args.tol;
    run_batch(
        &args,
        BOUND_CSV_HEADER,
        ",,,,,,,,error",
        |state| eof_lower_bound_with_tol(&state.to_density(), tol),
        bound_csv_row,
        bound_json_row,
    )
}

fn run_gen(args: GenArgs) -> i32 {
    let result = StateSpec::from_str(&args.spec)
        .and_then(|spec| generate(&spec, args.seed, args.pure))
        .and_then(|state| {
            let doc = match &state {
                LoadedState::Density(rho) => statefile::StateFile::from_density(rho),
                LoadedState::Pure(psi) => statefile::StateFile::from_pure(psi),
            };
            write_output(&args.out, &statefile::to_json(&doc))
        });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("eofbound: {e}");
            severity(&e)
        }
    }
}

fn run_sandwich(args: SandwichArgs) -> i32 {
    let params = SandwichParams {
        ensemble_size: args.ensemble_size,
        iterations: args.iters,
        seed: args.common.seed,
        tol: args.common.tol,
    };
    run_batch(
        &args.common,
        SANDWICH_CSV_HEADER,
        ",,,,,,,,error",
        move |state| {
            let rho = state.to_density();
            sandwich(&rho, &params).map(|res| (rho.dims(), res))
        },
        |(dims, res)| sandwich_csv_row(*dims, res),
        |(dims, res)| sandwich_json_row(*dims, res),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::eof_lower_bound;

    #[test]
    fn spec_parsing_accepts_every_family() {
        assert_eq!(
            "isotropic:d=3,F=0.8".parse::<StateSpec>().unwrap(),
            StateSpec::Isotropic { d: 3, fidelity: 0.8 }
        );
        assert_eq!(
            "werner2x2:p=0.5".parse::<StateSpec>().unwrap(),
            StateSpec::Werner2x2 { p: 0.5 }
        );
        assert_eq!(
            "maxent:m=2".parse::<StateSpec>().unwrap(),
            StateSpec::Maxent { m: 2, n: 2 }
        );
        assert_eq!(
            "maxent:m=2,n=5".parse::<StateSpec>().unwrap(),
            StateSpec::Maxent { m: 2, n: 5 }
        );
        assert_eq!(
            "product:m=2,n=3".parse::<StateSpec>().unwrap(),
            StateSpec::Product { m: 2, n: 3 }
        );
        assert_eq!(
            "random:m=3,n=3,rank=4".parse::<StateSpec>().unwrap(),
            StateSpec::Random { m: 3, n: 3, rank: Some(4) }
        );
        assert_eq!(
            "horodecki_bes:a=0.3".parse::<StateSpec>().unwrap(),
            StateSpec::HorodeckiBes { a: 0.3 }
        );
    }

    #[test]
    fn spec_parsing_rejects_bad_input() {
        assert!(matches!(
            "nosuch:x=1".parse::<StateSpec>(),
            Err(Error::UnknownFamily(_))
        ));
        assert!(matches!(
            "isotropic:d=3".parse::<StateSpec>(),
            Err(Error::ParameterOutOfRange(_))
        ));
        assert!(matches!(
            "isotropic:d=3,F=0.8,extra=1".parse::<StateSpec>(),
            Err(Error::ParameterOutOfRange(_))
        ));
        assert!(matches!(
            "isotropic:d=x,F=0.8".parse::<StateSpec>(),
            Err(Error::ParameterOutOfRange(_))
        ));
        assert!(matches!(
            "werner2x2:p".parse::<StateSpec>(),
            Err(Error::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn generate_honors_pure_flag() {
        let spec = "random:m=2,n=2".parse::<StateSpec>().unwrap();
        assert!(matches!(generate(&spec, 1, false).unwrap(), LoadedState::Density(_)));
        assert!(matches!(generate(&spec, 1, true).unwrap(), LoadedState::Pure(_)));

        let iso = "isotropic:d=2,F=0.5".parse::<StateSpec>().unwrap();
        assert!(generate(&iso, 1, true).is_err());

        let ranked = "random:m=2,n=2,rank=2".parse::<StateSpec>().unwrap();
        assert!(generate(&ranked, 1, true).is_err());
    }

    #[test]
    fn generate_is_deterministic_per_seed() {
        let spec = "random:m=2,n=3,rank=2".parse::<StateSpec>().unwrap();
        let a = generate(&spec, 9, false).unwrap().to_density();
        let b = generate(&spec, 9, false).unwrap().to_density();
        assert_eq!(a.matrix().max_abs_diff(b.matrix()), 0.0);
        let c = generate(&spec, 10, false).unwrap().to_density();
        assert!(a.matrix().max_abs_diff(c.matrix()) > 0.0);
    }

    #[test]
    fn csv_rows_have_the_documented_width() {
        let rho = make_isotropic(2, 0.9).unwrap();
        let report = eof_lower_bound(&rho).unwrap();
        let row = bound_csv_row(&report);
        assert_eq!(row.split(',').count(), BOUND_CSV_HEADER.split(',').count());
        assert!(row.starts_with("2,2,"));
        assert!(row.ends_with("convex_branch"));
        assert_eq!(",,,,,,,,error".split(',').count(), BOUND_CSV_HEADER.split(',').count());
        assert_eq!(
            SANDWICH_CSV_HEADER.split(',').count(),
            ",,,,,,,,error".split(',').count()
        );
    }

    #[test]
    fn json_rows_carry_the_same_fields_as_csv() {
        let rho = make_werner_2x2(0.8).unwrap();
        let report = eof_lower_bound(&rho).unwrap();
        let json = bound_json_row(&report);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        for key in BOUND_CSV_HEADER.split(',') {
            assert!(value.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(value["branch"], "convex_branch");
        assert_eq!(value["m"], 2);
    }
}
