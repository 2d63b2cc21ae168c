//! `rocn`: bounds, self-testing and Hadamard excess for ROCN correlation
//! Bell inequalities.

mod export;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rocn_core::bounds::nontriviality_check;
use rocn_core::clifford::twin_report;
use rocn_core::hadamard::{catalogue_entry, excess, is_regular, truncated_excess};
use rocn_core::rocn::{format_matrix_text, ParsedMatrix};
use rocn_core::{
    classical_bound, conjugation_equivalence_check, epping_bound, from_truncated_hadamard,
    load_hadamard, optimized_excess, paley_i, parse_matrix_text, quantum_bound, reference_strategy,
    remove_row_conjecture, save_hadamard, selftest, sylvester, synthesize_from_row_norms,
    twin_strategy, validate_rocn, verify_saturation, HadamardMatrix, RocnMatrix, SearchOptions,
};
use serde_json::{json, Map, Value};

use output::{envelope, render, with_fields, InputInfo};

const EXIT_INVALID: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "rocn", author, version, about, long_about = None)]
struct Cli {
    /// Worker threads for exhaustive searches (0 = all cores)
    #[arg(long, global = true, env = "ROCN_THREADS", default_value_t = 0)]
    threads: usize,

    /// Tolerance for the ROCN conditions and saturation checks
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = positive_f64)]
    tolerance: f64,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the ROCN conditions of a matrix file
    Validate { file: PathBuf },
    /// Classical bound, quantum bound and nontriviality
    Bounds {
        file: PathBuf,
        /// Skip the integer bitmask path and use dense dot products
        #[arg(long)]
        exact: bool,
    },
    /// Rank test of the self-testing criterion
    Selftest { file: PathBuf },
    /// Reference Jordan-Wigner strategy and its saturation certificate
    Reference {
        file: PathBuf,
        /// Directory receiving the strategy matrices and a manifest
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Twin of the reference strategy (odd number of rows)
    Twin {
        file: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Conjugation equivalence of the reference strategy and its twin
    Equivalence {
        /// Number of generators (odd)
        #[arg(long)]
        m: usize,
    },
    /// Non-Clifford family of optimal strategies when the rank test fails
    Counterexample {
        file: PathBuf,
        /// Parameter values; each must satisfy |alpha| < 1/||S||
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        alpha: Vec<f64>,
    },
    /// Hadamard matrices and their excess
    #[command(subcommand)]
    Hadamard(HadamardCommand),
    /// ROCN matrix with prescribed squared row norms
    Synthesize {
        /// Squared row norms, comma separated; they must sum to the column count
        #[arg(long, value_delimiter = ',', required = true)]
        row_norms: Vec<f64>,
        #[arg(long)]
        cols: usize,
        /// Write the matrix in the text format
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct HadamardSource {
    /// Matrix file with +/- rows
    file: Option<PathBuf>,
    /// Bundled catalogue entry, e.g. sylvester8, paley12, hadamard16_c
    #[arg(long)]
    name: Option<String>,
    /// Sylvester (power of two) or Paley I matrix of this order
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum HadamardCommand {
    /// Construct a Hadamard matrix
    Gen {
        #[command(flatten)]
        source: HadamardSource,
        /// Write the matrix in the catalogue format
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Excess and optimized excess
    Excess {
        #[command(flatten)]
        source: HadamardSource,
    },
    /// ROCN matrix obtained by deleting rows and rescaling
    Truncate {
        #[command(flatten)]
        source: HadamardSource,
        /// Rows to delete (0-based, comma separated)
        #[arg(long, value_delimiter = ',', required = true)]
        remove: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classical bound of every single-row truncation
    Conjecture {
        #[command(flatten)]
        source: HadamardSource,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

/// A failed command with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, message: message.into() }
    }
}

impl From<rocn_core::Error> for Failure {
    fn from(e: rocn_core::Error) -> Self {
        let code = match e {
            rocn_core::Error::Parse { .. } => EXIT_IO,
            _ => EXIT_INVALID,
        };
        Failure { code, message: e.to_string() }
    }
}

/// A finished report. `ok == false` means the input failed validation.
struct Outcome {
    input: InputInfo,
    report: Value,
    ok: bool,
}

impl Outcome {
    fn ok(input: InputInfo, report: Value) -> Self {
        Outcome { input, report, ok: true }
    }
}

type CmdResult = Result<Outcome, Failure>;

struct Ctx {
    threads: usize,
    tol: f64,
}

impl Ctx {
    fn search(&self, force_general: bool) -> SearchOptions {
        SearchOptions { threads: self.threads, force_general }
    }
}

fn read_input(path: &std::path::Path) -> Result<(String, InputInfo), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::io(path, e))?;
    let info = InputInfo::from_file(&path.display().to_string(), &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure { code: EXIT_IO, message: format!("{}: not valid UTF-8", path.display()) })?;
    Ok((text, info))
}

fn read_parsed(path: &std::path::Path) -> Result<(ParsedMatrix, InputInfo), Failure> {
    let (text, info) = read_input(path)?;
    Ok((parse_matrix_text(&text)?, info))
}

fn read_rocn(path: &std::path::Path, tol: f64) -> Result<(RocnMatrix, InputInfo), Failure> {
    let (parsed, info) = read_parsed(path)?;
    Ok((parsed.into_rocn(tol)?, info))
}

fn write_output(path: &std::path::Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

/// `scale * beta_c` as an exact string such as `18/sqrt(7)`, when the matrix
/// has a uniform exact magnitude.
fn exact_multiple(h: &RocnMatrix, integer: i64) -> Option<String> {
    h.exact()?.format_magnitude_multiple(integer)
}

fn fields(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn cmd_validate(ctx: &Ctx, file: &std::path::Path) -> CmdResult {
    let (parsed, input) = read_parsed(file)?;
    let report = validate_rocn(&parsed.matrix, ctx.tol)?;
    let ok = report.is_rocn;
    let exactly = parsed.exact.as_ref().map(|ex| ex.is_exactly_rocn());
    let report = with_fields(&report, fields(vec![("exactlyRocn", json!(exactly))]));
    Ok(Outcome { input, report, ok })
}

fn cmd_bounds(ctx: &Ctx, file: &std::path::Path, exact: bool) -> CmdResult {
    let (h, input) = read_rocn(file, ctx.tol)?;
    let report = classical_bound(&h, ctx.search(exact))?;
    let witness = nontriviality_check(&h, ctx.search(exact))?.witness;
    let beta_c_exact = report.integer_value.and_then(|c| exact_multiple(&h, c));
    let extra = fields(vec![
        ("betaCExact", json!(beta_c_exact)),
        ("betaQExact", json!(h.n().to_string())),
        ("searchPath", json!(if report.integer_value.is_some() { "bitmask" } else { "general" })),
        ("trivialityWitness", json!(witness)),
    ]);
    debug_assert_eq!(report.beta_q, quantum_bound(&h));
    debug_assert_eq!(report.epping_bound, epping_bound(&h));
    Ok(Outcome::ok(input, with_fields(&report, extra)))
}

fn cmd_selftest(ctx: &Ctx, file: &std::path::Path) -> CmdResult {
    let (h, input) = read_rocn(file, ctx.tol)?;
    let report = selftest::selftest_verdict(&h)?;
    Ok(Outcome::ok(input, serde_json::to_value(&report).expect("serializable report")))
}

fn cmd_reference(ctx: &Ctx, file: &std::path::Path, out_dir: Option<&std::path::Path>) -> CmdResult {
    let (h, input) = read_rocn(file, ctx.tol)?;
    let s = reference_strategy(&h)?;
    let report = verify_saturation(&h, &s, ctx.tol)?;
    if let Some(dir) = out_dir {
        export::write_strategy(dir, "reference", &input, &s).map_err(|e| Failure::io(dir, e))?;
    }
    let ok = report.saturated;
    let extra = fields(vec![("m", json!(h.m())), ("n", json!(h.n())), ("localDimension", json!(s.d()))]);
    Ok(Outcome { input, report: with_fields(&report, extra), ok })
}

fn cmd_twin(ctx: &Ctx, file: &std::path::Path, out_dir: Option<&std::path::Path>) -> CmdResult {
    let (h, input) = read_rocn(file, ctx.tol)?;
    let report = twin_report(&h)?;
    let s = reference_strategy(&h)?;
    let t = twin_strategy(&h, &s)?;
    let saturation = verify_saturation(&h, &t, ctx.tol)?;
    if let Some(dir) = out_dir {
        export::write_strategy(dir, "twin", &input, &t).map_err(|e| Failure::io(dir, e))?;
    }
    let ok = saturation.saturated;
    let extra = fields(vec![("saturation", serde_json::to_value(&saturation).expect("serializable"))]);
    Ok(Outcome { input, report: with_fields(&report, extra), ok })
}

fn cmd_equivalence(m: usize) -> CmdResult {
    let report = conjugation_equivalence_check(m)?;
    let input = InputInfo::from_arguments(&format!("equivalence --m {m}"));
    Ok(Outcome::ok(input, serde_json::to_value(&report).expect("serializable report")))
}

fn cmd_counterexample(ctx: &Ctx, file: &std::path::Path, alphas: &[f64]) -> CmdResult {
    let (h, input) = read_rocn(file, ctx.tol)?;
    let family = selftest::counterexample_family(&h)?;
    let evaluations = alphas
        .iter()
        .map(|&a| {
            if !a.is_finite() {
                return Err(Failure::invalid(format!("alpha must be finite, got {a}")));
            }
            Ok(serde_json::to_value(family.evaluate(a)?).expect("serializable"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let extra = fields(vec![("evaluations", Value::Array(evaluations))]);
    Ok(Outcome::ok(input, with_fields(&family, extra)))
}

fn cmd_synthesize(row_norms: &[f64], cols: usize, out: Option<&std::path::Path>) -> CmdResult {
    let h = synthesize_from_row_norms(row_norms, cols)?;
    let text = format_matrix_text(&h);
    if let Some(path) = out {
        write_output(path, &text)?;
    }
    let args: Vec<String> = row_norms.iter().map(|x| format!("{x:e}")).collect();
    let input = InputInfo::from_arguments(&format!("synthesize --row-norms {} --cols {cols}", args.join(",")));
    let validation = validate_rocn(h.matrix(), rocn_core::rocn::DEFAULT_TOL)?;
    let ok = validation.is_rocn;
    let report = json!({
        "m": h.m(),
        "n": h.n(),
        "matrix": h.matrix().to_rows(),
        "validation": validation,
    });
    Ok(Outcome { input, report, ok })
}

fn power_of_two_exponent(n: usize) -> Option<u32> {
    n.is_power_of_two().then(|| n.trailing_zeros())
}

fn hadamard_of_order(order: usize) -> Result<(String, HadamardMatrix), Failure> {
    if let Some(k) = power_of_two_exponent(order) {
        return Ok((format!("sylvester{order}"), sylvester(k)));
    }
    if order >= 4 && order.is_multiple_of(4) {
        if let Ok(h) = paley_i(order as u64 - 1) {
            return Ok((format!("paley{order}"), h));
        }
    }
    Err(Failure::invalid(format!(
        "no built-in construction of order {order}; use a power of two or q + 1 with q prime, q = 3 mod 4"
    )))
}

/// Resolves the source; the digest covers the file bytes, or the canonical
/// catalogue text for generated matrices.
fn load_source(src: &HadamardSource) -> Result<(String, HadamardMatrix, InputInfo), Failure> {
    if let Some(path) = &src.file {
        let (text, info) = read_input(path)?;
        let h = load_hadamard(&text)?;
        return Ok((path.display().to_string(), h, info));
    }
    let (name, h) = match (&src.name, src.order) {
        (Some(name), _) => {
            let h = catalogue_entry(name)
                .ok_or_else(|| Failure::invalid(format!("unknown catalogue entry '{name}'")))?;
            (name.clone(), h)
        }
        (None, Some(order)) => hadamard_of_order(order)?,
        (None, None) => unreachable!("clap enforces one source"),
    };
    let info = InputInfo::from_arguments(&save_hadamard(&h));
    Ok((name, h, info))
}

fn sign_rows(h: &HadamardMatrix) -> Vec<String> {
    (0..h.order())
        .map(|i| h.row(i).iter().map(|&x| if x > 0 { '+' } else { '-' }).collect())
        .collect()
}

fn cmd_hadamard(ctx: &Ctx, cmd: &HadamardCommand) -> CmdResult {
    match cmd {
        HadamardCommand::Gen { source, out } => {
            let (name, h, input) = load_source(source)?;
            if let Some(path) = out {
                write_output(path, &save_hadamard(&h))?;
            }
            let (regular, row_sum) = is_regular(&h);
            let report = json!({
                "name": name,
                "order": h.order(),
                "excess": excess(&h),
                "regular": regular,
                "rowSum": row_sum,
                "rows": sign_rows(&h),
            });
            Ok(Outcome::ok(input, report))
        }
        HadamardCommand::Excess { source } => {
            let (name, h, input) = load_source(source)?;
            let report = optimized_excess(&h, ctx.threads)?;
            Ok(Outcome::ok(input, with_fields(&report, fields(vec![("name", json!(name))]))))
        }
        HadamardCommand::Truncate { source, remove, out } => {
            let (name, h, input) = load_source(source)?;
            let r = from_truncated_hadamard(&h, remove)?;
            let text = format_matrix_text(&r);
            if let Some(path) = out {
                write_output(path, &text)?;
            }
            let bounds = classical_bound(&r, ctx.search(false))?;
            let beta_c_exact = bounds.integer_value.and_then(|c| exact_multiple(&r, c));
            let single = match remove[..] {
                [row] => Some(truncated_excess(&h, row)?.excess),
                _ => None,
            };
            let report = json!({
                "name": name,
                "order": h.order(),
                "removedRows": remove,
                "m": r.m(),
                "n": r.n(),
                "matrixText": text.lines().collect::<Vec<_>>(),
                "betaC": bounds.beta_c,
                "betaCExact": beta_c_exact,
                "truncatedExcess": single,
                "optimalA": bounds.optimal_a,
            });
            Ok(Outcome::ok(input, report))
        }
        HadamardCommand::Conjecture { source } => {
            let (name, h, input) = load_source(source)?;
            let report = remove_row_conjecture(&h, ctx.threads)?;
            let sigma_opt = optimized_excess(&h, ctx.threads)?.sigma_opt;
            let extra = fields(vec![("name", json!(name)), ("sigmaOpt", json!(sigma_opt))]);
            Ok(Outcome::ok(input, with_fields(&report, extra)))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Bounds { .. } => "bounds",
        Command::Selftest { .. } => "selftest",
        Command::Reference { .. } => "reference",
        Command::Twin { .. } => "twin",
        Command::Equivalence { .. } => "equivalence",
        Command::Counterexample { .. } => "counterexample",
        Command::Hadamard(HadamardCommand::Gen { .. }) => "hadamard gen",
        Command::Hadamard(HadamardCommand::Excess { .. }) => "hadamard excess",
        Command::Hadamard(HadamardCommand::Truncate { .. }) => "hadamard truncate",
        Command::Hadamard(HadamardCommand::Conjecture { .. }) => "hadamard conjecture",
        Command::Synthesize { .. } => "synthesize",
    }
}

fn run(cli: &Cli) -> CmdResult {
    let ctx = Ctx { threads: cli.threads, tol: cli.tolerance };
    match &cli.command {
        Command::Validate { file } => cmd_validate(&ctx, file),
        Command::Bounds { file, exact } => cmd_bounds(&ctx, file, *exact),
        Command::Selftest { file } => cmd_selftest(&ctx, file),
        Command::Reference { file, out_dir } => cmd_reference(&ctx, file, out_dir.as_deref()),
        Command::Twin { file, out_dir } => cmd_twin(&ctx, file, out_dir.as_deref()),
        Command::Equivalence { m } => cmd_equivalence(*m),
        Command::Counterexample { file, alpha } => cmd_counterexample(&ctx, file, alpha),
        Command::Hadamard(cmd) => cmd_hadamard(&ctx, cmd),
        Command::Synthesize { row_norms, cols, out } => cmd_synthesize(row_norms, *cols, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let doc = envelope(command_name(&cli.command), &outcome.input, outcome.report);
            print!("{}", render(&doc, cli.format));
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INVALID)
            }
        }
        Err(f) => {
            eprintln!("rocn: error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
