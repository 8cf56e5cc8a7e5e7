//! Command-line front end for `metafib`.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage/parse/validation,
//! 3 no structure found, 4 underflow under the strict policy, 5 forward
//! reference.

pub mod bfile;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use thiserror::Error;

use metafib::detect::{detect, DetectParams, Detection};
use metafib::harness::{self, HarnessError};
use metafib::quasipoly::{self, QuasipolyError, QuasipolySolution, WeightSequence};
use metafib::recurrence::{self, EngineError, NestedRecurrence, UnderflowPolicy};

use crate::bfile::{read_bfile, write_bfile, BFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_UNDERFLOW: i32 = 4;
pub const EXIT_FORWARD_REFERENCE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "metafib", version, about = "Nested recurrences and their quasipolynomial solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a nested recurrence and write a b-file.
    Compute(ComputeArgs),
    /// Write the period-3d closed-form solution as a b-file.
    Construct(ConstructArgs),
    /// Check closed forms against the recurrence.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Look for eventual quasipolynomial structure.
    Detect(DetectArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Policy {
    /// Indices <= 0 read as 0.
    Zero,
    /// Indices <= 0 are an error.
    Strict,
}

impl From<Policy> for UnderflowPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Zero => UnderflowPolicy::ZeroConvention,
            Policy::Strict => UnderflowPolicy::Strict,
        }
    }
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// Comma-separated inner shifts; Hofstadter's Q is 1,2.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    shifts: Vec<usize>,
    /// Comma-separated initial condition.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    init: Vec<BigInt>,
    /// Number of terms.
    #[arg(short = 'n', long)]
    n: usize,
    #[arg(long, value_enum, default_value = "zero")]
    policy: Policy,
    /// Output file; stdout when absent.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(short = 'd', long)]
    d: u32,
    #[arg(short = 'n', long)]
    n: usize,
    /// Comma-separated weights w_1, w_2, ...; each w_i must be at least 3i+2.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Option<Vec<BigInt>>,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Recurrence from the initial condition vs. the closed form.
    Theorem {
        /// Single degree parameter.
        #[arg(short = 'd', long, required_unless_present = "d_max", conflicts_with = "d_max")]
        d: Option<u32>,
        /// Sweep d = 1..=d_max.
        #[arg(long)]
        d_max: Option<u32>,
        #[arg(short = 'n', long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        weights: Option<Vec<BigInt>>,
    },
    /// Recurrence from 3,2,1 vs. Golomb's closed form.
    Golomb {
        #[arg(short = 'n', long, default_value_t = 100_000)]
        n: usize,
    },
    /// The Pascal-type identity and the lower bound for p_{d,k}.
    Lemmas {
        #[arg(long, default_value_t = 5)]
        d_max: u32,
        #[arg(long, default_value_t = 6)]
        k_max: u32,
        #[arg(long, default_value_t = 200)]
        n_max: i64,
    },
    /// Scan the Q-recurrence for a(n) > n.
    Wellposed {
        #[arg(long, value_delimiter = ',', default_value = "1,1", allow_negative_numbers = true)]
        init: Vec<BigInt>,
        #[arg(short = 'n', long, default_value_t = 100_000)]
        n: usize,
    },
}

#[derive(Debug, Args)]
struct DetectArgs {
    /// b-file to read; `-` for stdin.
    #[arg(long, conflicts_with = "from", required_unless_present = "from")]
    input: Option<String>,
    /// Generate the input instead, e.g. "construct d=3 n=500" or
    /// "compute shifts=1,2 init=1,1 n=200".
    #[arg(long)]
    from: Option<String>,
    #[arg(long, default_value_t = 12)]
    q_max: usize,
    #[arg(long, default_value_t = 4)]
    deg_max: usize,
    #[arg(long, default_value_t = 20)]
    min_confirm: usize,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    BFile(#[from] BFileError),
    #[error(transparent)]
    Validation(#[from] QuasipolyError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Engine(e) => CliError::Engine(e),
            HarnessError::Quasipoly(e) => CliError::Validation(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(EngineError::Underflow { .. }) => EXIT_UNDERFLOW,
            CliError::Engine(EngineError::ForwardReference { .. }) => EXIT_FORWARD_REFERENCE,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute(args) => cmd_compute(args, stdout),
        Command::Construct(args) => cmd_construct(args, stdout),
        Command::Verify(cmd) => cmd_verify(cmd, stdout),
        Command::Detect(args) => cmd_detect(args, stdin, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(terms: &[BigInt], output: Option<PathBuf>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_bfile(terms, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(stdout);
            write_bfile(terms, &mut w)?;
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn weights(raw: Option<Vec<BigInt>>) -> Result<Option<WeightSequence>, CliError> {
    Ok(raw.map(WeightSequence::new).transpose()?)
}

fn compute_terms(
    shifts: Vec<usize>,
    init: &[BigInt],
    n: usize,
    policy: UnderflowPolicy,
) -> Result<Vec<BigInt>, CliError> {
    let rec = NestedRecurrence::new(shifts)?;
    Ok(recurrence::compute(&rec, init, n, policy)?.into_terms())
}

fn construct_terms(d: u32, n: usize, weights: Option<WeightSequence>) -> Result<Vec<BigInt>, CliError> {
    Ok(QuasipolySolution::new(d, weights)?.buffer(n).into_terms())
}

fn cmd_compute(args: ComputeArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let terms = compute_terms(args.shifts, &args.init, args.n, args.policy.into())?;
    emit(&terms, args.output, stdout)
}

fn cmd_construct(args: ConstructArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let terms = construct_terms(args.d, args.n, weights(args.weights)?)?;
    emit(&terms, args.output, stdout)
}

fn cmd_verify(cmd: VerifyCommand, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        VerifyCommand::Theorem { d, d_max, n, weights: raw } => {
            let weights = weights(raw)?;
            let ds: Vec<u32> = match (d, d_max) {
                (Some(d), _) => vec![d],
                (None, Some(max)) => (1..=max).collect(),
                (None, None) => unreachable!("clap requires one of d, d_max"),
            };
            let reports: Vec<_> = if ds.len() > 1 && weights.is_none() {
                harness::verify_theorem_sweep(&ds, n)
            } else {
                ds.iter()
                    .map(|&d| harness::verify_theorem(d, n, weights.as_ref()))
                    .collect()
            };
            let mut code = EXIT_OK;
            for (&d, report) in ds.iter().zip(reports) {
                let report = report?;
                let late = report.first_valid_index > 3 * d as usize + 3;
                if !report.matched || late {
                    code = EXIT_MISMATCH;
                }
                writeln!(out, "{report}")?;
            }
            Ok(code)
        }
        VerifyCommand::Golomb { n } => {
            let report = harness::verify_golomb(n)?;
            writeln!(out, "{report}")?;
            let ok = report.matched && report.first_valid_index == 4;
            Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
        }
        VerifyCommand::Lemmas { d_max, k_max, n_max } => {
            if d_max < 1 || k_max < 1 || n_max < 1 {
                return Err(CliError::Usage("d-max, k-max and n-max must be at least 1".into()));
            }
            let mut code = EXIT_OK;
            for d in 1..=d_max {
                let r = quasipoly::check_lemma1(d, k_max, n_max);
                match &r.counterexample {
                    None => writeln!(out, "identity d={d}: holds ({} checks)", r.checked)?,
                    Some(f) => {
                        code = EXIT_MISMATCH;
                        writeln!(
                            out,
                            "identity d={d}: FAIL at k={} n={}: p(n) = {}, sum = {}",
                            f.k, f.n, f.lhs, f.rhs
                        )?;
                    }
                }
                let r = quasipoly::check_lemma2(d, k_max, n_max);
                let witnesses: Vec<String> = r
                    .equality_witnesses
                    .iter()
                    .map(|(k, n)| format!("({k},{n})"))
                    .collect();
                match &r.counterexample {
                    None => writeln!(
                        out,
                        "bound d={d}: holds ({} checks), equality at (k,n) = {}",
                        r.checked,
                        witnesses.join(" ")
                    )?,
                    Some(f) => {
                        code = EXIT_MISMATCH;
                        writeln!(
                            out,
                            "bound d={d}: FAIL at k={} n={}: p(n) = {} < {}",
                            f.k, f.n, f.value, f.bound
                        )?;
                    }
                }
            }
            Ok(code)
        }
        VerifyCommand::Wellposed { init, n } => match harness::q_wellposed_scan(&init, n)? {
            None => {
                writeln!(out, "a(n) <= n for every computed n <= {n}")?;
                Ok(EXIT_OK)
            }
            Some(index) => {
                writeln!(out, "a(n) > n first at n = {index}")?;
                Ok(EXIT_MISMATCH)
            }
        },
    }
}

/// Parses a generation spec such as `construct d=3 n=500`,
/// `compute shifts=1,2 init=1,1 n=200 policy=strict` or `golomb n=300`.
fn generate(spec: &str) -> Result<Vec<BigInt>, CliError> {
    let mut words = spec.split_whitespace();
    let kind = words
        .next()
        .ok_or_else(|| CliError::Usage("empty generation spec".into()))?;
    let mut pairs = std::collections::HashMap::new();
    for word in words {
        let (k, v) = word
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value, got {word:?}")))?;
        pairs.insert(k, v);
    }
    let get = |key: &str| -> Result<&str, CliError> {
        pairs
            .get(key)
            .copied()
            .ok_or_else(|| CliError::Usage(format!("{kind} needs {key}=...")))
    };
    let int = |key: &str| -> Result<usize, CliError> {
        get(key)?
            .parse()
            .map_err(|_| CliError::Usage(format!("bad value for {key}")))
    };
    let ints = |text: &str| -> Result<Vec<BigInt>, CliError> {
        text.split(',')
            .map(|s| s.parse().map_err(|_| CliError::Usage(format!("bad integer {s:?}"))))
            .collect()
    };
    match kind {
        "construct" => {
            let d = int("d")?
                .try_into()
                .map_err(|_| CliError::Usage("d out of range".into()))?;
            let raw = pairs.get("weights").map(|w| ints(w)).transpose()?;
            construct_terms(d, int("n")?, weights(raw)?)
        }
        "compute" => {
            let shifts = match pairs.get("shifts") {
                Some(s) => s
                    .split(',')
                    .map(|x| x.parse().map_err(|_| CliError::Usage(format!("bad shift {x:?}"))))
                    .collect::<Result<_, _>>()?,
                None => vec![1, 2],
            };
            let policy = match pairs.get("policy").copied().unwrap_or("zero") {
                "zero" => UnderflowPolicy::ZeroConvention,
                "strict" => UnderflowPolicy::Strict,
                other => return Err(CliError::Usage(format!("unknown policy {other:?}"))),
            };
            compute_terms(shifts, &ints(get("init")?)?, int("n")?, policy)
        }
        "golomb" => Ok(quasipoly::golomb_buffer(int("n")?).into_terms()),
        other => Err(CliError::Usage(format!("unknown generator {other:?}"))),
    }
}

fn cmd_detect(args: DetectArgs, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, CliError> {
    let terms = match (&args.input, &args.from) {
        (_, Some(spec)) => generate(spec)?,
        (Some(path), None) if path == "-" => read_bfile(stdin)?,
        (Some(path), None) => read_bfile(BufReader::new(File::open(path)?))?,
        (None, None) => unreachable!("clap requires input or from"),
    };
    let params = DetectParams {
        q_max: args.q_max,
        deg_max: args.deg_max,
        min_confirm: args.min_confirm,
    };
    match detect(&terms, &params).map_err(|e| CliError::Usage(e.to_string()))? {
        Detection::Found(fit) => {
            writeln!(
                out,
                "period {}, onset {}, confirmed {}",
                fit.period, fit.onset, fit.confirmed
            )?;
            for (r, p) in fit.residue_polys.iter().enumerate() {
                writeln!(out, "p_{r} = {p}")?;
            }
            Ok(EXIT_OK)
        }
        Detection::NotFound => {
            writeln!(
                out,
                "NotFound: no quasipolynomial structure with period <= {} and degree <= {}",
                params.q_max, params.deg_max
            )?;
            Ok(EXIT_NOT_FOUND)
        }
    }
}
