use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cugate::circuit::{from_json, render_ascii, to_qasm3};
use cugate::classify::{classify, DEFAULT_EPS};
use cugate::falsify::{falsify_with, FalsifyConfig, Metric, DEFAULT_RESTARTS, DEFAULT_SEED};
use cugate::io::{named_matrix, parse_matrix_json};
use cugate::synth::synth;
use cugate::verify::{check_identities, entanglement_suite, verify, Mode};
use cugate::{Error, Mat2};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "cugate",
    version,
    about = "Minimal-gate synthesis and verification of controlled single-qubit unitaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Progress and timing on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report the class and minimal gate count of U.
    Classify {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build and self-check an optimal circuit for controlled-U.
    Synth {
        #[command(flatten)]
        matrix: MatrixArgs,
        /// Also write the circuit as OpenQASM 3.
        #[arg(long, value_name = "PATH")]
        qasm: Option<PathBuf>,
        /// Print a text drawing of the circuit.
        #[arg(long)]
        ascii: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check a circuit file against controlled-U.
    Verify {
        #[arg(long, value_name = "PATH")]
        circuit: PathBuf,
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, value_enum, default_value_t = MetricArg::Exact)]
        metric: MetricArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search every circuit template up to a gate budget for controlled-U.
    Falsify {
        #[command(flatten)]
        matrix: MatrixArgs,
        /// Gate budget k (0..=7).
        #[arg(long)]
        gates: usize,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = MetricArg::Phase)]
        metric: MetricArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the randomized identity and entanglement-criterion checks.
    Lemmas {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct MatrixArgs {
    /// Matrix JSON file.
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
    /// One of I, X, Z, H, S, T.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, value_name = "THETA", allow_negative_numbers = true)]
    rz: Option<f64>,
    #[arg(long, value_name = "THETA", allow_negative_numbers = true)]
    ry: Option<f64>,
    /// diag(1, e^{iφ}).
    #[arg(long, value_name = "PHI", allow_negative_numbers = true)]
    phase: Option<f64>,
}

impl MatrixArgs {
    fn load(&self) -> Result<Mat2, String> {
        let m = if let Some(path) = &self.matrix {
            parse_matrix_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?
        } else if let Some(name) = &self.name {
            named_matrix(name).map_err(|e| e.to_string())?
        } else if let Some(t) = self.rz {
            finite(t).map(Mat2::rz)?
        } else if let Some(t) = self.ry {
            finite(t).map(Mat2::ry)?
        } else if let Some(t) = self.phase {
            finite(t).map(Mat2::phase)?
        } else {
            unreachable!("clap enforces one matrix source")
        };
        Ok(m)
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long)]
    pretty: bool,
}

impl OutputArgs {
    fn emit(&self, value: &Value) -> Result<(), String> {
        let text = if self.pretty {
            serde_json::to_string_pretty(value)
        } else {
            serde_json::to_string(value)
        }
        .expect("report JSON serializes");
        match &self.out {
            Some(path) => write(path, &(text + "\n")),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Phase,
    Exact,
}

fn finite(t: f64) -> Result<f64, String> {
    if t.is_finite() {
        Ok(t)
    } else {
        Err("angle must be finite".into())
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Failure that maps to a non-zero exit code.
enum Failure {
    Semantic(String),
    Input(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Input(s)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SynthesisFailure { .. } => Failure::Semantic(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Classify {
            matrix,
            eps,
            output,
        } => {
            let u = matrix.load()?;
            let report = classify(&u, *eps)?;
            if report.near_boundary() {
                eprintln!(
                    "warning: a class margin is within 100·eps of its threshold; \
                     the result depends on the tolerance"
                );
            }
            output.emit(&report.to_json())?;
            Ok(())
        }
        Command::Synth {
            matrix,
            qasm,
            ascii,
            output,
        } => {
            let u = matrix.load()?;
            let result = synth(&u)?;
            let check = verify(&result.circuit, &u, Mode::Exact);
            let mut value = result.to_json();
            value["verification"] = serde_json::to_value(check).expect("report serializes");
            output.emit(&value)?;
            if let Some(path) = qasm {
                write(path, &to_qasm3(&result.circuit))?;
            }
            if *ascii {
                print!("{}", render_ascii(&result.circuit));
            }
            if check.pass {
                Ok(())
            } else {
                Err(Failure::Semantic(format!(
                    "self-verification failed: distance {:.3e}",
                    check.distance
                )))
            }
        }
        Command::Verify {
            circuit,
            matrix,
            metric,
            output,
        } => {
            let c =
                from_json(&read(circuit)?).map_err(|e| format!("{}: {e}", circuit.display()))?;
            let u = matrix.load()?;
            u.check_unitary(cugate::classify::INPUT_UNITARY_TOL)?;
            let mode = match metric {
                MetricArg::Exact => Mode::Exact,
                MetricArg::Phase => Mode::Phase,
            };
            let report = verify(&c, &u, mode);
            output.emit(&serde_json::to_value(report).expect("report serializes"))?;
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Semantic(format!(
                    "circuit does not match: distance {:.3e}",
                    report.distance
                )))
            }
        }
        Command::Falsify {
            matrix,
            gates,
            restarts,
            seed,
            metric,
            output,
        } => {
            let u = matrix.load()?;
            let config = FalsifyConfig {
                metric: match metric {
                    MetricArg::Phase => Metric::Phase,
                    MetricArg::Exact => Metric::Exact,
                },
                restarts: *restarts,
                seed: *seed,
                ..FalsifyConfig::default()
            };
            if cli.verbose {
                eprintln!(
                    "searching {} templates with {} restarts each",
                    cugate::falsify::template_count((*gates).min(cugate::falsify::MAX_BUDGET)),
                    restarts
                );
            }
            let report = falsify_with(&u, *gates, &config)?;
            output.emit(&report.to_json())?;
            Ok(())
        }
        Command::Lemmas {
            trials,
            seed,
            output,
        } => {
            let mut checks = check_identities(*trials, *seed);
            checks.push(entanglement_suite(*trials, *seed));
            let failures: usize = checks.iter().map(|c| c.failures).sum();
            output.emit(&json!({ "checks": checks, "failures": failures }))?;
            if failures == 0 {
                Ok(())
            } else {
                Err(Failure::Semantic(format!("{failures} check failures")))
            }
        }
    };
    if cli.verbose {
        eprintln!("elapsed {:.3} s", started.elapsed().as_secs_f64());
    }
    outcome
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
