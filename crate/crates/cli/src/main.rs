//! `revlogic`: generate, simulate, verify and measure RNL netlists.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use revlogic::{
    gen_compressor_4_2, gen_full_adder, gen_half_adder, gen_ripple_adder, gen_wallace_multiplier,
    metrics, parse_netlist, verify_function, write_netlist, Circuit, FunctionSpec, VerifyMode,
};

#[derive(Parser)]
#[command(
    name = "revlogic",
    version,
    about = "Reversible TSG-gate circuit toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a circuit and write it as RNL.
    Gen {
        family: Family,
        /// Operand width (ripple, wallace).
        #[arg(long)]
        bits: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate one input vector and print the named outputs.
    Sim {
        file: PathBuf,
        #[arg(long = "set", value_name = "NAME=BIT")]
        set: Vec<String>,
    },
    /// Check a circuit against an arithmetic function.
    Verify(VerifyArgs),
    /// Print gate, garbage and delay metrics.
    Metrics {
        file: PathBuf,
        /// key=value output.
        #[arg(long)]
        kv: bool,
    },
    /// Print the exhaustive truth table as CSV.
    Truth {
        file: PathBuf,
        #[arg(long)]
        garbage: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    FullAdder,
    HalfAdder,
    Compressor42,
    Ripple,
    Wallace,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// fa, ha, c42, add:N, and:N or mul:N
    #[arg(long)]
    spec: String,
    #[arg(long, conflicts_with = "random")]
    exhaustive: bool,
    /// Number of random vectors.
    #[arg(long, value_name = "K")]
    random: Option<u64>,
    #[arg(long, default_value_t = 0, requires = "random")]
    seed: u64,
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(path: &Path) -> Result<Circuit, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_netlist(&text).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))
}

fn generate(family: Family, bits: Option<usize>) -> Result<Circuit, Failure> {
    let width = || bits.ok_or_else(|| Failure::Usage("--bits is required for this family".into()));
    Ok(match family {
        Family::FullAdder => gen_full_adder(),
        Family::HalfAdder => gen_half_adder(),
        Family::Compressor42 => gen_compressor_4_2(),
        Family::Ripple => gen_ripple_adder(width()?)?,
        Family::Wallace => gen_wallace_multiplier(width()?)?,
    })
}

fn parse_assignment(s: &str) -> Result<(&str, bool), Failure> {
    match s.split_once('=') {
        Some((name, "0")) => Ok((name, false)),
        Some((name, "1")) => Ok((name, true)),
        _ => Err(Failure::Usage(format!(
            "expected NAME=0 or NAME=1, got {s:?}"
        ))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen {
            family,
            bits,
            output,
        } => {
            let text = write_netlist(&generate(family, bits)?);
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
        }
        Command::Sim { file, set } => {
            let circuit = load(&file)?;
            let inputs = set
                .iter()
                .map(|s| parse_assignment(s))
                .collect::<Result<Vec<_>, _>>()?;
            let result = circuit.simulate(inputs)?;
            let line: Vec<String> = circuit
                .named_outputs(&result)
                .into_iter()
                .map(|(name, v)| format!("{name}={}", v as u8))
                .collect();
            println!("{}", line.join(" "));
        }
        Command::Verify(args) => {
            let circuit = load(&args.file)?;
            let spec: FunctionSpec = args.spec.parse()?;
            let mode = match args.random {
                Some(samples) => VerifyMode::Random {
                    samples,
                    seed: args.seed,
                },
                None => VerifyMode::Exhaustive,
            };
            let verdict = verify_function(&circuit, &spec, mode)?;
            match verdict.counterexample {
                None => println!("PASS ({} cases)", verdict.cases),
                Some(cex) => return Err(Failure::Mismatch(format!("FAIL: {cex}"))),
            }
        }
        Command::Metrics { file, kv } => {
            let report = metrics(&load(&file)?);
            if kv {
                print!("{}", report.to_kv());
            } else {
                print!("{}", report.to_table());
            }
        }
        Command::Truth { file, garbage } => {
            let table = load(&file)?.truth_table()?;
            print!("{}", table.to_csv(garbage));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
