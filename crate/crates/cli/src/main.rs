//! `dqt`: reproduce tables and run circuits of discrete quantum theory over
//! finite fields.

mod cardinal;
mod circuits;
mod nt;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{CliError, Report};

#[derive(Parser, Debug)]
#[command(
    name = "dqt",
    version,
    about = "Exact quantum computation over finite fields"
)]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quadratic residues and the least-non-residue sequence.
    #[command(subcommand)]
    Nt(NtCommand),
    /// Amplitudes allowed in dimension d for an ordered range of size k.
    Amplitudes(AmplitudesArgs),
    /// Modal quantum theory over F_2.
    #[command(subcommand)]
    Modal(ModalCommand),
    /// Deterministic UNIQUE-SAT in the one-clean-qubit model.
    #[command(subcommand)]
    Dqc1(Dqc1Command),
    /// Deutsch-Jozsa.
    #[command(subcommand)]
    Dj(DjCommand),
    /// Grover search.
    #[command(subcommand)]
    Grover(GroverCommand),
    /// Cardinal probabilities.
    #[command(subcommand)]
    Cardinal(CardinalCommand),
}

#[derive(Subcommand, Debug)]
enum NtCommand {
    /// Rows `(pi(k), k, p)` of the least-non-residue table.
    Table {
        #[arg(long, default_value_t = 10)]
        rows: u64,
        #[arg(long, default_value_t = nt::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Least prime p whose least quadratic non-residue is k.
    FindP {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = nt::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Checks that k is the least quadratic non-residue of p.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
    },
}

#[derive(Args, Debug)]
struct AmplitudesArgs {
    #[arg(long)]
    k: u64,
    /// A dimension `D` or an inclusive range `A..B`.
    #[arg(long, value_parser = nt::parse_dims)]
    d: nt::Dims,
}

#[derive(Subcommand, Debug)]
enum ModalCommand {
    /// Runs the UNIQUE-SAT circuit on one oracle or sweeps all admissible ones.
    Usat(ModalUsatArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
struct OracleSource {
    /// Oracle file: `{"n": 3, "ones": ["101"]}`.
    #[arg(long, group = "source")]
    oracle: Option<PathBuf>,
    /// Every oracle on N bits with at most one satisfying input.
    #[arg(long, group = "source", value_name = "N")]
    exhaustive: Option<usize>,
}

#[derive(Args, Debug)]
struct ModalUsatArgs {
    #[command(flatten)]
    source: OracleSource,
    /// Draw one outcome uniformly from the outcome set.
    #[arg(long, value_name = "SEED")]
    sample: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Dqc1Command {
    Usat {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand, Debug)]
enum DjCommand {
    /// Runs the circuit and decides constant or balanced.
    Run {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// Field size needed for n input bits.
    Resources {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = nt::DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Subcommand, Debug)]
enum GroverCommand {
    /// Amplitudes and cardinal probabilities at every iteration.
    Trace {
        /// Qubits; the database has 2^n entries.
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        target: usize,
        /// Check the run against the ordered range of this prime.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Field size needed for 2^n entries.
    Resources {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = nt::DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Subcommand, Debug)]
enum CardinalCommand {
    /// Re-weights one-qubit states of the given norms to comparable scales.
    Rescale(cardinal::RescaleArgs),
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Nt(NtCommand::Table { rows, budget }) => nt::table(rows, budget),
        Command::Nt(NtCommand::FindP { k, budget }) => nt::find_p(k, budget),
        Command::Nt(NtCommand::Verify { p, k }) => nt::verify(p, k),
        Command::Amplitudes(a) => nt::amplitudes(a.k, a.d),
        Command::Modal(ModalCommand::Usat(a)) => match (a.source.oracle, a.source.exhaustive) {
            (Some(path), _) => circuits::modal_usat_file(&path, a.sample),
            (None, Some(n)) => circuits::modal_usat_exhaustive(n),
            (None, None) => Err(CliError::usage(
                "one of --oracle or --exhaustive is required",
            )),
        },
        Command::Dqc1(Dqc1Command::Usat { oracle, p }) => circuits::dqc1_usat(&oracle, p),
        Command::Dj(DjCommand::Run { oracle, p }) => circuits::dj_run(&oracle, p),
        Command::Dj(DjCommand::Resources { n, budget }) => circuits::dj_resources(n, budget),
        Command::Grover(GroverCommand::Trace { n, target, p }) => {
            circuits::grover_trace(n, target, p)
        }
        Command::Grover(GroverCommand::Resources { n, budget }) => {
            circuits::grover_resources(n, budget)
        }
        Command::Cardinal(CardinalCommand::Rescale(a)) => cardinal::rescale(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render(json));
            ExitCode::from(report.exit_code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
