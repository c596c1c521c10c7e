use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use trilie_cli::commands::{self, CliError, GroupArgs, LieOp, Method, Output, Preset};
use trilie_cli::report::{reproduce, ReproduceOptions, Section, Tier};
use trilie_core::gates::TripleKind;

#[derive(Parser)]
#[command(name = "trilie", version, about = "Exact entanglement, matrix group and Lie algebra computations")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "TRILIE_SEED", default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-derive every claim and print a pass/fail report.
    Reproduce {
        /// Sections to run (repeatable); all when omitted.
        #[arg(long = "section", value_enum)]
        sections: Vec<Section>,
        #[arg(long, value_enum, default_value = "fast")]
        tier: Tier,
        /// Report runtimes as 0 for byte-identical output.
        #[arg(long)]
        no_timing: bool,
    },
    /// Entanglement profile of a pure state file.
    Tangle {
        #[arg(long)]
        state: PathBuf,
    },
    /// Finite matrix groups from a generator file.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Lie algebra computations on a basis file.
    Lie {
        #[arg(value_enum)]
        op: LieOp,
        #[arg(long)]
        basis: PathBuf,
        /// Comma-separated names of commuting basis elements (for roots).
        #[arg(long)]
        cartan: Option<String>,
        /// Dimension bound for closure.
        #[arg(long, default_value_t = 256)]
        maxdim: usize,
    },
    /// Joint eigenvector check of a gate's rows against a Pauli triple.
    Eigencheck {
        /// Registered constant name or matrix file.
        gate: String,
        /// two_qubit (XZ, ZX, YY) or three_qubit (ZXZ, ZZX, ZYY).
        #[arg(long, default_value = "two_qubit")]
        triple: TripleKind,
    },
    /// List registered constants or print one as JSON.
    Constants { name: Option<String> },
    /// Print a built-in input file.
    Preset {
        #[arg(value_enum)]
        name: Preset,
    },
}

#[derive(Subcommand)]
enum GroupOp {
    /// Group order by Schreier-Sims or full enumeration.
    Order {
        #[command(flatten)]
        common: GroupCommon,
        #[arg(long, value_enum, default_value = "bsgs")]
        method: Method,
        /// Certify the randomized Schreier-Sims result.
        #[arg(long)]
        verify: bool,
    },
    /// Derived subgroup and small-group invariants by enumeration.
    Derived {
        #[command(flatten)]
        common: GroupCommon,
    },
}

#[derive(clap::Args)]
struct GroupCommon {
    #[arg(long)]
    gens: PathBuf,
    /// Element limit for enumeration.
    #[arg(long, default_value_t = 1_000_000)]
    limit: usize,
    /// Line-delimited JSON progress events on stderr.
    #[arg(long)]
    progress: bool,
}

fn emit(out: &Output, json: bool) -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    let _ = if json {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("serializable"))
    } else {
        write!(stdout, "{}", out.text)
    };
    ExitCode::from(out.code)
}

fn run(cli: Cli, cancel: &AtomicBool) -> Result<ExitCode, CliError> {
    let out = match cli.command {
        Command::Reproduce { sections, tier, no_timing } => {
            let opts = ReproduceOptions { sections, tier, seed: cli.seed, timing: !no_timing };
            let report = reproduce(&opts, cancel);
            let text = report.render();
            let json = serde_json::to_value(&report).expect("serializable");
            Output { json, text, code: report.exit_code() }
        }
        Command::Tangle { state } => commands::tangle(&state)?,
        Command::Group { op } => {
            let (common, method, verify, derived) = match op {
                GroupOp::Order { common, method, verify } => (common, method, verify, false),
                GroupOp::Derived { common } => (common, Method::Enumerate, false, true),
            };
            let args = GroupArgs {
                gens: &common.gens,
                method,
                limit: common.limit,
                seed: cli.seed,
                verify,
                progress: common.progress,
                cancel,
            };
            if derived {
                commands::group_derived(&args)?
            } else {
                commands::group_order(&args)?
            }
        }
        Command::Lie { op, basis, cartan, maxdim } => commands::lie(op, &basis, cartan.as_deref(), maxdim)?,
        Command::Eigencheck { gate, triple } => commands::eigencheck(&gate, triple)?,
        Command::Constants { name } => commands::constants(name.as_deref())?,
        Command::Preset { name } => Output { json: commands::preset(name), text: String::new(), code: 0 },
    };
    // presets are files; print them as JSON either way
    let json = cli.json || out.text.is_empty();
    Ok(emit(&out, json))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cancel = Arc::new(AtomicBool::new(false));
    let flag = Arc::clone(&cancel);
    let _ = ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed));
    match run(cli, &cancel) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
