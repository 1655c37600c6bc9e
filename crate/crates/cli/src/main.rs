//! `ccalg`: checks and computations for twisted Rota-Baxter operators on
//! associative conformal algebras.
//!
//! Exit status is 0 when every check of the command passed, 1 when a
//! mathematical check or precondition failed, and 2 on malformed input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Fail;
use report::{Check, Report};

#[derive(Parser)]
#[command(name = "ccalg", version, about = "Twisted Rota-Baxter operators on associative conformal algebras")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Skip the associativity, bimodule and cocycle checks on load.
    #[arg(long, global = true)]
    no_validate: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
pub struct Src {
    /// Input bundle (JSON).
    #[arg(value_name = "FILE")]
    pub file: PathBuf,
}

#[derive(Args, Clone)]
pub struct OpArg {
    /// Operator name in the bundle (default `R`, or the only operator).
    #[arg(long)]
    pub op: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Induced {
    Product,
    Bimodule,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RouteArg {
    Delta,
    Brackets,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    /// Perturbation by an R-admissible 1-cocycle.
    #[value(name = "xi", alias = "admissible")]
    Admissible,
    /// Perturbation that twists the cocycle by a coboundary.
    #[value(name = "phi", alias = "twist")]
    Twist,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check associativity, the bimodule axioms and the cocycle condition.
    Validate {
        #[command(flatten)]
        src: Src,
    },
    /// Check the twisted Rota-Baxter identity.
    CheckTrb {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
    },
    /// Check that the graph of the operator is a subalgebra of the twisted semidirect product.
    GraphCheck {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
    },
    /// Induced product on U or induced bimodule structure on T.
    Induce {
        #[arg(value_enum)]
        what: Induced,
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
    },
    /// Twisted Hochschild differential of a U-cochain.
    TwistedDelta {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
        #[arg(long)]
        map: String,
    },
    /// Truncated cohomology of the operator.
    Cohomology {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        trunc: Option<u32>,
        #[arg(long, value_enum, default_value_t = RouteArg::Delta)]
        route: RouteArg,
    },
    /// Twist the cocycle by the coboundary of a 1-cochain T → U.
    TwistCoboundary {
        #[command(flatten)]
        src: Src,
        #[arg(long)]
        map: String,
    },
    /// Perturb the operator along a 1-cochain T → U.
    Perturb {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
        #[arg(long)]
        map: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Admissible)]
        mode: ModeArg,
    },
    /// Operator and cocycle from an invertible 1-cochain T → U.
    FromInverse {
        #[command(flatten)]
        src: Src,
        #[arg(long)]
        map: String,
        /// Name of the resulting operator in the output bundle.
        #[arg(long, default_value = "R")]
        name: String,
    },
    /// Derived brackets of U-cochains.
    Bracket {
        #[command(flatten)]
        src: Src,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        binary: Option<Vec<String>>,
        #[arg(long, num_args = 3, value_names = ["A", "B", "C"])]
        ternary: Option<Vec<String>>,
    },
    /// Maurer-Cartan residual; passes iff it vanishes.
    McResidual {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
    },
    /// The differential d_R on a U-cochain.
    #[command(name = "dR", alias = "dr")]
    Dr {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
        #[arg(long)]
        map: String,
    },
    /// Deformations of the operator.
    #[command(subcommand)]
    Deform(DeformCommand),
    /// Check the Nijenhuis conditions for an element of T.
    Nijenhuis {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
        #[arg(long)]
        element: String,
    },
    /// Solve d_R(p) = z for each 1-cocycle z up to a degree bound.
    Rigidity {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
        #[arg(long)]
        trunc: Option<u32>,
    },
}

#[derive(Subcommand)]
pub enum DeformCommand {
    /// R + t R1 through order three.
    Linear {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
        #[arg(long)]
        r1: String,
    },
    /// A named series of operators, order by order.
    Formal {
        #[command(flatten)]
        src: Src,
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Equivalence of R + t R1 and R + t R1' through an element p.
    Equiv {
        #[command(flatten)]
        src: Src,
        #[command(flatten)]
        op: OpArg,
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r1p: String,
        #[arg(long)]
        element: String,
    },
}

fn command_name(c: &Command) -> String {
    let name = match c {
        Command::Validate { .. } => "validate",
        Command::CheckTrb { .. } => "check-trb",
        Command::GraphCheck { .. } => "graph-check",
        Command::Induce { what: Induced::Product, .. } => "induce product",
        Command::Induce { what: Induced::Bimodule, .. } => "induce bimodule",
        Command::TwistedDelta { .. } => "twisted-delta",
        Command::Cohomology { .. } => "cohomology",
        Command::TwistCoboundary { .. } => "twist-coboundary",
        Command::Perturb { .. } => "perturb",
        Command::FromInverse { .. } => "from-inverse",
        Command::Bracket { .. } => "bracket",
        Command::McResidual { .. } => "mc-residual",
        Command::Dr { .. } => "dR",
        Command::Deform(DeformCommand::Linear { .. }) => "deform linear",
        Command::Deform(DeformCommand::Formal { .. }) => "deform formal",
        Command::Deform(DeformCommand::Equiv { .. }) => "deform equiv",
        Command::Nijenhuis { .. } => "nijenhuis",
        Command::Rigidity { .. } => "rigidity",
    };
    name.to_string()
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("CCALG_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("CCALG_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("CCALG_THREADS must be positive".into());
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

impl Command {
    fn src(&self) -> &Src {
        match self {
            Command::Validate { src }
            | Command::CheckTrb { src, .. }
            | Command::GraphCheck { src, .. }
            | Command::Induce { src, .. }
            | Command::TwistedDelta { src, .. }
            | Command::Cohomology { src, .. }
            | Command::TwistCoboundary { src, .. }
            | Command::Perturb { src, .. }
            | Command::FromInverse { src, .. }
            | Command::Bracket { src, .. }
            | Command::McResidual { src, .. }
            | Command::Dr { src, .. }
            | Command::Nijenhuis { src, .. }
            | Command::Rigidity { src, .. } => src,
            Command::Deform(
                DeformCommand::Linear { src, .. } | DeformCommand::Formal { src, .. } | DeformCommand::Equiv { src, .. },
            ) => src,
        }
    }
}

fn execute(cli: &Cli, rep: &mut Report) -> Result<(), Fail> {
    let ws = commands::load(&cli.command.src().file)?;
    if let Command::Validate { .. } = cli.command {
        return commands::run(&cli.command, &ws, rep);
    }
    if !cli.no_validate {
        commands::validation(&ws, rep)?;
        if !rep.passed() {
            return Ok(());
        }
        // Validation passed: keep the output focused on the command itself.
        rep.checks.clear();
    }
    commands::run(&cli.command, &ws, rep)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let mut rep = Report::new(&command_name(&cli.command));
    match execute(&cli, &mut rep) {
        Ok(()) => {}
        Err(Fail::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Fail::Math(msg)) => {
            rep.checks.push(Check::flag(format!("precondition: {msg}"), false));
        }
    }
    match cli.format {
        Format::Text => print!("{}", rep.text()),
        Format::Json => match serde_json::to_string_pretty(&rep.json()) {
            Ok(s) => println!("{s}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    }
    if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
