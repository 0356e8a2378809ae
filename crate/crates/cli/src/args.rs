use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "gbl", version, about = "Exact topological operations on gapped-boundary qudits of D(Z_N)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

/// Where the ground space comes from: `--n` with `--boundaries`, or a descriptor file.
#[derive(Args, Debug, Clone)]
pub struct SpaceArgs {
    /// Modulus N of D(Z_N).
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    /// Comma-separated boundary types, one per hole (e.g. `e,e,m,m`).
    #[arg(long, value_delimiter = ',')]
    pub boundaries: Vec<String>,
    /// Space descriptor JSON written by `gbl space`.
    #[arg(long, conflicts_with = "boundaries")]
    pub space: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TheoryArgs {
    /// Modulus N of D(Z_N).
    #[arg(long, default_value_t = 3)]
    pub n: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// S, T and R data of D(Z_N) with the modular relation checks.
    Theory(TheoryArgs),
    /// Lagrangian algebras (gapped boundary types).
    Boundary {
        #[command(subcommand)]
        command: BoundaryCommand,
    },
    /// Ground space of a sphere with holes.
    Space(SpaceArgs),
    /// Operator matrices on a ground space.
    Op {
        #[command(subcommand)]
        op: OpCommand,
    },
    /// Compiled qutrit gates.
    Gate {
        #[command(subcommand)]
        command: GateCommand,
    },
    /// Circuit simulation.
    Circuit {
        #[command(subcommand)]
        command: CircuitCommand,
    },
    /// Runs the acceptance checks (`all` or one check id).
    Verify {
        #[arg(default_value = "all")]
        scope: String,
    },
    /// Serializes any object: theory, boundary, space, op or gate.
    Emit {
        #[command(subcommand)]
        selector: EmitSelector,
    },
}

#[derive(Subcommand, Debug)]
pub enum BoundaryCommand {
    List(TheoryArgs),
}

#[derive(Subcommand, Debug)]
pub enum GateCommand {
    /// Emits a gate by name (X3, Z3, H3, CZ3, SUM3, SUM3_ee, Q3, M).
    Emit { name: String },
}

#[derive(Subcommand, Debug)]
pub enum CircuitCommand {
    Run(RunArgs),
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Circuit JSON file.
    pub file: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include the final state of every shot.
    #[arg(long)]
    pub emit_state: bool,
    /// Basis labels of the data registers, comma-separated (default all 0).
    #[arg(long, value_delimiter = ',', conflicts_with = "amplitudes")]
    pub input: Option<Vec<usize>>,
    /// Amplitude vector as JSON `[[re, im], ...]` over the data registers.
    #[arg(long)]
    pub amplitudes: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum OpCommand {
    /// Moves an anyon from one hole to another.
    Tunnel {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        anyon: String,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Loop of an anyon around one hole.
    Loop {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        anyon: String,
        #[arg(long)]
        hole: usize,
    },
    /// Pure braid generators; `--word 2,3 --word 1,2:-1` applies letters in order.
    Braid {
        #[command(flatten)]
        space: SpaceArgs,
        /// Letter `i,j` or `i,j:-1`; repeat for a word.
        #[arg(long = "word", required = true)]
        word: Vec<String>,
    },
    /// Projector onto a charge through a curve (`loop:<i>` or `arc:<i>,<j>`).
    Tcm {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 0)]
        charge: u32,
        #[arg(long)]
        curve: String,
    },
    /// The complement 1 - P of `tcm`.
    TcmComplement {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 0)]
        charge: u32,
        #[arg(long)]
        curve: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum EmitSelector {
    Theory(TheoryArgs),
    Boundary(TheoryArgs),
    Space(SpaceArgs),
    Op {
        #[command(subcommand)]
        op: OpCommand,
    },
    Gate { name: String },
}
