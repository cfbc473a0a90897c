//! `plumblat`: invariants of negative-definite plumbing graphs from the
//! command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input (syntax,
//! validation, preconditions, usage), 3 search box over budget, 4 internal
//! error.

mod commands;
mod output;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plumblat_core::search::DEFAULT_BUDGET;
use plumblat_core::{Error, PlumbingGraph, SearchConfig};

#[derive(Parser, Debug)]
#[command(name = "plumblat", version, about = "Lattice invariants of negative-definite plumbing graphs")]
pub struct Cli {
    /// Graph file, or `-` for standard input.
    #[arg(long, global = true, value_name = "FILE")]
    graph: Option<String>,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest number of lattice points a single search may cover.
    #[arg(long, global = true, env = "PLUMBLAT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Worker threads for box searches; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    workers: u64,

    #[command(subcommand)]
    command: Command,
}

/// Selects a blow-up: `--at <v>` (generic points) or `--edge u,w`.
#[derive(Args, Debug, Clone)]
pub struct BlowupSpec {
    #[arg(long, value_name = "VERTEX", conflicts_with = "edge", required_unless_present = "edge")]
    pub at: Option<String>,
    #[arg(long, value_name = "U,W")]
    pub edge: Option<String>,
    /// Number of successive blow-ups.
    #[arg(long, default_value_t = 1)]
    pub times: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the graph file and print the definiteness certificate.
    Validate,
    /// Summary: determinant, Z_K, Z_min, rationality and generic p_g.
    Invariants,
    /// Intersection pairing of two rational cycles.
    Pairing {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Dual basis element E*_v, or the E*-coordinates of a class.
    Estar {
        #[arg(long, conflicts_with = "decompose", required_unless_present = "decompose")]
        vertex: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        decompose: Option<String>,
    },
    /// Cohomological restriction of l' to a vertex subset, per component.
    Restrict {
        #[arg(long, allow_hyphen_values = true)]
        lprime: String,
        #[arg(long, value_name = "A,B,..")]
        subset: String,
    },
    /// Anticanonical cycle Z_K.
    Zk,
    /// Riemann-Roch function χ(l').
    Chi {
        #[arg(long, allow_hyphen_values = true)]
        lprime: String,
    },
    /// Fundamental cycle by Laufer's algorithm.
    Zmin,
    /// Artin's rationality criterion.
    Rational,
    /// Exact minimum of χ over a box or a lower-bounded region.
    Minchi {
        /// Upper corner Z of the box 0 <= l <= Z; minimizes χ(-l' + l).
        #[arg(long = "box", value_name = "Z", conflicts_with = "lower", required_unless_present = "lower")]
        boxed: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0", conflicts_with = "lower")]
        lprime: String,
        /// Lower bound c; minimizes χ(l) over l >= c.
        #[arg(long)]
        lower: Option<String>,
    },
    /// Laufer sequence of l' on Z.
    Reduce {
        #[arg(long)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        lprime: String,
    },
    /// Lower endpoint of h^1 for line bundles with Chern class l' on Z.
    Floor {
        #[arg(long)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        lprime: String,
    },
    /// Geometric genus of the generic analytic structure.
    GenericPg,
    /// Generic h^1(O_Z).
    GenericH1oz {
        #[arg(long)]
        z: String,
        /// Also evaluate at 2Z and report whether the value changed.
        #[arg(long)]
        stabilization: bool,
    },
    /// Dimension of ECa^{l'}(Z).
    EcaDim {
        #[arg(long)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        lprime: String,
    },
    /// Fiber dimension (l', Z) + h1_L - h1_OZ.
    FiberDim {
        #[arg(long)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        lprime: String,
        #[arg(long = "h1-l")]
        h1_l: u64,
        #[arg(long = "h1-oz")]
        h1_oz: u64,
    },
    /// e_Z for a vertex subset I, generic or from supplied h^1 values.
    Ez {
        #[arg(long)]
        z: String,
        #[arg(long, value_name = "A,B,..")]
        subset: String,
        #[arg(long = "h1-oz", requires = "h1_restricted")]
        h1_oz: Option<u64>,
        #[arg(long = "h1-restricted", requires = "h1_oz")]
        h1_restricted: Option<u64>,
    },
    /// Relative dominance test.
    Reldom(RelArgs),
    /// Relatively generic h^1.
    Relh1(RelArgs),
    /// Nonemptiness for relatively generic bundles, with the sign hypothesis.
    Relgen1(RelArgs),
    /// Dimension of the relative ECa space.
    RelspaceDim {
        #[arg(long)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        lprime: String,
        #[arg(long = "h1-z1-l")]
        h1_z1_l: u64,
        #[arg(long = "h1-o-z1")]
        h1_o_z1: u64,
    },
    /// Blow up and print the new graph with the correspondence table.
    Blowup(BlowupSpec),
    /// Pull a cycle back along a blow-up.
    Pullback {
        #[arg(long, allow_hyphen_values = true)]
        cycle: String,
        #[command(flatten)]
        blowup: BlowupSpec,
    },
    /// Z_new and Z_r for a generic chain at u (default length Z_u - 1).
    Znew {
        #[arg(long)]
        z: String,
        #[arg(long)]
        at: String,
        #[arg(long)]
        times: Option<u64>,
    },
}

#[derive(Args, Debug)]
pub struct RelArgs {
    #[arg(long)]
    pub z: String,
    #[arg(long)]
    pub z1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub lprime: String,
    /// `zero`, `generic`, or the path of an oracle table.
    #[arg(long, default_value = "zero")]
    pub oracle: String,
}

/// Failure carrying its exit code.
pub enum Failure {
    Io(String),
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Core(Error::BoxTooLarge { .. }) => 3,
            Failure::Core(Error::Internal(_)) => 4,
            Failure::Core(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(m) | Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

pub fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("reading standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("reading {path}: {e}")))
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let path = cli
        .graph
        .as_deref()
        .ok_or_else(|| Failure::Usage("--graph <FILE> is required".into()))?;
    let g = PlumbingGraph::parse(&read_input(path)?)?;
    let config = SearchConfig::default()
        .with_budget(cli.budget)
        .with_workers(cli.workers as usize);
    let report = commands::dispatch(&g, &cli.command, &config)?;
    Ok(if cli.json { report.json() } else { report.human() })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("plumblat: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
