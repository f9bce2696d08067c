//! `crystal-pde`: command-line access to bordism groups, point-group and
//! space-group tables, group cohomology, symmorphism and the PDE symbol and
//! crystal classification tools.
//!
//! Exit status is 0 on success, 1 on usage or input errors and 2 when a
//! validation finds mismatches (or a section fails to solve a system).

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use output::{Format, Status};

#[derive(Parser, Debug)]
#[command(name = "crystal-pde", version, about = "Integral bordism of PDEs and crystallographic groups")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for generic-point sampling.
    #[arg(long, global = true, default_value_t = crystal_pde::jets::DEFAULT_SEED)]
    pub seed: u64,
    /// Exit 0 when every validation finding is a known erratum of the published tables.
    #[arg(long, global = true)]
    pub expect_known_errata: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bordism groups and their crystallographic groups.
    #[command(subcommand)]
    Bordism(BordismCommand),
    /// Embedded crystallographic tables and their validation.
    #[command(subcommand)]
    Tables(TablesCommand),
    /// Cohomology of a point group with coefficients in a module.
    Cohomology(CohomologyArgs),
    /// Whether a plane crystallographic group is symmorphic.
    Symmorphic {
        /// Wallpaper group name, e.g. `p4g`.
        name: String,
    },
    /// Symbols, involutivity and crystal classification of PDEs.
    #[command(subcommand)]
    Pde(PdeCommand),
}

#[derive(Subcommand, Debug)]
pub enum BordismCommand {
    /// Unoriented bordism group Ω_n.
    Unoriented {
        #[arg(long)]
        n: usize,
    },
    /// Oriented bordism group Ω^SO_n, for n <= 8.
    Oriented {
        #[arg(long)]
        n: usize,
    },
    /// Ω_p(X) from the mod-2 Betti numbers of X.
    Relative {
        /// Comma-separated Betti numbers h_0,h_1,...
        #[arg(long, value_delimiter = ',', required = true)]
        betti: Vec<usize>,
        #[arg(long)]
        p: usize,
    },
    /// The crystallographic group attached to Z^r x Z_2^s.
    CrystalGroup {
        /// Group in the form printed elsewhere, e.g. `Z/2 x Z/2` or `Z^1 x Z/2`.
        #[arg(long)]
        group: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum TablesCommand {
    /// A point group and its subgroup table.
    Pointgroup {
        /// Schoenflies or international symbol.
        name: String,
        /// Check the published subgroup table against the computed lattice.
        #[arg(long)]
        verify: bool,
    },
    /// Space-group counts per syngony.
    Spacegroups {
        /// `all`, a syngony or a point group.
        #[arg(long, default_value = "all")]
        filter: String,
    },
    /// The 17 plane groups, or one of them with its published subgroups.
    Wallpaper { name: Option<String> },
    /// Every table check.
    Validate,
}

#[derive(Args, Debug)]
pub struct CohomologyArgs {
    /// Point group, e.g. `C_4` or `4/m`.
    #[arg(long)]
    pub group: String,
    /// Action on the coefficients.
    #[arg(long, value_enum, default_value = "trivial")]
    pub module: commands::ModuleKind,
    /// Underlying group for trivial and sign actions (e.g. `Z^1`, `Z/2`);
    /// for the natural action, `Z^1` gives the lattice and `Z/n` the lattice mod n.
    #[arg(long, default_value = "Z^1")]
    pub coefficients: String,
    #[arg(long)]
    pub degree: usize,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["path", "corpus"])))]
pub struct SystemSource {
    /// System file (YAML with independent, dependent, order and equations).
    pub path: Option<PathBuf>,
    /// Embedded system instead of a file, e.g. `continuity`.
    #[arg(long)]
    pub corpus: Option<String>,
    /// Use the file's alternate parameter values.
    #[arg(long)]
    pub alternate: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["path", "builtin"])))]
pub struct DescriptorSource {
    /// Descriptor file.
    pub path: Option<PathBuf>,
    /// Embedded descriptor instead of a file, e.g. `ricci_flow`.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum PdeCommand {
    /// Symbol dimensions, Cartan characters and prolongation counts.
    Symbol {
        #[command(flatten)]
        source: SystemSource,
        /// Also report the Cartan distribution dimension.
        #[arg(long)]
        cartan: bool,
    },
    /// Cartan test and formal integrability verdict.
    Involutivity {
        #[command(flatten)]
        source: SystemSource,
    },
    /// Crystal classification from a descriptor.
    Classify {
        #[command(flatten)]
        source: DescriptorSource,
    },
    /// Classification of every component of a singular descriptor.
    SingularClassify {
        #[command(flatten)]
        source: DescriptorSource,
        /// Compare the bordism groups of two components and their intersection, e.g. `0,1`.
        #[arg(long, value_delimiter = ',')]
        compare: Option<Vec<usize>>,
        /// Degree for --compare; defaults to n - 1.
        #[arg(long, requires = "compare")]
        degree: Option<usize>,
    },
    /// Residuals of a polynomial section on the system; exit 2 unless all vanish.
    VerifySolution {
        #[command(flatten)]
        source: SystemSource,
        /// One polynomial in the independent variables per dependent variable.
        #[arg(long = "section", required = true)]
        sections: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", out.render(cli.format));
            match out.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Mismatch => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
