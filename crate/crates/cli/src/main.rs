use std::process::ExitCode;

use bsurf_cli::{
    run_enumerate, run_file, run_lattice, run_over_q, CliError, LatticeSelector, Options, Outcome, DEFAULT_SEED,
    EXIT_PRECONDITION,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bsurf", version, about = "Exact torsion, endomorphism and Brauer-bound computations")]
struct Cli {
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized scenarios.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for parallel library routines (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest group closure to compute.
    #[arg(long, global = true, env = "BSURF_CAP")]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Commutant of one matrix over Z/l^s.
    Commutant { file: String },
    /// (n, n1, n2) from the commutant and from the divisor scan.
    EndInvariants { file: String },
    /// Fixed homomorphisms, exact sequence and divisibility certificates.
    HomInvariants { file: String },
    /// Normal form of an abelian subgroup of GL2(Z/l^s), l odd.
    ClassifyAbelian { file: String },
    /// Census of abelian subgroups of GL2(Z/l^s) up to conjugacy.
    EnumerateAbelian {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        s: u32,
    },
    /// Bound on n-torsion transcendental Brauer classes.
    BrauerBound(BrauerArgs),
    /// Gram lattice report.
    Lattice(LatticeArgs),
    /// H^1 of a finite group acting on Z^r.
    H1Bound { file: String },
    /// Finite subgroup of GL2(R) with rational traces.
    FiniteGl2r { file: String },
}

#[derive(Args)]
struct BrauerArgs {
    /// Scenario file.
    #[arg(required_unless_present = "over_q", conflicts_with = "over_q")]
    file: Option<String>,
    /// Bound over Q for a product of curves linked by a cyclic d-isogeny.
    #[arg(long, value_name = "D")]
    over_q: Option<u64>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct LatticeArgs {
    /// Rank-3 family lattice with determinant 2d.
    #[arg(long, value_name = "D")]
    family_d: Option<u64>,
    /// Saturation of the 16 exceptional classes.
    #[arg(long)]
    kummer: bool,
    /// Kummer lattice plus a hyperbolic plane.
    #[arg(long)]
    lambda_prod: bool,
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = Options { seed: cli.seed, cap: cli.cap };
    let file = |f: &str, name: &str| run_file(f, name, &opts);
    match &cli.command {
        Command::Commutant { file: f } => file(f, "commutant"),
        Command::EndInvariants { file: f } => file(f, "end-invariants"),
        Command::HomInvariants { file: f } => file(f, "hom-invariants"),
        Command::ClassifyAbelian { file: f } => file(f, "classify-abelian"),
        Command::EnumerateAbelian { ell, s } => run_enumerate(*ell, *s).map(Into::into),
        Command::BrauerBound(b) => match (&b.file, b.over_q) {
            (_, Some(d)) => run_over_q(d).map(Into::into),
            (Some(f), None) => file(f, "brauer-bound"),
            (None, None) => unreachable!("clap requires one of them"),
        },
        Command::Lattice(l) => {
            let sel = match (l.family_d, l.kummer) {
                (Some(d), _) => LatticeSelector::FamilyD(d),
                (None, true) => LatticeSelector::Kummer,
                (None, false) => LatticeSelector::LambdaProd,
            };
            run_lattice(sel).map(Into::into)
        }
        Command::H1Bound { file: f } => file(f, "h1-bound"),
        Command::FiniteGl2r { file: f } => file(f, "finite-gl2r"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PRECONDITION as u8);
        }
    }
    match dispatch(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.report.to_json());
            } else {
                print!("{}", out.report.to_table());
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
