//! `quatloci` command line front end.

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quatloci::quatalg::DEFAULT_PRIME_BOUND;

#[derive(Parser)]
#[command(name = "quatloci", version, about = "Quaternionic loci and Shimura curves in Siegel's threefold")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Search cap for the auxiliary prime of the explicit orders.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME_BOUND)]
    bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the Shimura curves of the locus by both routes.
    Rd { d: u64 },
    /// List the locus classes with their order data.
    Forms { d: u64 },
    /// Build the explicit maximal order of a form.
    Order { d: u64, form: String },
    /// Gram matrix of the CM lattice for coefficients (b1, b2, b3).
    CmGram {
        d: u64,
        form: String,
        #[arg(allow_hyphen_values = true)]
        b1: String,
        #[arg(allow_hyphen_values = true)]
        b2: String,
        #[arg(allow_hyphen_values = true)]
        b3: String,
    },
    /// Galois orbits of CM points and the Atkin-Lehner action on them.
    Orbits {
        d: u64,
        /// CM discriminant.
        #[arg(allow_hyphen_values = true)]
        disc: String,
        /// Auxiliary prime; defaults to the prime of the first locus class.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Candidate intersections of two curves.
    Intersect {
        curve: String,
        other: String,
        /// Value `n` of the recipe; defaults to the minimum of the other form.
        #[arg(long)]
        n: Option<u64>,
        /// Keep only discriminants that are not inert at the level of the other curve.
        #[arg(long)]
        level_filter: bool,
    },
    /// Evaluate a parameterization at j (or j + im*i).
    Eval {
        label: String,
        #[arg(allow_hyphen_values = true)]
        j: String,
        #[arg(long, allow_hyphen_values = true)]
        im: Option<String>,
    },
    /// Restriction of H4 to a curve with its square certificate.
    H4 { label: String },
    /// Certify one parameterization, or all of them.
    VerifyParam { label: String },
    /// Obstruction algebra of a curve at a rational j.
    Mestre {
        label: String,
        #[arg(allow_hyphen_values = true)]
        j: String,
    },
    /// Run a verification suite: appendixA, param <label|all>, modular, mestre, all.
    Verify { target: String, label: Option<String> },
    /// Rebuild the data bundle from a transcription directory.
    Ingest {
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Rd { d } => commands::rd(*d),
        Command::Forms { d } => commands::forms(*d, cli.bound),
        Command::Order { d, form } => commands::order(*d, form, cli.bound),
        Command::CmGram { d, form, b1, b2, b3 } => commands::cm_gram(*d, form, [b1, b2, b3], cli.bound),
        Command::Orbits { d, disc, p } => commands::orbits(*d, disc, *p),
        Command::Intersect { curve, other, n, level_filter } => {
            commands::intersect(curve, other, *n, *level_filter)
        }
        Command::Eval { label, j, im } => commands::eval(label, j, im.as_deref()),
        Command::H4 { label } => commands::h4(label),
        Command::VerifyParam { label } => verify::param(label),
        Command::Mestre { label, j } => commands::mestre(label, j),
        Command::Verify { target, label } => verify::run(target, label.as_deref(), cli.bound),
        Command::Ingest { dir, out } => commands::ingest(dir, out.as_deref()),
    };
    match result {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("json"));
            } else {
                print!("{}", report.text);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
