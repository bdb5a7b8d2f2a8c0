//! `cisforge`: search, verify and count t-CIS codes from the command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or input error.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::commands::Output;

#[derive(Parser, Debug)]
#[command(name = "cisforge", version, about = "Complementary information set codes from one-generator module codes")]
pub struct Cli {
    /// Emit JSON lines instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for search and distance sweeps (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// TOML file with budgets and worker count; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write a run manifest to this path.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Best one-generator t-CIS code for a given h.
    Search(SearchArgs),
    /// Reproduce one of the distance tables.
    Table(TableArgs),
    /// Check whether (1, a_1, ..., a_{t-1}) generates a t-CIS code.
    Verify(VerifyArgs),
    /// Count t-CIS codes for h, optionally against an exhaustive oracle.
    Count(CountArgs),
    /// GV-type relative distance floor and the expurgation comparison.
    Bound(BoundArgs),
    /// Factorization shapes behind the asymptotic families.
    Shape(ShapeArgs),
    /// Binary image of a t-CIS code over F_{2^m}.
    Descend(DescendArgs),
    /// Factor h and list its CRT constituents.
    Factor(FactorArgs),
    /// Multinegacirculant codes over Z4.
    #[command(subcommand)]
    Z4(Z4Command),
    /// Re-run a manifest and compare result digests.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Random,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub t: usize,
    /// Modulus, e.g. "x^7-1" or "1,0,0,0,0,0,0,1"; "random" samples a separable h of degree --n per candidate.
    #[arg(long)]
    pub h: String,
    /// Degree for --h random.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Candidates for random mode.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Stop once this distance is reached.
    #[arg(long)]
    pub target: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// One of qc-t2, qc-t3, qt-t2, qt-t3, qpc-t2, qpc-t3.
    pub table: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Twist for the QT tables (index or expression in w).
    #[arg(long)]
    pub alpha: Option<String>,
    /// Candidates per random row.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Largest unit-tuple space searched exhaustively.
    #[arg(long)]
    pub cutoff: Option<u64>,
    /// Only these co-indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub h: String,
    #[arg(long)]
    pub t: usize,
    /// Generator residue; repeat once per a_i.
    #[arg(long = "a", required = true)]
    pub a: Vec<String>,
    /// Also compute the minimum distance.
    #[arg(long)]
    pub distance: bool,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub h: String,
    /// Count unit tuples exhaustively as well.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub r: usize,
    /// Also report the expurgation comparison at this co-index.
    #[arg(long)]
    pub n: Option<usize>,
    /// Relative distance for the expurgation report (default: the floor).
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeKind {
    /// Primes n with x^n - 1 = (x - 1) * irreducible.
    Qc,
    /// Prime powers n with x^n - alpha irreducible.
    Qt,
    /// Irreducibility of one binomial x^n - alpha.
    Binomial,
}

#[derive(Args, Debug)]
pub struct ShapeArgs {
    #[arg(value_enum)]
    pub kind: ShapeKind,
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 100)]
    pub nmax: u64,
    /// Order of alpha for `qt`.
    #[arg(long)]
    pub e: Option<u64>,
    /// Degree for `binomial`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Twist for `binomial`.
    #[arg(long)]
    pub alpha: Option<String>,
}

#[derive(Args, Debug)]
pub struct DescendArgs {
    /// Code JSON, as printed by `search --json` or `verify --json`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// "poly" for {1, w, ..., w^{m-1}}, or comma-separated basis elements.
    #[arg(long, default_value = "poly")]
    pub basis: String,
    /// Also compute the binary minimum distance.
    #[arg(long)]
    pub distance: bool,
}

#[derive(Args, Debug)]
pub struct FactorArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub h: String,
}

#[derive(Subcommand, Debug)]
pub enum Z4Command {
    /// Seeded random search for the best minimum Lee distance.
    Search(Z4SearchArgs),
    /// The three counts of t-CIS codes over Z4[x]/(x^n + 1).
    Count(Z4CountArgs),
}

#[derive(Args, Debug)]
pub struct Z4SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub target: Option<usize>,
}

#[derive(Args, Debug)]
pub struct Z4CountArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: usize,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Optional TOML configuration.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub workers: Option<usize>,
    /// Codeword budget for distance computations.
    pub distance_budget: Option<u64>,
    /// Candidates per random search.
    pub random_budget: Option<u64>,
    /// Largest unit-tuple space searched exhaustively by `table`.
    pub exhaustive_cutoff: Option<u64>,
    /// Candidates per Z4 search.
    pub z4_budget: Option<u64>,
}

impl Config {
    fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli, &argv[1..]) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, args: &[String]) -> Result<u8, String> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(workers) = cli.workers.or(config.workers) {
        if workers == 0 {
            return Err("--workers must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(workers).build_global().map_err(|e| e.to_string())?;
    }
    if let Command::Replay(replay) = &cli.command {
        return manifest::replay(&replay.manifest);
    }
    let start = std::time::Instant::now();
    let out = commands::execute(&cli.command, &config)?;
    print_output(&out, cli.json);
    if let Some(path) = &cli.manifest {
        let m = manifest::RunManifest::new(&cli.command, args, &out, start.elapsed());
        m.write(path)?;
    }
    Ok(if out.mismatch { 1 } else { 0 })
}

fn print_output(out: &Output, json: bool) {
    if json {
        for line in &out.json {
            println!("{line}");
        }
    } else {
        print!("{}", out.text);
    }
}
