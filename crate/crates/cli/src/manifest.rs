//! Run manifests: enough to re-run a command and check it reproduces the
//! same JSON result bytes.

use std::path::Path;
use std::time::Duration;

use clap::Parser;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::commands::{self, Output};
use crate::{Cli, Command, Config};

pub const TOOL: &str = "cisforge";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Arguments after the program name, with `--manifest` removed.
    pub args: Vec<String>,
    pub seed: u64,
    /// False for runs whose result does not depend on the seed.
    pub seed_used: bool,
    pub wall_time_secs: f64,
    /// SHA-256 of the JSON result lines, each followed by a newline.
    pub result_digest: String,
}

impl RunManifest {
    pub fn new(command: &Command, args: &[String], out: &Output, elapsed: Duration) -> Self {
        RunManifest {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: commands::name(command),
            args: strip_manifest(args),
            seed: out.seed,
            seed_used: out.seed_used,
            wall_time_secs: elapsed.as_secs_f64(),
            result_digest: digest(out),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), String> {
        let text = serde_json::to_string_pretty(self).map_err(|e| e.to_string())?;
        std::fs::write(path, text + "\n").map_err(|e| format!("cannot write manifest {}: {e}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read manifest {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad manifest {}: {e}", path.display()))
    }
}

pub fn digest(out: &Output) -> String {
    let mut hasher = Sha256::new();
    for line in &out.json {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    format!("{:x}", hasher.finalize())
}

fn strip_manifest(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

/// Re-runs the recorded command. Exit 0 when the digest matches, 1 otherwise.
pub fn replay(path: &Path) -> Result<u8, String> {
    let m = RunManifest::read(path)?;
    if m.tool != TOOL {
        return Err(format!("manifest was written by '{}', not {TOOL}", m.tool));
    }
    if m.version != env!("CARGO_PKG_VERSION") {
        eprintln!("warning: manifest written by version {}, replaying with {}", m.version, env!("CARGO_PKG_VERSION"));
    }
    let argv = std::iter::once(TOOL.to_string()).chain(m.args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| format!("manifest arguments do not parse: {e}"))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err("a manifest cannot record a replay".into());
    }
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let out = commands::execute(&cli.command, &config)?;
    let got = digest(&out);
    let same = got == m.result_digest;
    println!("subcommand: {}", m.subcommand);
    println!("recorded digest: {}", m.result_digest);
    println!("replayed digest: {got}");
    println!("{}", if same { "MATCH" } else { "MISMATCH" });
    Ok(if same { 0 } else { 1 })
}
