//! Run manifests: every command that writes an output directory also writes
//! `manifest.json` describing exactly what was run, so `mapland rerun` can
//! replay it and reproduce the outputs byte for byte.

use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

pub const MANIFEST_FILE: &str = "manifest.json";

/// A replayable description of one invocation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: CommandSpec,
    /// Echo of --jobs; informational only, outputs do not depend on it.
    pub jobs: Option<usize>,
    /// Whether wall-clock fields were recorded (true breaks byte-for-byte
    /// reproducibility on purpose).
    pub timings: bool,
    /// Directory the outputs were written into.
    pub out: Option<String>,
    /// Files written, relative to `out`.
    pub outputs: Vec<String>,
    /// Total command wall time in milliseconds; 0 unless timings were on.
    pub wall_ms: u64,
}

/// The command itself, with every input that affects the outputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "cmd", rename_all = "kebab-case")]
pub enum CommandSpec {
    Generate {
        dims: usize,
        card: usize,
        count: u64,
        seed: u64,
        low: i64,
        high: i64,
        max_bytes: u64,
    },
    Solve {
        instance: String,
        algo: String,
        start: String,
        start_seed: u64,
        check_optimum_cap: u64,
        export_graph: bool,
        node_cap: u64,
        edge_cap: u64,
    },
    Compare {
        batch: String,
        algo_a: String,
        algo_b: String,
        start_seed: u64,
        node_cap: u64,
        edge_cap: u64,
    },
    Multistart {
        instance: String,
        algo: String,
        starts: String,
        mu: Option<usize>,
        start_seed: u64,
        starts_file: Option<String>,
        node_cap: u64,
        edge_cap: u64,
    },
    Explore {
        instance: String,
        algo: String,
        starts: String,
        mu: Option<usize>,
        start_seed: u64,
        starts_file: Option<String>,
        node_cap: u64,
        edge_cap: u64,
    },
    VerifyHypercube {
        dims: String,
    },
    AnalyzeFdc {
        batch: String,
        algo: String,
        mu: usize,
        start_seed: u64,
        node_cap: u64,
        edge_cap: u64,
    },
}

impl CommandSpec {
    /// Short name used in log lines.
    pub fn name(&self) -> &'static str {
        match self {
            CommandSpec::Generate { .. } => "generate",
            CommandSpec::Solve { .. } => "solve",
            CommandSpec::Compare { .. } => "compare",
            CommandSpec::Multistart { .. } => "multistart",
            CommandSpec::Explore { .. } => "explore",
            CommandSpec::VerifyHypercube { .. } => "verify-hypercube",
            CommandSpec::AnalyzeFdc { .. } => "analyze-fdc",
        }
    }
}

impl RunManifest {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let bytes = fs::read(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        let manifest: RunManifest = serde_json::from_slice(&bytes)
            .with_context(|| format!("parsing manifest {}", path.display()))?;
        if manifest.tool != crate::manifest::tool_name() {
            anyhow::bail!(
                "manifest {} was written by '{}', not '{}'",
                path.display(),
                manifest.tool,
                tool_name()
            );
        }
        Ok(manifest)
    }

    pub fn save(&self, dir: &Path) -> anyhow::Result<std::path::PathBuf> {
        let mut bytes = serde_json::to_vec_pretty(self).context("encoding manifest")?;
        bytes.push(b'\n');
        let path = dir.join(MANIFEST_FILE);
        crate::fsio::atomic_write(&path, &bytes)?;
        Ok(path)
    }
}

pub fn tool_name() -> &'static str {
    "mapland"
}

pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
