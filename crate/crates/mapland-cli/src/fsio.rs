//! Filesystem helpers: atomic writes, CSV serialization, instance batch
//! listing, and the optional instance cache behind MAPLAND_CACHE_DIR.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use mapland_core::instance::{self, CostArray, InstanceSpec};
use serde::Serialize;

pub const CACHE_ENV: &str = "MAPLAND_CACHE_DIR";

/// Creates the directory (and parents) if missing.
pub fn ensure_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating directory {}", dir.display()))
}

/// Writes `bytes` to `path` via a temporary sibling file and an atomic
/// rename, so readers never observe a half-written file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let file_name = path
        .file_name()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow::anyhow!("invalid output path {}", path.display()))?;
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path)
        .with_context(|| format!("renaming {} into place", path.display()))?;
    Ok(())
}

/// Serializes rows to CSV (header from the first row) and writes atomically.
/// An empty slice produces an empty file.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .with_context(|| format!("encoding a CSV row for {}", path.display()))?;
    }
    let bytes = writer.into_inner().context("flushing CSV buffer")?;
    atomic_write(path, &bytes)
}

/// Pretty-printed JSON with a trailing newline, written atomically.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .with_context(|| format!("encoding JSON for {}", path.display()))?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

/// All `.mapc` files in `dir`, sorted by file name for deterministic order.
pub fn list_instances(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir)
        .with_context(|| format!("reading instance directory {}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "mapc").unwrap_or(false))
        .collect();
    files.sort();
    Ok(files)
}

/// Instance identifier used in CSV rows: the file stem.
pub fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Cache file location for a spec, if MAPLAND_CACHE_DIR is set.
pub fn cache_path(spec: &InstanceSpec) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    if dir.is_empty() {
        return None;
    }
    let name = format!(
        "d{}_n{}_s{}_l{}_h{}.mapc",
        spec.d, spec.n, spec.seed, spec.low, spec.high
    );
    Some(PathBuf::from(dir).join(name))
}

/// Returns the cached array for `spec` when present and intact (checksum
/// verified by the reader); any cache problem falls back to regeneration.
pub fn cache_read(spec: &InstanceSpec) -> Option<CostArray> {
    let path = cache_path(spec)?;
    let (array, seed) = instance::read_instance(&path).ok()?;
    if array.d() == spec.d && array.n() == spec.n && seed == spec.seed {
        Some(array)
    } else {
        None
    }
}

/// Best-effort cache store; failures only warn because the cache is an
/// optimization, never a correctness requirement.
pub fn cache_write(spec: &InstanceSpec, array: &CostArray) {
    let Some(path) = cache_path(spec) else {
        return;
    };
    let store = || -> anyhow::Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let file_name = path
            .file_name()
            .and_then(|s| s.to_str())
            .ok_or_else(|| anyhow::anyhow!("invalid cache path"))?;
        let tmp = path.with_file_name(format!(".{file_name}.{}.tmp", std::process::id()));
        instance::write_instance(array, spec.seed, &tmp)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    };
    if let Err(err) = store() {
        eprintln!("warning: could not store instance in cache: {err:#}");
    }
}
