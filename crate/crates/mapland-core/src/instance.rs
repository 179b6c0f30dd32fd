//! Dense MAP cost arrays: construction, evaluation, seeded generation, and
//! a small binary on-disk format.
//!
//! # File format (`.map`, version 1)
//!
//! ```text
//! magic   b"MAPC"           4 bytes
//! version u16 little-endian (currently 1)
//! D       u16 little-endian
//! N       u32 little-endian
//! seed    u64 little-endian (0 when the instance was not generated here)
//! costs   N^D × i64 little-endian, row-major (last index fastest)
//! check   u64 little-endian: wrapping sum of the coefficients as u64
//! ```
//!
//! A JSON sidecar (same stem, `.json`) records the generator parameters for
//! generated instances, including the sampling distribution tag.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::perm::gen_u64_below;
use crate::solution::Assignment;
use crate::{Error, Objective, Result};

const MAGIC: &[u8; 4] = b"MAPC";
const FORMAT_VERSION: u16 = 1;

/// Default coefficient range for generated instances.
pub const DEFAULT_LOW: i64 = 0;
pub const DEFAULT_HIGH: i64 = 100_000;

/// Parameters that fully determine a generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub low: i64,
    pub high: i64,
}

impl InstanceSpec {
    pub fn new(d: usize, n: usize, seed: u64) -> Self {
        InstanceSpec {
            d,
            n,
            seed,
            low: DEFAULT_LOW,
            high: DEFAULT_HIGH,
        }
    }
}

/// JSON sidecar written next to generated `.map` files.
///
/// `distribution` tags the sampling scheme; only independent uniform
/// integers on `[low, high]` are produced today, standing in for
/// application-specific cost structure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceSidecar {
    pub format: String,
    pub distribution: String,
    #[serde(flatten)]
    pub spec: InstanceSpec,
}

const DISTRIBUTION_TAG: &str = "uniform_int_inclusive";

/// A dense `D`-dimensional cost array over `{1..N}^D`, row-major with the
/// last index fastest.
///
/// Objectives are exact `i64` sums of `N` coefficients; callers supplying
/// external data must keep `N * max|c|` within `i64` (the default generated
/// scale leaves nine orders of magnitude of headroom).
#[derive(Clone, PartialEq, Eq)]
pub struct CostArray {
    d: usize,
    n: usize,
    costs: Vec<i64>,
}

impl std::fmt::Debug for CostArray {
    /// Summarized on purpose: the coefficient vector can hold millions of
    /// entries.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CostArray(D={}, N={}, {} coefficients)", self.d, self.n, self.costs.len())
    }
}

impl CostArray {
    /// Wraps a row-major coefficient vector; `costs.len()` must be `N^D`.
    pub fn new(d: usize, n: usize, costs: Vec<i64>) -> Result<Self> {
        let expect = checked_len(d, n)?;
        if costs.len() != expect {
            return Err(Error::Shape(format!(
                "cost vector has {} entries, expected N^D = {expect}",
                costs.len()
            )));
        }
        Ok(CostArray { d, n, costs })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.costs
    }

    /// Flat offset of a 0-based index tuple.
    #[inline]
    pub fn flat_index(&self, idx: &[u16]) -> usize {
        debug_assert_eq!(idx.len(), self.d);
        let mut off = 0usize;
        for &t in idx {
            debug_assert!((t as usize) < self.n);
            off = off * self.n + t as usize;
        }
        off
    }

    /// Coefficient at a 0-based index tuple.
    #[inline]
    pub fn at(&self, idx: &[u16]) -> i64 {
        self.costs[self.flat_index(idx)]
    }

    /// Objective value of a feasible solution: the sum over rows `i` of the
    /// coefficient selected by `(i, π_2(i), ..., π_D(i))`.
    pub fn evaluate(&self, s: &Assignment) -> Result<Objective> {
        if s.d() != self.d || s.n() != self.n {
            return Err(Error::Shape(format!(
                "solution is {}x{}, instance is {}x{}",
                s.d(),
                s.n(),
                self.d,
                self.n
            )));
        }
        let n = self.n;
        let mut total: i64 = 0;
        for i in 0..n {
            let mut off = i;
            for d in 2..=self.d {
                off = off * n + s.image(d, i);
            }
            total += self.costs[off];
        }
        Ok(total)
    }

    /// Estimated on-disk/in-memory payload size in bytes (8 per entry).
    pub fn payload_bytes(d: usize, n: usize) -> Option<u64> {
        let mut total: u64 = 8;
        for _ in 0..d {
            total = total.checked_mul(n as u64)?;
        }
        Some(total)
    }
}

fn checked_len(d: usize, n: usize) -> Result<usize> {
    if d < 3 {
        return Err(Error::Shape(format!("D must be >= 3, got {d}")));
    }
    if n < 2 {
        return Err(Error::Shape(format!("N must be >= 2, got {n}")));
    }
    if n > u16::MAX as usize {
        return Err(Error::Shape(format!("N must fit in u16, got {n}")));
    }
    let mut len: usize = 1;
    for _ in 0..d {
        len = len
            .checked_mul(n)
            .ok_or_else(|| Error::Range(format!("N^D overflows for N={n}, D={d}")))?;
    }
    Ok(len)
}

/// Generates the instance determined by `spec`: independent uniform integer
/// coefficients on `[low, high]`, drawn in row-major order from a ChaCha8
/// stream seeded with `spec.seed`. Identical specs yield identical arrays.
pub fn generate(spec: &InstanceSpec) -> Result<CostArray> {
    if spec.low > spec.high {
        return Err(Error::Config(format!(
            "empty coefficient range [{}, {}]",
            spec.low, spec.high
        )));
    }
    let len = checked_len(spec.d, spec.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut costs = Vec::with_capacity(len);
    for _ in 0..len {
        costs.push(sample_i64_inclusive(&mut rng, spec.low, spec.high));
    }
    Ok(CostArray {
        d: spec.d,
        n: spec.n,
        costs,
    })
}

/// Exact uniform draw from the inclusive range `[low, high]`.
fn sample_i64_inclusive<R: RngCore>(rng: &mut R, low: i64, high: i64) -> i64 {
    // Width measured in u64 so the full i64 range cannot overflow.
    let span = (high as u64).wrapping_sub(low as u64);
    if span == u64::MAX {
        return rng.next_u64() as i64;
    }
    let x = gen_u64_below(rng, span + 1);
    (low as u64).wrapping_add(x) as i64
}

/// Writes `array` in the binary format; `seed` is recorded in the header
/// (use 0 for instances that did not come from [`generate`]).
pub fn write_instance(array: &CostArray, seed: u64, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(array.d as u16).to_le_bytes())?;
    w.write_all(&(array.n as u32).to_le_bytes())?;
    w.write_all(&seed.to_le_bytes())?;
    let mut checksum: u64 = 0;
    for &c in &array.costs {
        w.write_all(&c.to_le_bytes())?;
        checksum = checksum.wrapping_add(c as u64);
    }
    w.write_all(&checksum.to_le_bytes())?;
    w.flush()?;
    Ok(())
}

/// Writes instance and JSON sidecar together; the sidecar lands at the same
/// path with extension `.json`.
pub fn write_instance_with_sidecar(array: &CostArray, spec: &InstanceSpec, path: &Path) -> Result<()> {
    write_instance(array, spec.seed, path)?;
    let sidecar = InstanceSidecar {
        format: format!("mapc-v{FORMAT_VERSION}"),
        distribution: DISTRIBUTION_TAG.to_string(),
        spec: *spec,
    };
    let json = serde_json::to_string_pretty(&sidecar)
        .map_err(|e| Error::Format(format!("sidecar serialization: {e}")))?;
    std::fs::write(sidecar_path(path), json)?;
    Ok(())
}

/// Sidecar path for an instance path (`foo.map` -> `foo.json`).
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Reads the sidecar written by [`write_instance_with_sidecar`].
pub fn read_sidecar(path: &Path) -> Result<InstanceSidecar> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("sidecar parse: {e}")))
}

/// Reads an instance file, returning the array and the recorded seed.
///
/// Header/length/checksum problems are reported before and independently of
/// coefficient parsing: a header advertising more data than the file holds
/// is a truncation error, and a payload that does not reproduce the stored
/// checksum is a corruption error.
pub fn read_instance(path: &Path) -> Result<(CostArray, u64)> {
    let file = File::open(path)?;
    let file_len = file.metadata()?.len();
    let mut r = BufReader::new(file);

    let mut magic = [0u8; 4];
    read_exact_or_format(&mut r, &mut magic, "magic")?;
    if &magic != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            magic, MAGIC
        )));
    }
    let version = read_u16(&mut r)?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported version {version}, expected {FORMAT_VERSION}"
        )));
    }
    let d = read_u16(&mut r)? as usize;
    let n = read_u32(&mut r)? as usize;
    let seed = read_u64(&mut r)?;
    let len = checked_len(d, n).map_err(|e| Error::Format(format!("bad header: {e}")))?;

    let expected_file_len = 20u64
        .checked_add((len as u64).checked_mul(8).and_then(|b| b.checked_add(8)).ok_or_else(
            || Error::Format(format!("header claims N^D = {len}, which overflows")),
        )?)
        .unwrap();
    if file_len != expected_file_len {
        return Err(Error::Format(format!(
            "file is {file_len} bytes but header implies {expected_file_len} \
             (truncated or trailing garbage)"
        )));
    }

    let mut costs = Vec::with_capacity(len);
    let mut checksum: u64 = 0;
    let mut buf = [0u8; 8];
    for _ in 0..len {
        read_exact_or_format(&mut r, &mut buf, "coefficients")?;
        let c = i64::from_le_bytes(buf);
        checksum = checksum.wrapping_add(c as u64);
        costs.push(c);
    }
    read_exact_or_format(&mut r, &mut buf, "checksum")?;
    let stored = u64::from_le_bytes(buf);
    if stored != checksum {
        return Err(Error::Checksum {
            expected: stored,
            actual: checksum,
        });
    }
    Ok((CostArray { d, n, costs }, seed))
}

fn read_exact_or_format<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf)
        .map_err(|e| Error::Format(format!("truncated while reading {what}: {e}")))
}

fn read_u16<R: Read>(r: &mut R) -> Result<u16> {
    let mut b = [0u8; 2];
    read_exact_or_format(r, &mut b, "header")?;
    Ok(u16::from_le_bytes(b))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact_or_format(r, &mut b, "header")?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact_or_format(r, &mut b, "header")?;
    Ok(u64::from_le_bytes(b))
}
