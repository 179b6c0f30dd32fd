//! mapland: search and fitness-landscape experiments on multidimensional
//! assignment problems.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O or file-format error,
//! 4 cap or byte-budget exceeded, 5 verification failure, 1 anything else.

mod cli;
mod fsio;
mod manifest;
mod ops;
mod rows;

use clap::Parser;
use mapland_core::Error;

use crate::cli::{Cli, Cmd};
use crate::ops::{Ctx, VerificationFailure};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            std::process::exit(EXIT_CONFIG);
        }
        // Outputs never depend on the pool size, so failure to resize an
        // already-initialized pool is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let ctx = Ctx {
        jobs: cli.jobs,
        timings: cli.timings,
    };
    let result = match &cli.cmd {
        Cmd::Rerun(r) => ops::rerun(&r.manifest, r.out.as_deref(), &ctx),
        other => {
            let (spec, out) = other.to_spec().expect("every non-rerun command has a spec");
            ops::run_command(&spec, out.as_deref(), &ctx)
        }
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(exit_code(&err));
    }
}

/// Maps an error chain to the documented exit codes.
fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<VerificationFailure>().is_some() {
        return EXIT_VERIFY;
    }
    if let Some(core) = err.downcast_ref::<Error>() {
        return match core {
            Error::Config(_)
            | Error::Shape(_)
            | Error::Range(_)
            | Error::NotAPermutation(_)
            | Error::UndefinedCorrelation(_) => EXIT_CONFIG,
            Error::Io(_) | Error::Format(_) | Error::Checksum { .. } => EXIT_IO,
            Error::CapExceeded { .. } | Error::ExploreCapExceeded { .. } => EXIT_CAP,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_IO;
    }
    1
}
