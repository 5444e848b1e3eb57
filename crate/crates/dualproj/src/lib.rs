//! Dual-projection terrain perception for a legged robot, desk-scale.
//!
//! The crate turns a synthetic LiDAR sweep of a procedurally generated
//! obstacle track into two compact, radius-scaled observation grids:
//!
//! * an **elevation map** `E` (21x17 cells, max point height per cell) for
//!   foothold geometry, and
//! * a **polar distance map** `D` (13 radial x 17 angular bins over a 90 deg
//!   forward sector, min point distance per bin) for walls, gates, poles and
//!   overhead beams.
//!
//! Both grids share a single *sensing radius* `r` in [1, 5] m that the policy
//! controls through its last action channel, so the same 578 observation
//! values can describe a 1 m close-up or a 5 m look-ahead.  A dense
//! 32x32x40 voxelizer is included as the baseline the dual projection
//! replaces (40960 cells vs. 578, a 98.6 % reduction).
//!
//! The remaining modules provide everything needed to exercise the pipeline
//! end to end without a physics engine: a curriculum-driven track generator
//! ([`terrain`]), a ray-cast LiDAR model with sensor corruption ([`lidar`]),
//! observation/action packing ([`obsact`]), the reward ledger ([`reward`]),
//! and a deterministic kinematic episode harness ([`sim`]).
//!
//! Run `cargo run --example adaptive_radius` for a tour, or use the thin
//! `dualproj` binary for the file-based workflows (`gen-terrain`, `scan`,
//! `project`, `episode`, `bench`).

pub mod cli;
pub mod geometry;
pub mod io;
pub mod lidar;
pub mod obsact;
pub mod projection;
pub mod reward;
pub mod sim;
pub mod terrain;

/// Crate-wide error type.
///
/// The variants deliberately mirror how the CLI reports failures: bad user
/// input (`Config`) exits with status 2, everything else with status 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside an operation's documented domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller broke an API contract (non-finite input, wrong shape, ...).
    #[error("contract violation: {0}")]
    Contract(String),
    /// A configuration file or CLI argument could not be used.
    #[error("config error: {0}")]
    Config(String),
    /// An underlying I/O operation failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Derives an independent stream seed from a base seed and a stream index.
///
/// Uses the splitmix64 finalizer so that consecutive indices produce
/// uncorrelated seeds; used for per-episode and per-subsystem RNG streams.
#[must_use]
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
