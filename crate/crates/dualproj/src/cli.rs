//! Command-line operator surface: terrain generation, scanning,
//! projection, episode batches, and the projection-cost benchmark.
//!
//! Exit codes: 0 on success, 2 for configuration problems (bad flags,
//! malformed config/input files, out-of-range parameters), 1 for runtime
//! failures.  `DUALPROJ_THREADS` caps the worker pool used for episode
//! batches.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{heightfield_sample, sensor_to_base, Frame, PointCloud, Pose};
use crate::io::{
    read_cloud, read_track, write_cloud, write_episode_rows, write_layout_json, write_map_csv,
    write_map_pgm, write_trace_csv, write_track, EpisodeRow,
};
use crate::lidar::{scan, ScanPattern, MOUNT_HEIGHT};
use crate::projection::{
    dimensionality_reduction, dual_maps, voxelize, DIST_NR, DIST_NTH, ELEVATION_SENTINEL,
    ELEV_NX, ELEV_NY, RADIUS_MAX, RADIUS_MIN, SENSORY_DIMS, VOXEL_CELLS,
};
use crate::sim::{
    run_episode_on, ExternalPolicy, HeuristicRadiusPolicy, Policy, BASE_HEIGHT,
};
use crate::terrain::{assemble_track, TrackSpec};
use crate::{derive_seed, Error, Result};

/// Top-level argument grammar.
#[derive(Debug, Parser)]
#[command(
    name = "dualproj",
    version,
    about = "Dual-projection perception maps, procedural obstacle tracks, and a deterministic episode harness"
)]
pub struct Cli {
    /// Base seed for every stochastic stage (overrides seeds found in
    /// config files).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Cmd,
}

/// Available subcommands.
#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Generate a track from a TOML spec and export it to a directory.
    GenTerrain {
        /// Track spec file (TOML).
        spec: PathBuf,
        /// Output directory (heightfield.csv, obstacles.csv, meta.json).
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Scan an exported track with the synthetic sensor and save the
    /// point cloud.
    Scan {
        /// Track directory produced by gen-terrain.
        track: PathBuf,
        /// Walker pose as `x,y,yaw`; the sensor rides the mount height
        /// above a base standing on the local ground.
        #[arg(long, allow_hyphen_values = true)]
        pose: String,
        /// Output cloud (.csv, .bin, or .dppc); points are written in the
        /// walker base frame.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Project a base-frame cloud into the elevation and distance maps.
    Project {
        /// Input cloud (.csv, .bin, or .dppc) in the walker base frame.
        cloud: PathBuf,
        /// Sensing radius in meters, within [1, 5].
        #[arg(long)]
        radius: f64,
        /// Output directory (E/D as CSV and PGM previews, observation
        /// layout sidecar).
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run a batch of episodes and write one JSONL result row each.
    Episode {
        /// Track spec file (TOML).
        spec: PathBuf,
        /// Controller driving the walker.
        #[arg(long, value_enum)]
        policy: PolicyKind,
        /// Shell command hosting an external policy (newline-delimited
        /// JSON: observation array in, 13-channel action array out).
        #[arg(long)]
        external_cmd: Option<String>,
        /// Commanded forward speed, m/s.
        #[arg(long)]
        speed: f64,
        /// Number of episodes; per-episode seeds derive from the base
        /// seed.
        #[arg(long)]
        seeds: usize,
        /// Output JSONL path.
        #[arg(short, long)]
        out: PathBuf,
        /// Also dump the first episode's per-step trace CSV here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Compare dual-projection and voxel build costs on a random cloud.
    Bench {
        /// Cloud size.
        #[arg(long, default_value_t = 100_000)]
        points: usize,
        /// Timed repetitions per method (the median is reported).
        #[arg(long, default_value_t = 50)]
        repeats: usize,
        /// Sensing radius for the dual projection, m.
        #[arg(long, default_value_t = 5.0)]
        radius: f64,
        /// Output JSON report path (printed to stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Episode controllers selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyKind {
    /// Built-in radius controller tracking the desired-radius rule.
    Heuristic,
    /// Child process speaking newline-delimited JSON over stdio.
    External,
}

/// Entry point used by the binary: parses arguments, runs, and maps the
/// outcome to the documented exit codes.
#[must_use]
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version to stdout (exit 0) and usage
            // errors to stderr (exit 2).
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    init_thread_pool();
    match run(cli) {
        Ok(()) => 0,
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Applies `DUALPROJ_THREADS` to the global worker pool.
fn init_thread_pool() {
    if let Ok(raw) = env::var("DUALPROJ_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring DUALPROJ_THREADS={raw} (want a positive integer)"),
        }
    }
}

/// Runs one parsed invocation.
///
/// # Errors
/// Returns config errors for unusable inputs and runtime errors from the
/// underlying operations.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Cmd::GenTerrain { spec, out } => gen_terrain(&spec, &out, cli.seed),
        Cmd::Scan { track, pose, out } => run_scan(&track, &pose, &out),
        Cmd::Project { cloud, radius, out } => project(&cloud, radius, &out),
        Cmd::Episode {
            spec,
            policy,
            external_cmd,
            speed,
            seeds,
            out,
            trace,
        } => episode_batch(
            &spec,
            policy,
            external_cmd.as_deref(),
            speed,
            seeds,
            &out,
            trace.as_deref(),
            cli.seed,
        ),
        Cmd::Bench {
            points,
            repeats,
            radius,
            out,
        } => bench(points, repeats, radius, out.as_deref(), cli.seed),
    }
}

fn require_exists(path: &Path, what: &str) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{what} `{}` does not exist",
            path.display()
        )))
    }
}

fn load_track_spec(path: &Path, seed_override: Option<u64>) -> Result<TrackSpec> {
    require_exists(path, "track spec")?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut spec = TrackSpec::from_toml_str(&text)?;
    if let Some(seed) = seed_override {
        spec.seed = seed;
    }
    Ok(spec)
}

fn gen_terrain(spec_path: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let spec = load_track_spec(spec_path, seed)?;
    let track = assemble_track(&spec)?;
    write_track(out, &track)?;
    println!(
        "track: {} modules, {:.1} m, {} obstacle boxes -> {}",
        track.segments.len(),
        track.total_length,
        track.obstacles.len(),
        out.display()
    );
    Ok(())
}

fn parse_pose(text: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "--pose wants `x,y,yaw`, got `{text}`"
        )));
    }
    let mut pose = [0.0; 3];
    for (slot, token) in pose.iter_mut().zip(&parts) {
        *slot = token
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("--pose: `{}` is not a number", token.trim())))?;
    }
    Ok(pose)
}

fn run_scan(track_dir: &Path, pose_text: &str, out: &Path) -> Result<()> {
    require_exists(track_dir, "track directory")?;
    let track = read_track(track_dir)?;
    let [x, y, yaw] = parse_pose(pose_text)?;
    if !track.heightfield.contains(x, y) {
        return Err(Error::Config(format!(
            "pose ({x}, {y}) lies outside the track footprint"
        )));
    }
    let ground = heightfield_sample(&track.heightfield, x, y)?;
    let pose = Pose::new([x, y, ground + BASE_HEIGHT], yaw)?;
    let cloud = scan(&track, &pose, MOUNT_HEIGHT, &ScanPattern::full())?;
    let cloud = sensor_to_base(&cloud, MOUNT_HEIGHT)?;
    write_cloud(out, &cloud)?;
    println!("{} points -> {}", cloud.len(), out.display());
    Ok(())
}

fn project(cloud_path: &Path, radius: f64, out: &Path) -> Result<()> {
    require_exists(cloud_path, "cloud file")?;
    if !radius.is_finite() || !(RADIUS_MIN..=RADIUS_MAX).contains(&radius) {
        return Err(Error::Config(format!(
            "--radius must lie in [{RADIUS_MIN}, {RADIUS_MAX}], got {radius}"
        )));
    }
    let cloud = read_cloud(cloud_path, Frame::Base)?;
    let (elevation, distance) = dual_maps(&cloud, radius)?;
    fs::create_dir_all(out)?;
    write_map_csv(&out.join("E.csv"), &elevation.cells, ELEV_NX, ELEV_NY)?;
    write_map_csv(&out.join("D.csv"), &distance.cells, DIST_NR, DIST_NTH)?;
    write_map_pgm(&out.join("E.pgm"), &elevation.cells, ELEV_NX, ELEV_NY)?;
    write_map_pgm(&out.join("D.pgm"), &distance.cells, DIST_NR, DIST_NTH)?;
    write_layout_json(&out.join("layout.json"))?;
    println!(
        "E {}x{} + D {}x{} at r = {radius} m -> {}",
        ELEV_NX,
        ELEV_NY,
        DIST_NR,
        DIST_NTH,
        out.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn episode_batch(
    spec_path: &Path,
    policy: PolicyKind,
    external_cmd: Option<&str>,
    speed: f64,
    seeds: usize,
    out: &Path,
    trace: Option<&Path>,
    seed_override: Option<u64>,
) -> Result<()> {
    if !speed.is_finite() {
        return Err(Error::Config(format!("--speed must be finite, got {speed}")));
    }
    if seeds == 0 {
        return Err(Error::Config("--seeds must be at least 1".into()));
    }
    if policy == PolicyKind::External && external_cmd.is_none() {
        return Err(Error::Config(
            "--policy external requires --external-cmd".into(),
        ));
    }
    let spec = load_track_spec(spec_path, seed_override)?;
    spec.validate()?;
    let base_seed = spec.seed;
    let cmd = [speed, 0.0, 0.0];

    let run_one = |index: u64| -> Result<(EpisodeRow, crate::sim::EpisodeResult)> {
        let episode_seed = derive_seed(base_seed, index);
        let mut track_spec = spec.clone();
        track_spec.seed = derive_seed(episode_seed, 0);
        let track = assemble_track(&track_spec)?;
        let mut controller: Box<dyn Policy> = match policy {
            PolicyKind::Heuristic => Box::new(HeuristicRadiusPolicy),
            PolicyKind::External => Box::new(ExternalPolicy::spawn(
                external_cmd.expect("checked above"),
            )?),
        };
        let result = run_episode_on(&track, controller.as_mut(), cmd, episode_seed)?;
        let row = EpisodeRow {
            seed: episode_seed,
            kinds: track.kinds(),
            c: spec.difficulty,
            cmd,
            r_succ: result.r_succ,
            r_trav: result.r_trav,
            termination: result.termination,
            mean_radius: result.mean_radius(),
        };
        Ok((row, result))
    };

    // Episodes are independent; farm them out and keep seed order.
    let outcomes: Result<Vec<_>> = (0..seeds as u64).into_par_iter().map(run_one).collect();
    let outcomes = outcomes?;
    let rows: Vec<EpisodeRow> = outcomes.iter().map(|(row, _)| row.clone()).collect();
    write_episode_rows(out, &rows)?;
    if let Some(trace_path) = trace {
        write_trace_csv(trace_path, &outcomes[0].1)?;
    }

    let completed = rows
        .iter()
        .filter(|r| r.termination == crate::sim::Termination::Completed)
        .count();
    println!(
        "{} episodes ({} completed) -> {}",
        rows.len(),
        completed,
        out.display()
    );
    Ok(())
}

/// Per-method benchmark figures.
#[derive(Debug, Serialize)]
struct BenchMethod {
    /// Observation dimensionality of the representation.
    dims: usize,
    /// Cloud size processed per build.
    points: usize,
    /// Cells that received data on the benchmark cloud.
    cells_written: usize,
    /// Median wall time per build, ns (timing — excluded from
    /// reproducibility comparisons).
    median_build_ns: u128,
}

/// Benchmark report comparing the two representations.
#[derive(Debug, Serialize)]
struct BenchReport {
    points: usize,
    repeats: usize,
    radius: f64,
    seed: u64,
    dual: BenchMethod,
    voxel: BenchMethod,
    /// `1 - dual_dims / voxel_dims`.
    reduction: f64,
    /// Voxel median build time over dual median build time.
    speedup_vs_voxel: f64,
}

fn median_ns(samples: &mut [u128]) -> u128 {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

fn bench(
    points: usize,
    repeats: usize,
    radius: f64,
    out: Option<&Path>,
    seed: Option<u64>,
) -> Result<()> {
    if points == 0 || repeats == 0 {
        return Err(Error::Config("--points and --repeats must be positive".into()));
    }
    if !radius.is_finite() || !(RADIUS_MIN..=RADIUS_MAX).contains(&radius) {
        return Err(Error::Config(format!(
            "--radius must lie in [{RADIUS_MIN}, {RADIUS_MAX}], got {radius}"
        )));
    }
    let seed = seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cloud = PointCloud::new(
        (0..points)
            .map(|_| {
                [
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(-0.8..1.2),
                ]
            })
            .collect(),
        Frame::Base,
    )?;

    // Warm-up builds keep first-touch costs out of both medians.
    let (elevation, distance) = dual_maps(&cloud, radius)?;
    let voxels = voxelize(&cloud)?;

    let mut dual_ns = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let built = dual_maps(&cloud, radius)?;
        dual_ns.push(start.elapsed().as_nanos());
        std::hint::black_box(&built);
    }
    let mut voxel_ns = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let built = voxelize(&cloud)?;
        voxel_ns.push(start.elapsed().as_nanos());
        std::hint::black_box(&built);
    }

    let dual_cells = elevation
        .cells
        .iter()
        .filter(|v| **v != ELEVATION_SENTINEL)
        .count()
        + distance.cells.iter().filter(|v| **v != distance.sentinel).count();
    let dual_median = median_ns(&mut dual_ns);
    let voxel_median = median_ns(&mut voxel_ns);
    let report = BenchReport {
        points,
        repeats,
        radius,
        seed,
        dual: BenchMethod {
            dims: SENSORY_DIMS,
            points,
            cells_written: dual_cells,
            median_build_ns: dual_median,
        },
        voxel: BenchMethod {
            dims: VOXEL_CELLS,
            points,
            cells_written: voxels.occupied_count(),
            median_build_ns: voxel_median,
        },
        reduction: dimensionality_reduction(),
        speedup_vs_voxel: voxel_median as f64 / dual_median as f64,
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Contract(format!("report serialization: {e}")))?;
    match out {
        Some(path) => {
            fs::write(path, json + "\n")?;
            println!(
                "dual {} ns vs voxel {} ns median -> {}",
                dual_median,
                voxel_median,
                path.display()
            );
        }
        None => println!("{json}"),
    }
    Ok(())
}
