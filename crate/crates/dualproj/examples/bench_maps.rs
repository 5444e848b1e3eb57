//! Times the dual-projection build against the voxel baseline.
//!
//! Builds both representations from the same 100k-point cloud fifty
//! times each and compares median build times and output footprints
//! (578 map cells vs 40960 voxel cells). The `dualproj bench`
//! subcommand emits the same comparison as JSON.
//!
//! Run with: `cargo run --release --example bench_maps`

use std::hint::black_box;
use std::time::Instant;

use dualproj::geometry::{Frame, PointCloud};
use dualproj::projection::{dual_maps, voxelize, SENSORY_DIMS, VOXEL_CELLS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn median_ns(samples: &mut [u128]) -> u128 {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

fn main() -> dualproj::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let points: Vec<[f64; 3]> = (0..100_000)
        .map(|_| {
            [
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-0.8..1.2),
            ]
        })
        .collect();
    let cloud = PointCloud::new(points, Frame::Base)?;
    let repeats = 50;

    // Warm-up, then timed repeats.
    black_box(dual_maps(&cloud, 5.0)?);
    black_box(voxelize(&cloud)?);

    let mut dual_ns = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let t = Instant::now();
        black_box(dual_maps(&cloud, 5.0)?);
        dual_ns.push(t.elapsed().as_nanos());
    }
    let mut voxel_ns = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let t = Instant::now();
        black_box(voxelize(&cloud)?);
        voxel_ns.push(t.elapsed().as_nanos());
    }

    let dual_med = median_ns(&mut dual_ns);
    let voxel_med = median_ns(&mut voxel_ns);
    println!("100000 points, {repeats} repeats each:");
    println!("  dual maps  ({SENSORY_DIMS:>5} dims): median {:>8.3} ms", dual_med as f64 / 1e6);
    println!("  voxel grid ({VOXEL_CELLS:>5} dims): median {:>8.3} ms", voxel_med as f64 / 1e6);
    println!("  speedup vs voxel: {:.2}x", voxel_med as f64 / dual_med as f64);
    Ok(())
}
