//! Projects one scan into the dual perception maps and the voxel baseline.
//!
//! Shows the whole perception path: scan in the sensor frame, shift into
//! the base frame, build the 21x17 elevation map and 13x17 polar distance
//! map at two sensing radii, and contrast their footprint with the dense
//! 32x32x40 voxel grid built from the same cloud.
//!
//! Run with: `cargo run --example project_cloud`

use dualproj::geometry::{sensor_to_base, Pose};
use dualproj::lidar::{scan, ScanPattern, MOUNT_HEIGHT};
use dualproj::projection::{
    dimensionality_reduction, dual_maps, nearest_obstacle_distance, voxelize, ELEVATION_SENTINEL,
    SENSORY_DIMS, VOXEL_CELLS,
};
use dualproj::terrain::{assemble_track, TerrainKind, TrackSpec};

fn main() -> dualproj::Result<()> {
    let track = assemble_track(&TrackSpec {
        modules: vec![TerrainKind::NarrowGate, TerrainKind::Hurdle],
        difficulty: 0.5,
        obstacles_per_episode: 3,
        noise_amplitude: 0.02,
        seed: 11,
    })?;
    let pose = Pose::new([1.5, 0.0, 0.74], 0.0)?;
    let sensor_cloud = scan(&track, &pose, MOUNT_HEIGHT, &ScanPattern::perception())?;
    let base_cloud = sensor_to_base(&sensor_cloud, MOUNT_HEIGHT)?;
    println!("scan returned {} points", base_cloud.len());

    for r in [2.1, 5.0] {
        let (e, d) = dual_maps(&base_cloud, r)?;
        let filled = e.cells.iter().filter(|&&c| c != ELEVATION_SENTINEL).count();
        let hits = d.cells.iter().filter(|&&c| c < d.sentinel).count();
        println!(
            "r = {r:.1} m: elevation cell {:.3} m ({filled}/357 cells filled), \
             distance bins {:.3} m x {:.2} deg ({hits}/221 hit)",
            e.cell_size(),
            d.radial_step(),
            d.angular_step().to_degrees(),
        );
        let near = nearest_obstacle_distance(&d);
        if near < d.sentinel {
            println!("          nearest obstacle in the forward sector: {near:.2} m");
        } else {
            println!("          forward sector clear out to {:.1} m", d.sentinel);
        }
    }

    let grid = voxelize(&base_cloud)?;
    println!(
        "voxel baseline: {} cells, {} occupied; dual maps use {} dims \
         ({:.3} % of the grid)",
        VOXEL_CELLS,
        grid.occupied_count(),
        SENSORY_DIMS,
        100.0 * (1.0 - dimensionality_reduction())
    );
    Ok(())
}
