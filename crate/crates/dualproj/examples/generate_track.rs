//! Generates a procedural obstacle track and writes it to disk.
//!
//! Builds a five-module track from a mixed module pool at mid difficulty,
//! prints the realized layout, and saves the heightfield, obstacle list,
//! and metadata under a temporary directory (the same on-disk format the
//! `dualproj gen-terrain` subcommand produces).
//!
//! Run with: `cargo run --example generate_track`

use dualproj::io::write_track;
use dualproj::terrain::{assemble_track, TerrainKind, TrackSpec};

fn main() -> dualproj::Result<()> {
    let spec = TrackSpec {
        modules: vec![
            TerrainKind::Hurdle,
            TerrainKind::StairsUp,
            TerrainKind::Beam,
            TerrainKind::NarrowGate,
            TerrainKind::Jump,
        ],
        difficulty: 0.5,
        obstacles_per_episode: 5,
        noise_amplitude: 0.03,
        seed: 42,
    };
    let track = assemble_track(&spec)?;

    println!("track of {:.1} m, {} modules:", track.total_length, track.modules.len());
    let mut x = track.segments.first().map_or(0.0, |s| s[0]);
    for (module, seg) in track.modules.iter().zip(&track.segments) {
        println!(
            "  [{:5.1} .. {:5.1}] {:12} length {:.2} m",
            seg[0],
            seg[1],
            module.kind.name(),
            module.length
        );
        x = seg[1];
    }
    println!("  exit at x = {x:.1} m");
    println!(
        "heightfield: {} x {} nodes at {} m; {} obstacle boxes",
        track.heightfield.nx,
        track.heightfield.ny,
        track.heightfield.cell,
        track.obstacles.len()
    );

    let out = std::env::temp_dir().join("dualproj_track_demo");
    std::fs::create_dir_all(&out)?;
    write_track(&out, &track)?;
    println!("wrote heightfield.csv, obstacles.csv, meta.json to {}", out.display());
    Ok(())
}
