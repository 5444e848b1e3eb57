//! Drives an episode with a policy living in a separate process.
//!
//! The protocol is newline-delimited JSON over standard streams: the
//! harness writes each 628-dim observation to the child's stdin as one
//! JSON array per line and reads one 13-number JSON array (12 joint
//! channels + 1 radius channel) back per step. The child here is a shell
//! one-liner that ignores its input and always answers with a fixed
//! action whose radius channel decodes to r = 3 + 2*tanh(0.25) ≈ 3.49 m.
//!
//! Run with: `cargo run --example external_policy`

use dualproj::sim::{run_episode, ExternalPolicy};
use dualproj::terrain::{TerrainKind, TrackSpec};

fn main() -> dualproj::Result<()> {
    let spec = TrackSpec {
        modules: vec![TerrainKind::Plane],
        difficulty: 0.0,
        obstacles_per_episode: 5,
        noise_amplitude: 0.03,
        seed: 0,
    };
    let fixed = "[0,0,0,0,0,0,0,0,0,0,0,0,0.25]";
    let mut policy = ExternalPolicy::spawn(&format!(
        "while read -r obs; do echo '{fixed}'; done"
    ))?;
    let result = run_episode(&spec, &mut policy, [1.0, 0.0, 0.0], 4)?;
    println!(
        "external child walked {:.1} m in {} steps: r_succ {:.2}, r_trav {:.2}, \
         mean radius {:.2} m, {:?}",
        result.final_x,
        result.steps,
        result.r_succ,
        result.r_trav,
        result.mean_radius(),
        result.termination
    );
    Ok(())
}
