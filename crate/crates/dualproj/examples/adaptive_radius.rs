//! Traces the adaptive sensing radius of the built-in heuristic policy.
//!
//! Feeds the policy hand-built observations for three scenarios — open
//! ground at speed, a wall 1.2 m ahead, and standing still — and prints
//! how the commanded radius converges in each. The policy reads only the
//! observation vector, so the maps here come from tiny synthetic clouds
//! rather than full scans.
//!
//! Run with: `cargo run --example adaptive_radius`

use dualproj::obsact::{assemble, ObsGains, ObservationVector, ProprioState, ACTION_DIMS};
use dualproj::projection::dual_maps;
use dualproj::sim::heuristic_radius_policy;

/// Observation for forward speed `v_fwd` with an optional wall straight
/// ahead at `obstacle_x` m, perception maps built at radius `prev_r`.
fn observe(v_fwd: f64, obstacle_x: Option<f64>, prev_r: f64) -> ObservationVector {
    use dualproj::geometry::{Frame, PointCloud};
    let points = obstacle_x.map_or(Vec::new(), |x| vec![[x, 0.0, 0.0]]);
    let cloud = PointCloud::new(points, Frame::Base).unwrap();
    let (e, d) = dual_maps(&cloud, prev_r).unwrap();
    let proprio = ProprioState {
        lin_vel: [v_fwd, 0.0, 0.0],
        ..ProprioState::neutral()
    };
    assemble(
        [v_fwd, 0.0, 0.0],
        &proprio,
        &[0.0; ACTION_DIMS],
        &e,
        &d,
        prev_r,
        &ObsGains::default(),
    )
    .unwrap()
}

fn trace(label: &str, v_fwd: f64, obstacle_x: Option<f64>, steps: usize) {
    let mut r = 3.0;
    print!("{label:<28} r: 3.00");
    for step in 1..=steps {
        let obs = observe(v_fwd, obstacle_x, r);
        r = heuristic_radius_policy(&obs).unwrap().r;
        if step % 5 == 0 {
            print!(" -> {r:.2}");
        }
    }
    println!();
}

fn main() {
    // Fast and unobstructed: radius opens to the 5 m cap.
    trace("open ground, v = 1.5 m/s", 1.5, None, 25);
    // Wall 1.2 m ahead: radius settles onto the obstacle distance.
    trace("wall at 1.2 m, v = 1.5 m/s", 1.5, Some(1.2), 40);
    // Standing still in the open: radius contracts to the 1 m floor.
    trace("standing still, open", 0.0, None, 40);
}
