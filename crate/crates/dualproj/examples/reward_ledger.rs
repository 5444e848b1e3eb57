//! Prints the 17-term reward ledger for two hand-checked situations.
//!
//! First a walker standing perfectly still under a zero command with the
//! sensing radius parked on its ideal value — every tracking term maxes
//! out and the ledger totals exactly 3.65. Then the same walker drifting
//! sideways with a jerky radius, to show how the penalties engage.
//!
//! Run with: `cargo run --example reward_ledger`

use dualproj::reward::{
    assemble_terms, auxiliary_rewards, desired_radius, radius_adaptive_reward,
    radius_regularization, radius_smoothness, total_reward, tracking_reward, AuxInputs,
    RewardWeights, TERM_NAMES,
};

fn print_ledger(title: &str, terms: &[f64; 17], w: &RewardWeights) {
    let breakdown = total_reward(terms, w);
    println!("{title}");
    let weights = w.as_array();
    for (i, name) in TERM_NAMES.iter().enumerate() {
        if breakdown.weighted[i] != 0.0 {
            println!(
                "  {name:<24} {:>12.6} x {:>9.4} = {:>12.6}",
                terms[i], weights[i], breakdown.weighted[i]
            );
        }
    }
    println!("  {:<24} {:>38.6}\n", "total", breakdown.total);
}

fn main() -> dualproj::Result<()> {
    let w = RewardWeights::default();

    // Standing still, zero command, radius held exactly on its desired
    // value: both tracking exponentials and the adaptive term hit 1.
    let (lin, ang) = tracking_reward([0.0; 3], 0.0, [0.0; 3]);
    let aux = auxiliary_rewards(&AuxInputs::neutral())?;
    let terms_ideal = assemble_terms(
        lin,
        ang,
        aux,
        radius_adaptive_reward(3.0, 3.0),
        radius_smoothness(3.0, 3.0),
        radius_regularization(3.0),
    );
    print_ledger("standing still, radius on target (total = 3.65):", &terms_ideal, &w);

    // Drifting sideways at 0.5 m/s under a zero command, radius slewing
    // from 4.8 to 3.0 in one tick (smoothness + boundary penalties bite).
    let (lin2, ang2) = tracking_reward([0.0, 0.5, 0.0], 0.3, [0.0; 3]);
    let mut moving = AuxInputs::neutral();
    moving.gravity = [0.1, 0.0, -0.995];
    moving.ang_vel = [0.2, -0.1, 0.3];
    moving.joint_vel = [0.5; 12];
    moving.action = [0.3; 13];
    let aux2 = auxiliary_rewards(&moving)?;
    let terms2 = assemble_terms(
        lin2,
        ang2,
        aux2,
        radius_adaptive_reward(3.0, desired_radius(0.0, f64::INFINITY)),
        radius_smoothness(3.0, 4.8),
        radius_regularization(4.8),
    );
    print_ledger("drifting sideways, radius slewing:", &terms2, &w);
    Ok(())
}
