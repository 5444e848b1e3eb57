//! Runs a batch of episodes and feeds the results to the curriculum rule.
//!
//! Ten seeded episodes of the heuristic policy walking a flat track at
//! 1.0 m/s, each with its own procedurally generated terrain, sensor
//! noise, and proprioception latency. Afterwards the per-episode success
//! ratio drives the difficulty update rule.
//!
//! Run with: `cargo run --example episode_batch`

use dualproj::sim::{
    curriculum_update, run_episode, CurriculumState, HeuristicRadiusPolicy,
};
use dualproj::terrain::{TerrainKind, TrackSpec};

fn main() -> dualproj::Result<()> {
    let spec = TrackSpec {
        modules: vec![TerrainKind::Plane],
        difficulty: 0.0,
        obstacles_per_episode: 5,
        noise_amplitude: 0.03,
        seed: 0, // replaced per episode inside run_episode
    };

    let mut curriculum = CurriculumState::default();
    println!("seed  steps  final_x  r_succ  r_trav  mean_r  termination");
    for seed in 0..10u64 {
        let mut policy = HeuristicRadiusPolicy;
        let result = run_episode(&spec, &mut policy, [1.0, 0.0, 0.0], seed)?;
        println!(
            "{seed:>4}  {:>5}  {:>7.2}  {:>6.2}  {:>6.2}  {:>6.2}  {:?}",
            result.steps,
            result.final_x,
            result.r_succ,
            result.r_trav,
            result.mean_radius(),
            result.termination
        );
        let next = curriculum_update(&curriculum, &result);
        if (next.difficulty - curriculum.difficulty).abs() > 0.0 {
            println!(
                "      curriculum: difficulty {:.2} -> {:.2}",
                curriculum.difficulty, next.difficulty
            );
        }
        curriculum = next;
    }
    println!("final difficulty after 10 episodes: {:.2}", curriculum.difficulty);
    Ok(())
}
