//! Desk-scale episode engine: a kinematic proxy walker closed-loop with a
//! pluggable policy over the standard observation/action interfaces, plus
//! success metrics and the difficulty curriculum.
//!
//! The walker is a stand-in for a trained locomotion controller: it tracks
//! the commanded velocity exactly, follows the terrain surface, and raises
//! failure events from simple geometric rules (body overlap, infeasible
//! step height, insufficient overhead clearance).  That keeps every
//! perception, reward, and metric pathway exercised with deterministic,
//! testable semantics.

use std::io::{BufRead, BufReader, Write as _};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{heightfield_sample, sensor_to_base, wrap_angle, Pose};
use crate::lidar::{corrupt, scan, ScanPattern, SensorNoise, MOUNT_HEIGHT};
use crate::obsact::{
    assemble, decompose_action, CompositeAction, ObsGains, ObservationVector, ProprioState,
    ACTION_DIMS, DEFAULT_ACTION_SCALE, JOINT_COUNT,
};
use crate::projection::{
    dual_maps, nearest_obstacle_distance, DistanceMap, ElevationMap, RADIUS_MAX, RADIUS_MIN,
};
use crate::reward::{
    assemble_terms, auxiliary_rewards, desired_radius, radius_adaptive_reward,
    radius_regularization, radius_smoothness, total_reward, tracking_reward, AuxInputs,
    RewardWeights,
};
use crate::terrain::{assemble_track, TrackLayout, TrackSpec};
use crate::{derive_seed, Error, Result};

/// Height of the base origin above the local ground, m.  Anchors the
/// base-frame ground band used by the vertical distance map.
pub const BASE_HEIGHT: f64 = 0.74;
/// Overhead clearance needed to walk upright, m above the feet.
pub const STANDING_HEIGHT: f64 = 1.2;
/// Overhead clearance needed when crouching, m above the feet.
pub const CROUCH_CLEARANCE: f64 = 0.8;
/// Largest single-tick ground rise the walker can step onto, m.
pub const MAX_STEP_HEIGHT: f64 = 0.3;
/// Radius of the body footprint disc used for overlap tests, m.
pub const BODY_RADIUS: f64 = 0.2;
/// Control period, s (50 Hz).
pub const DT: f64 = 0.02;
/// Perception refresh interval in control steps (50 Hz / 5 = 10 Hz).
pub const PERCEPTION_DECIMATION: usize = 5;
/// Episode step cap (60 s of control time).
pub const MAX_STEPS: usize = 3000;
/// Largest sensing radius that counts as fine-grained detection when a
/// crouch is demanded; crouching with a wider radius fails the episode.
pub const CROUCH_RADIUS_MAX: f64 = 3.0;
/// Spawn position along the track (middle of the 3 m spawn pad), m.
pub const SPAWN_X: f64 = 1.5;
/// Proprioception latency bounds, s; one value is drawn per episode and
/// rounded to whole control ticks.
pub const LATENCY_RANGE: [f64; 2] = [0.005, 0.045];
/// Smoothing factor of the heuristic radius controller's EMA.
pub const RADIUS_EMA_ALPHA: f64 = 0.2;
/// Curriculum difficulty increment/decrement per episode.
pub const CURRICULUM_STEP: f64 = 0.05;

// -------------------------------------------------------------- walker ----

/// Kinematic proxy walker state.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    /// World base pose; `position[2]` tracks ground + [`BASE_HEIGHT`].
    pub pose: Pose,
    /// Height of the base origin above the feet, m (> 0).
    pub base_height: f64,
    /// Commanded `[v_x, v_y, yaw_rate]` in the base frame.
    pub v_cmd: [f64; 3],
    /// Realized base-frame linear velocity (zero until the first step).
    pub lin_vel: [f64; 3],
    /// Realized base angular velocity.
    pub ang_vel: [f64; 3],
    /// Feet in ground contact (the proxy never leaves the surface).
    pub in_contact: bool,
    /// Joints currently pinned at a position limit (proxy: none).
    pub joints_at_limit: usize,
    /// Control steps taken.
    pub steps: usize,
    /// Raw action applied on the previous step.
    pub prev_action: [f64; ACTION_DIMS],
    /// Sensing radius commanded on the previous step, m.
    pub prev_radius: f64,
}

impl WalkerState {
    /// Places a walker at rest on the spawn pad of `track`.
    ///
    /// # Errors
    /// Returns a contract violation for a non-finite command and a domain
    /// error if the track has no ground at the spawn point.
    pub fn spawn(track: &TrackLayout, v_cmd: [f64; 3]) -> Result<Self> {
        if !v_cmd.iter().all(|v| v.is_finite()) {
            return Err(Error::Contract("command velocity must be finite".into()));
        }
        let ground = heightfield_sample(&track.heightfield, SPAWN_X, 0.0)?;
        Ok(WalkerState {
            pose: Pose::new([SPAWN_X, 0.0, ground + BASE_HEIGHT], 0.0)?,
            base_height: BASE_HEIGHT,
            v_cmd,
            lin_vel: [0.0; 3],
            ang_vel: [0.0; 3],
            in_contact: true,
            joints_at_limit: 0,
            steps: 0,
            prev_action: [0.0; ACTION_DIMS],
            prev_radius: 0.5 * (RADIUS_MIN + RADIUS_MAX),
        })
    }

    /// Proprioceptive snapshot of the current state (proxy posture: all
    /// joints at their defaults, zero joint motion, upright gravity).
    #[must_use]
    pub fn proprio(&self) -> ProprioState {
        ProprioState {
            lin_vel: self.lin_vel,
            ang_vel: self.ang_vel,
            gravity: [0.0, 0.0, -1.0],
            joint_pos: [0.0; JOINT_COUNT],
            joint_vel: [0.0; JOINT_COUNT],
        }
    }
}

// -------------------------------------------------------------- events ----

/// Safety events raised by [`step`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    /// The body disc overlapped an obstacle box at body height.
    Collision {
        /// Depth the disc interpenetrates the box footprint, m.
        penetration: f64,
    },
    /// The ground rose more than [`MAX_STEP_HEIGHT`] in a single tick.
    InfeasibleFoothold {
        /// Single-tick rise that was demanded, m.
        rise: f64,
    },
    /// An overhead obstacle leaves crouch room but not standing room;
    /// passable only with fine-grained sensing engaged (r <= 3 m).
    CrouchRequired {
        /// Whether the commanded radius satisfied the crouch rule.
        satisfied: bool,
    },
}

impl Event {
    /// True when the event terminates the episode.
    #[must_use]
    pub fn is_failure(&self) -> bool {
        match self {
            Event::Collision { .. } | Event::InfeasibleFoothold { .. } => true,
            Event::CrouchRequired { satisfied } => !satisfied,
        }
    }
}

/// How an episode ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Reached the end of the track.
    Completed,
    /// A failure event fired (collision, infeasible foothold, or a crouch
    /// demand the radius did not satisfy).
    Collision,
    /// Hit the [`MAX_STEPS`] cap.
    StepLimit,
}

// ---------------------------------------------------------------- step ----

/// Distance from a point to an axis-aligned rectangle (0 inside).
fn point_rect_distance(x: f64, y: f64, lo: [f64; 3], hi: [f64; 3]) -> f64 {
    let dx = x - x.clamp(lo[0], hi[0]);
    let dy = y - y.clamp(lo[1], hi[1]);
    (dx * dx + dy * dy).sqrt()
}

/// Advances the walker one control tick and reports safety events.
///
/// The walker moves `v_cmd * dt` along its heading, then settles onto the
/// effective ground: the heightfield surface, raised by any box whose top
/// is within [`MAX_STEP_HEIGHT`] of the local ground and directly under
/// the body center (walkable platforms such as low hurdles).  Boxes
/// overlapping the body disc are classified by clearance: bottoms at or
/// above [`STANDING_HEIGHT`] are ignored, bottoms in the crouch band emit
/// [`Event::CrouchRequired`] (judged against `action.r`), and anything
/// lower is a collision.  A single-tick ground rise beyond
/// [`MAX_STEP_HEIGHT`] emits [`Event::InfeasibleFoothold`].
///
/// `prev_action`/`prev_radius` are left for the caller to update once the
/// step's reward has been charged.
///
/// # Errors
/// Returns a contract violation for a non-positive `dt`.
pub fn step(
    walker: &WalkerState,
    track: &TrackLayout,
    action: &CompositeAction,
    dt: f64,
) -> Result<(WalkerState, Vec<Event>)> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Contract(format!("dt must be positive, got {dt}")));
    }

    let (sin_yaw, cos_yaw) = walker.pose.yaw.sin_cos();
    let vx_world = cos_yaw * walker.v_cmd[0] - sin_yaw * walker.v_cmd[1];
    let vy_world = sin_yaw * walker.v_cmd[0] + cos_yaw * walker.v_cmd[1];
    let bounds = track.heightfield.bounds();
    let x = (walker.pose.position[0] + vx_world * dt).clamp(bounds[0], bounds[1]);
    let y = (walker.pose.position[1] + vy_world * dt).clamp(bounds[2], bounds[3]);
    let yaw = wrap_angle(walker.pose.yaw + walker.v_cmd[2] * dt);

    let ground = heightfield_sample(&track.heightfield, x, y)?;
    let prev_foot = walker.pose.position[2] - walker.base_height;

    let mut effective_ground = ground;
    let mut events = Vec::new();
    for obstacle in &track.obstacles {
        let lo = obstacle.min_corner();
        let hi = obstacle.max_corner();
        let dist = point_rect_distance(x, y, lo, hi);
        if dist > BODY_RADIUS {
            continue;
        }
        let rel_top = hi[2] - ground;
        let rel_bottom = lo[2] - ground;
        if rel_top <= MAX_STEP_HEIGHT + 1e-9 {
            // Walkable platform; it carries the feet while the body center
            // is over it.
            let center_on = x >= lo[0] && x <= hi[0] && y >= lo[1] && y <= hi[1];
            if center_on {
                effective_ground = effective_ground.max(hi[2]);
            }
        } else if rel_bottom >= STANDING_HEIGHT - 1e-9 {
            // Clears the head entirely.
        } else if rel_bottom >= CROUCH_CLEARANCE - 1e-9 {
            events.push(Event::CrouchRequired {
                satisfied: action.r <= CROUCH_RADIUS_MAX + 1e-9,
            });
        } else {
            events.push(Event::Collision {
                penetration: BODY_RADIUS - dist,
            });
        }
    }

    let rise = effective_ground - prev_foot;
    if rise > MAX_STEP_HEIGHT + 1e-9 {
        events.push(Event::InfeasibleFoothold { rise });
    }

    let mut next = walker.clone();
    next.pose = Pose::new([x, y, effective_ground + BASE_HEIGHT], yaw)?;
    next.lin_vel = walker.v_cmd;
    next.ang_vel = [0.0, 0.0, walker.v_cmd[2]];
    next.steps = walker.steps + 1;
    Ok((next, events))
}

// -------------------------------------------------------------- policies --

/// A controller driving the walker: observation in, composite action out.
pub trait Policy {
    /// Called once before each episode.
    fn reset(&mut self) {}

    /// Maps an observation to an action.
    ///
    /// # Errors
    /// Implementations report malformed observations or their own I/O
    /// failures.
    fn act(&mut self, obs: &ObservationVector) -> Result<CompositeAction>;
}

/// Reference radius controller: tracks the desired-radius rule with an
/// exponential moving average, joints held at their defaults.
///
/// Everything is read back out of the observation through its layout
/// table (assuming default observation gains): forward speed from the
/// `lin_vel` block, the previous radius from the `radius` slot, and the
/// nearest obstacle from the minimum of the `distance` block (a block
/// minimum of 1.0 means nothing is in range).  The new radius is
/// `(1 - alpha) * r_prev + alpha * r_star` with alpha = 0.2, emitted
/// through the squashed radius channel.
///
/// # Errors
/// Returns a contract violation when the observation layout lacks a
/// required component.
pub fn heuristic_radius_policy(obs: &ObservationVector) -> Result<CompositeAction> {
    let gains = ObsGains::default();
    let missing = |name: &str| Error::Contract(format!("observation layout lacks `{name}`"));
    let lin_vel = obs.slice("lin_vel").ok_or_else(|| missing("lin_vel"))?;
    let distance = obs.slice("distance").ok_or_else(|| missing("distance"))?;
    let radius = obs.slice("radius").ok_or_else(|| missing("radius"))?;

    let v_fwd = lin_vel[0] / gains.lin_vel;
    let prev_r = (radius[0] / gains.radius).clamp(RADIUS_MIN, RADIUS_MAX);
    let min_norm = distance.iter().copied().fold(f64::INFINITY, f64::min);
    let d_obs = if min_norm >= 1.0 - 1e-9 {
        f64::INFINITY
    } else {
        min_norm * prev_r
    };

    let r_star = desired_radius(v_fwd, d_obs);
    let r_new = (1.0 - RADIUS_EMA_ALPHA) * prev_r + RADIUS_EMA_ALPHA * r_star;
    let mut mu = [0.0; ACTION_DIMS];
    mu[ACTION_DIMS - 1] = crate::obsact::radius_to_channel(r_new);
    decompose_action(&mu, &[0.0; JOINT_COUNT], DEFAULT_ACTION_SCALE)
}

/// [`Policy`] wrapper around [`heuristic_radius_policy`].
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicRadiusPolicy;

impl Policy for HeuristicRadiusPolicy {
    fn act(&mut self, obs: &ObservationVector) -> Result<CompositeAction> {
        heuristic_radius_policy(obs)
    }
}

/// A policy hosted by a child process speaking newline-delimited JSON:
/// each observation is written to its stdin as a JSON array of 628
/// numbers, and each reply line on its stdout must be a JSON array of 13
/// numbers (the raw action channels).
pub struct ExternalPolicy {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

impl ExternalPolicy {
    /// Spawns `command` through `sh -c` with piped standard streams.
    ///
    /// # Errors
    /// Returns a config error when the process cannot be started.
    pub fn spawn(command: &str) -> Result<Self> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| Error::Config(format!("external policy `{command}`: {e}")))?;
        let stdin = child
            .stdin
            .take()
            .ok_or_else(|| Error::Config("external policy stdin unavailable".into()))?;
        let stdout = child
            .stdout
            .take()
            .ok_or_else(|| Error::Config("external policy stdout unavailable".into()))?;
        Ok(ExternalPolicy {
            child,
            stdin,
            stdout: BufReader::new(stdout),
        })
    }
}

impl Policy for ExternalPolicy {
    fn act(&mut self, obs: &ObservationVector) -> Result<CompositeAction> {
        let line = serde_json::to_string(&obs.values)
            .map_err(|e| Error::Contract(format!("observation serialization: {e}")))?;
        self.stdin.write_all(line.as_bytes())?;
        self.stdin.write_all(b"\n")?;
        self.stdin.flush()?;

        let mut reply = String::new();
        let n = self.stdout.read_line(&mut reply)?;
        if n == 0 {
            return Err(Error::Contract(
                "external policy closed its output stream".into(),
            ));
        }
        let channels: Vec<f64> = serde_json::from_str(reply.trim())
            .map_err(|e| Error::Contract(format!("external policy reply: {e}")))?;
        let mu: [f64; ACTION_DIMS] = channels.try_into().map_err(|v: Vec<f64>| {
            Error::Contract(format!(
                "external policy returned {} channels, expected {ACTION_DIMS}",
                v.len()
            ))
        })?;
        decompose_action(&mu, &[0.0; JOINT_COUNT], DEFAULT_ACTION_SCALE)
    }
}

impl Drop for ExternalPolicy {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

// ------------------------------------------------------------- episodes --

/// Outcome of one episode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpisodeResult {
    /// Fraction of track segments cleared without a failure event.
    pub r_succ: f64,
    /// Final forward position normalized by track length, in `[0, 1]`.
    pub r_trav: f64,
    /// Commanded sensing radius at every step, m.
    pub radius_trace: Vec<f64>,
    /// Total reward at every step.
    pub reward_trace: Vec<f64>,
    /// Walker ground position after every step, m.
    pub xy_trace: Vec<[f64; 2]>,
    /// How the episode ended.
    pub termination: Termination,
    /// Final forward position, m.
    pub final_x: f64,
    /// Control steps taken.
    pub steps: usize,
}

impl EpisodeResult {
    /// Mean of the radius trace (0 for an empty trace).
    #[must_use]
    pub fn mean_radius(&self) -> f64 {
        if self.radius_trace.is_empty() {
            return 0.0;
        }
        self.radius_trace.iter().sum::<f64>() / self.radius_trace.len() as f64
    }
}

/// Draws the episode's proprioception latency and rounds it to control
/// ticks (0.005-0.045 s at 50 Hz gives 0, 1, or 2 ticks).
pub fn sample_latency_ticks(rng: &mut ChaCha8Rng) -> usize {
    let latency = rng.gen_range(LATENCY_RANGE[0]..=LATENCY_RANGE[1]);
    (latency / DT).round() as usize
}

/// Runs one closed-loop episode on an already-built track.
///
/// Per control step (50 Hz): refresh the point cloud and dual maps every
/// [`PERCEPTION_DECIMATION`] steps (10 Hz) at the walker's current radius,
/// assemble the observation (proprioception read through the episode's
/// latency delay), query the policy, advance the walker, and charge the
/// full reward ledger.  Terminates on a failure event (`collision`),
/// reaching the end of the track (`completed`), or [`MAX_STEPS`]
/// (`step_limit`).
///
/// `seed` drives the episode's independent sensor-noise and latency
/// streams; the track itself is taken as given.
///
/// # Errors
/// Propagates policy, scanning, and projection failures.
pub fn run_episode_on(
    track: &TrackLayout,
    policy: &mut dyn Policy,
    cmd: [f64; 3],
    seed: u64,
) -> Result<EpisodeResult> {
    let mut noise_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1));
    let mut latency_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2));
    let latency_ticks = sample_latency_ticks(&mut latency_rng);
    let sensor_noise = SensorNoise::default();
    let pattern = ScanPattern::perception();
    let gains = ObsGains::default();
    let weights = RewardWeights::default();

    policy.reset();
    let mut walker = WalkerState::spawn(track, cmd)?;
    let mut proprio_history: Vec<ProprioState> = vec![walker.proprio()];
    let mut maps: Option<(ElevationMap, DistanceMap)> = None;
    let mut radius_trace = Vec::new();
    let mut reward_trace = Vec::new();
    let mut xy_trace = Vec::new();
    let mut termination = Termination::StepLimit;
    let mut final_x = walker.pose.position[0];

    for t in 0..MAX_STEPS {
        if t % PERCEPTION_DECIMATION == 0 {
            let cloud = scan(track, &walker.pose, MOUNT_HEIGHT, &pattern)?;
            let cloud = corrupt(&cloud, &sensor_noise, &mut noise_rng);
            let cloud = sensor_to_base(&cloud, MOUNT_HEIGHT)?;
            maps = Some(dual_maps(&cloud, walker.prev_radius)?);
        }
        let (elevation, distance) = maps.as_ref().expect("maps are built on step 0");

        let delayed = &proprio_history[t.saturating_sub(latency_ticks)];
        let obs = assemble(
            cmd,
            delayed,
            &walker.prev_action,
            elevation,
            distance,
            walker.prev_radius,
            &gains,
        )?;
        let action = policy.act(&obs)?;
        let (next, events) = step(&walker, track, &action, DT)?;

        // Reward ledger for this step, from ground-truth quantities.
        let nearest = nearest_obstacle_distance(distance);
        let d_obs = if nearest >= distance.radius - 1e-12 {
            f64::INFINITY
        } else {
            nearest
        };
        let r_star = desired_radius(next.lin_vel[0], d_obs);
        let penetration = events
            .iter()
            .filter_map(|e| match e {
                Event::Collision { penetration } => Some(*penetration),
                _ => None,
            })
            .fold(0.0, f64::max);
        let aux_inputs = AuxInputs {
            gravity: [0.0, 0.0, -1.0],
            ang_vel: next.ang_vel,
            joint_pos: [0.0; JOINT_COUNT],
            joint_vel: [0.0; JOINT_COUNT],
            prev_joint_vel: [0.0; JOINT_COUNT],
            dt: DT,
            action: action.mu,
            prev_action: walker.prev_action,
            torques: [0.0; JOINT_COUNT],
            q_default: [0.0; JOINT_COUNT],
            collision: events.iter().any(|e| matches!(e, Event::Collision { .. })),
            penetration_depth: penetration,
            joints_at_limit: next.joints_at_limit,
            air_time: 0.0,
        };
        let aux = auxiliary_rewards(&aux_inputs)?;
        let (lin, ang) = tracking_reward(next.lin_vel, next.ang_vel[2], cmd);
        let terms = assemble_terms(
            lin,
            ang,
            aux,
            radius_adaptive_reward(action.r, r_star),
            radius_smoothness(action.r, walker.prev_radius),
            radius_regularization(action.r),
        );
        radius_trace.push(action.r);
        reward_trace.push(total_reward(&terms, &weights).total);

        let failed = events.iter().any(Event::is_failure);
        walker = next;
        walker.prev_action = action.mu;
        walker.prev_radius = action.r;
        final_x = walker.pose.position[0];
        xy_trace.push([walker.pose.position[0], walker.pose.position[1]]);
        proprio_history.push(walker.proprio());

        if failed {
            termination = Termination::Collision;
            break;
        }
        if final_x >= track.total_length - 1e-9 {
            // Snap to the exact track end so a completed episode reports
            // R_trav = 1 and clears every segment even when the walkable
            // bound or the 0.02 m/step stride leaves float dust behind.
            final_x = track.total_length;
            termination = Termination::Completed;
            break;
        }
    }

    let cleared = track
        .segments
        .iter()
        .filter(|s| final_x + 1e-9 >= s[1])
        .count();
    Ok(EpisodeResult {
        r_succ: cleared as f64 / track.segments.len().max(1) as f64,
        r_trav: (final_x / track.total_length).clamp(0.0, 1.0),
        radius_trace,
        reward_trace,
        xy_trace,
        termination,
        final_x,
        steps: walker.steps,
    })
}

/// Builds the track for `spec` (terrain stream derived from `seed`) and
/// runs one episode on it.  `(spec, policy, cmd, seed)` fully determine
/// the result.
///
/// # Errors
/// Propagates track assembly and episode failures.
pub fn run_episode(
    spec: &TrackSpec,
    policy: &mut dyn Policy,
    cmd: [f64; 3],
    seed: u64,
) -> Result<EpisodeResult> {
    let mut track_spec = spec.clone();
    track_spec.seed = derive_seed(seed, 0);
    let track = assemble_track(&track_spec)?;
    run_episode_on(&track, policy, cmd, seed)
}

// ------------------------------------------------------------ curriculum --

/// Difficulty scheduler state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurriculumState {
    /// Current difficulty in `[0, 1]`.
    pub difficulty: f64,
    /// Promote (raise difficulty) when `r_succ` is at or above this.
    pub promote_threshold: f64,
    /// Demote when `r_succ` is at or below this.
    pub demote_threshold: f64,
}

impl Default for CurriculumState {
    fn default() -> Self {
        CurriculumState {
            difficulty: 0.0,
            promote_threshold: 0.8,
            demote_threshold: 0.3,
        }
    }
}

/// Moves difficulty up or down by [`CURRICULUM_STEP`] according to the
/// episode's success rate, clamped to `[0, 1]`.
#[must_use]
pub fn curriculum_update(state: &CurriculumState, result: &EpisodeResult) -> CurriculumState {
    let mut next = *state;
    if result.r_succ >= state.promote_threshold {
        next.difficulty += CURRICULUM_STEP;
    } else if result.r_succ <= state.demote_threshold {
        next.difficulty -= CURRICULUM_STEP;
    }
    next.difficulty = next.difficulty.clamp(0.0, 1.0);
    next
}
