//! The per-step reward ledger: 17 weighted terms in a fixed canonical
//! order, including the three adaptive-perception terms and the
//! desired-radius rule they are anchored to.
//!
//! Every term function returns an *unweighted* value; [`total_reward`]
//! multiplies by the configured weights and accumulates in canonical order
//! so totals are bit-reproducible.  Penalty-style auxiliary terms return
//! positive magnitudes and rely on their negative default weights, while
//! the two radius shaping penalties (smoothness, regularization) are
//! defined as non-positive values, matching their published forms.

use serde::{Deserialize, Serialize};

use crate::obsact::{ACTION_DIMS, JOINT_COUNT};
use crate::projection::{RADIUS_MAX, RADIUS_MIN};
use crate::{Error, Result};

/// Number of reward terms.
pub const TERM_COUNT: usize = 17;

/// Canonical term order (the order used by every 17-element array here).
pub const TERM_NAMES: [&str; TERM_COUNT] = [
    "lin_tracking",
    "ang_tracking",
    "orientation",
    "ang_vel_xy",
    "hip",
    "dof_vel",
    "dof_acc",
    "action_rate",
    "energy",
    "collision",
    "penetrate",
    "dof_limits",
    "alive",
    "air_time",
    "radius_adaptive",
    "radius_smoothness",
    "radius_regularization",
];

/// Joint indices treated as hip joints by the hip-neutrality term.
pub const HIP_JOINTS: [usize; 4] = [1, 2, 7, 8];

/// Gaussian width of the radius-adaptive term, m.
pub const RADIUS_SIGMA: f64 = 0.5;
/// Width of the boundary bands penalized by radius regularization, m.
pub const RADIUS_BOUNDARY_BAND: f64 = 0.25;

/// One weight per reward term; defaults are the published values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RewardWeights {
    pub lin_tracking: f64,
    pub ang_tracking: f64,
    pub orientation: f64,
    pub ang_vel_xy: f64,
    pub hip: f64,
    pub dof_vel: f64,
    pub dof_acc: f64,
    pub action_rate: f64,
    pub energy: f64,
    pub collision: f64,
    pub penetrate: f64,
    pub dof_limits: f64,
    pub alive: f64,
    pub air_time: f64,
    pub radius_adaptive: f64,
    pub radius_smoothness: f64,
    pub radius_regularization: f64,
}

impl Default for RewardWeights {
    fn default() -> Self {
        RewardWeights {
            lin_tracking: 2.0,
            ang_tracking: 0.5,
            orientation: -1.0,
            ang_vel_xy: -0.3,
            hip: -1.0,
            dof_vel: -1e-3,
            dof_acc: -2.5e-7,
            action_rate: -0.01,
            energy: -2.5e-7,
            collision: -3.0,
            penetrate: -1.0,
            dof_limits: -5.0,
            alive: 0.15,
            air_time: 5.0,
            radius_adaptive: 1.0,
            radius_smoothness: -0.1,
            radius_regularization: -0.1,
        }
    }
}

impl RewardWeights {
    /// Parses weights from TOML text; omitted keys keep their defaults.
    ///
    /// # Errors
    /// Returns a config error for malformed TOML or non-finite values.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let w: RewardWeights =
            toml::from_str(text).map_err(|e| Error::Config(format!("reward weights: {e}")))?;
        if !w.as_array().iter().all(|v| v.is_finite()) {
            return Err(Error::Config("reward weights must be finite".into()));
        }
        Ok(w)
    }

    /// Weights as an array in canonical term order.
    #[must_use]
    pub fn as_array(&self) -> [f64; TERM_COUNT] {
        [
            self.lin_tracking,
            self.ang_tracking,
            self.orientation,
            self.ang_vel_xy,
            self.hip,
            self.dof_vel,
            self.dof_acc,
            self.action_rate,
            self.energy,
            self.collision,
            self.penetrate,
            self.dof_limits,
            self.alive,
            self.air_time,
            self.radius_adaptive,
            self.radius_smoothness,
            self.radius_regularization,
        ]
    }
}

// ------------------------------------------------------------ task terms --

/// Velocity-tracking pair: `lin = exp(-|v_xy - cmd_xy|^2)` and
/// `ang = exp(-(w_z - cmd_yaw)^2)`.  Perfect tracking returns `(1, 1)`.
#[must_use]
pub fn tracking_reward(v: [f64; 3], omega_z: f64, cmd: [f64; 3]) -> (f64, f64) {
    let ex = v[0] - cmd[0];
    let ey = v[1] - cmd[1];
    let lin = (-(ex * ex + ey * ey)).exp();
    let ew = omega_z - cmd[2];
    let ang = (-(ew * ew)).exp();
    (lin, ang)
}

// ---------------------------------------------------------- radius terms --

/// Target sensing radius for the current forward speed and obstacle
/// proximity: `clamp(min(1 + (8/3) * v_fwd, d_obs), 1, 5)`.
///
/// High speed in the open drives the target to 5 m (reached at 1.5 m/s);
/// nearby clutter caps it at the obstacle distance; it never leaves
/// `[1, 5]`.  `d_obs` may be infinite (nothing sensed).
#[must_use]
pub fn desired_radius(v_fwd: f64, d_obs: f64) -> f64 {
    (1.0 + (8.0 / 3.0) * v_fwd).min(d_obs).clamp(RADIUS_MIN, RADIUS_MAX)
}

/// Gaussian alignment of the commanded radius with its target:
/// `exp(-(r - r_star)^2 / sigma^2)` with sigma = 0.5 m.  Peak value 1.
#[must_use]
pub fn radius_adaptive_reward(r: f64, r_star: f64) -> f64 {
    let d = r - r_star;
    (-(d * d) / (RADIUS_SIGMA * RADIUS_SIGMA)).exp()
}

/// Frame-to-frame radius variation penalty: `-(r_t - r_prev)^2` (<= 0).
#[must_use]
pub fn radius_smoothness(r_t: f64, r_prev: f64) -> f64 {
    let d = r_t - r_prev;
    -(d * d)
}

/// Saturation penalty: quadratic hinges inside the 0.25 m bands at both
/// ends of `[1, 5]`, normalized so full saturation costs exactly 1:
/// `-(max(0, r - 4.75)^2 + max(0, 1.25 - r)^2) / 0.25^2`.
#[must_use]
pub fn radius_regularization(r: f64) -> f64 {
    let hi = (r - (RADIUS_MAX - RADIUS_BOUNDARY_BAND)).max(0.0);
    let lo = ((RADIUS_MIN + RADIUS_BOUNDARY_BAND) - r).max(0.0);
    -(hi * hi + lo * lo) / (RADIUS_BOUNDARY_BAND * RADIUS_BOUNDARY_BAND)
}

// ------------------------------------------------------- auxiliary terms --

/// Everything the auxiliary terms need from the walker: proprioception,
/// action history, actuation, and the per-step safety/contact flags.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxInputs {
    /// Gravity direction in the base frame (unit vector).
    pub gravity: [f64; 3],
    /// Base angular velocity, rad/s.
    pub ang_vel: [f64; 3],
    /// Joint positions, rad.
    pub joint_pos: [f64; JOINT_COUNT],
    /// Joint velocities, rad/s.
    pub joint_vel: [f64; JOINT_COUNT],
    /// Joint velocities one control step earlier, rad/s.
    pub prev_joint_vel: [f64; JOINT_COUNT],
    /// Control period, s (> 0).
    pub dt: f64,
    /// Current raw action (13 channels).
    pub action: [f64; ACTION_DIMS],
    /// Previous raw action.
    pub prev_action: [f64; ACTION_DIMS],
    /// Joint torques, N m.
    pub torques: [f64; JOINT_COUNT],
    /// Nominal joint posture the hip term measures against, rad.
    pub q_default: [f64; JOINT_COUNT],
    /// Body/obstacle collision this step.
    pub collision: bool,
    /// Interpenetration depth of the body into obstacles, m (>= 0).
    pub penetration_depth: f64,
    /// Number of joints at their position limit.
    pub joints_at_limit: usize,
    /// Foot air-time credit from the contact timer, s.
    pub air_time: f64,
}

impl AuxInputs {
    /// Level, stationary, contact-free state (every penalty zero).
    #[must_use]
    pub fn neutral() -> Self {
        AuxInputs {
            gravity: [0.0, 0.0, -1.0],
            ang_vel: [0.0; 3],
            joint_pos: [0.0; JOINT_COUNT],
            joint_vel: [0.0; JOINT_COUNT],
            prev_joint_vel: [0.0; JOINT_COUNT],
            dt: 0.02,
            action: [0.0; ACTION_DIMS],
            prev_action: [0.0; ACTION_DIMS],
            torques: [0.0; JOINT_COUNT],
            q_default: [0.0; JOINT_COUNT],
            collision: false,
            penetration_depth: 0.0,
            joints_at_limit: 0,
            air_time: 0.0,
        }
    }
}

/// The twelve auxiliary terms, unweighted, in canonical order:
/// orientation, ang_vel_xy, hip, dof_vel, dof_acc, action_rate, energy,
/// collision, penetrate, dof_limits, alive, air_time.
///
/// Penalty terms return positive magnitudes (their default weights are
/// negative):
/// * orientation: `g_x^2 + g_y^2` (deviation from upright),
/// * ang_vel_xy: `w_x^2 + w_y^2` (roll/pitch rates),
/// * hip: squared hip-joint deviation from the nominal posture,
/// * dof_vel / dof_acc: squared joint velocity / finite-difference
///   acceleration sums,
/// * action_rate: squared change of the 12 joint channels (the radius
///   channel has its own smoothness term),
/// * energy: squared torque sum,
/// * collision: indicator (1 on contact), penetrate: depth in m,
/// * dof_limits: count of joints at their limit,
/// * alive: constant 1, air_time: the contact-timer credit.
///
/// # Errors
/// Returns a contract violation for non-finite fields, `dt <= 0`, or a
/// negative penetration depth.
pub fn auxiliary_rewards(aux: &AuxInputs) -> Result<[f64; 12]> {
    let finite = aux
        .gravity
        .iter()
        .chain(&aux.ang_vel)
        .chain(&aux.joint_pos)
        .chain(&aux.joint_vel)
        .chain(&aux.prev_joint_vel)
        .chain(&aux.action)
        .chain(&aux.prev_action)
        .chain(&aux.torques)
        .chain(&aux.q_default)
        .all(|v| v.is_finite());
    if !finite {
        return Err(Error::Contract("auxiliary reward inputs must be finite".into()));
    }
    if !(aux.dt > 0.0) || !aux.dt.is_finite() {
        return Err(Error::Contract(format!("dt must be positive, got {}", aux.dt)));
    }
    if !aux.penetration_depth.is_finite() || aux.penetration_depth < 0.0 {
        return Err(Error::Contract(format!(
            "penetration depth must be >= 0, got {}",
            aux.penetration_depth
        )));
    }

    let orientation = aux.gravity[0] * aux.gravity[0] + aux.gravity[1] * aux.gravity[1];
    let ang_vel_xy = aux.ang_vel[0] * aux.ang_vel[0] + aux.ang_vel[1] * aux.ang_vel[1];
    let hip = HIP_JOINTS
        .iter()
        .map(|&i| {
            let d = aux.joint_pos[i] - aux.q_default[i];
            d * d
        })
        .sum();
    let dof_vel = aux.joint_vel.iter().map(|v| v * v).sum();
    let dof_acc = aux
        .joint_vel
        .iter()
        .zip(&aux.prev_joint_vel)
        .map(|(v, pv)| {
            let a = (v - pv) / aux.dt;
            a * a
        })
        .sum();
    let action_rate = (0..JOINT_COUNT)
        .map(|i| {
            let d = aux.action[i] - aux.prev_action[i];
            d * d
        })
        .sum();
    let energy = aux.torques.iter().map(|t| t * t).sum();
    let collision = if aux.collision { 1.0 } else { 0.0 };

    Ok([
        orientation,
        ang_vel_xy,
        hip,
        dof_vel,
        dof_acc,
        action_rate,
        energy,
        collision,
        aux.penetration_depth,
        aux.joints_at_limit as f64,
        1.0,
        aux.air_time,
    ])
}

// ----------------------------------------------------------- aggregation --

/// Per-step reward record: raw terms, weighted terms, and the total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RewardBreakdown {
    /// Unweighted term values in canonical order.
    pub terms: [f64; TERM_COUNT],
    /// `weights[i] * terms[i]` in canonical order.
    pub weighted: [f64; TERM_COUNT],
    /// Sum of the weighted terms, accumulated in canonical order.
    pub total: f64,
}

impl RewardBreakdown {
    /// Weighted value of a named term.
    #[must_use]
    pub fn weighted_term(&self, name: &str) -> Option<f64> {
        TERM_NAMES
            .iter()
            .position(|&n| n == name)
            .map(|i| self.weighted[i])
    }
}

/// Stitches the task, auxiliary, and radius terms into one canonical
/// 17-element term vector.
#[must_use]
pub fn assemble_terms(
    lin: f64,
    ang: f64,
    aux: [f64; 12],
    radius_adaptive: f64,
    radius_smooth: f64,
    radius_reg: f64,
) -> [f64; TERM_COUNT] {
    let mut t = [0.0; TERM_COUNT];
    t[0] = lin;
    t[1] = ang;
    t[2..14].copy_from_slice(&aux);
    t[14] = radius_adaptive;
    t[15] = radius_smooth;
    t[16] = radius_reg;
    t
}

/// Weighted-sum aggregation: `total = sum_i w_i * terms_i` in canonical
/// order, with the full breakdown retained.
#[must_use]
pub fn total_reward(terms: &[f64; TERM_COUNT], w: &RewardWeights) -> RewardBreakdown {
    let weights = w.as_array();
    let mut weighted = [0.0; TERM_COUNT];
    let mut total = 0.0;
    for i in 0..TERM_COUNT {
        weighted[i] = weights[i] * terms[i];
        total += weighted[i];
    }
    RewardBreakdown {
        terms: *terms,
        weighted,
        total,
    }
}
