//! Observation-vector assembly and composite-action decomposition.
//!
//! The observation is a flat 628-value vector with a fixed component
//! layout: command, base velocities, gravity direction, joint state, the
//! previous action, both flattened perception maps, and the active sensing
//! radius.  Each component is scaled by a configurable gain; the distance
//! block is divided by the sensing radius so it always lands in `[0, 1]`
//! (empty cells read exactly 1.0).
//!
//! The action side turns a raw 13-channel policy output into 12 joint
//! targets plus the commanded sensing radius via a bounded smooth squash,
//! `r = 3 + 2*tanh(mu[12])`, so any real-valued channel lands in [1, 5] m.

use serde::{Deserialize, Serialize};

use crate::projection::{DistanceMap, ElevationMap, DIST_CELLS, ELEV_CELLS, RADIUS_MAX, RADIUS_MIN};
use crate::{Error, Result};

/// Actuated joints of the proxy walker.
pub const JOINT_COUNT: usize = 12;
/// Policy output channels (12 joints + 1 radius).
pub const ACTION_DIMS: usize = 13;
/// Flattened observation length.
pub const OBS_DIMS: usize = 49 + ELEV_CELLS + DIST_CELLS + 1;
/// Default joint-target scale `s_a`.
pub const DEFAULT_ACTION_SCALE: f64 = 0.25;

/// Proprioceptive state of the walker base and joints.
#[derive(Debug, Clone, PartialEq)]
pub struct ProprioState {
    /// Base linear velocity, m/s.
    pub lin_vel: [f64; 3],
    /// Base angular velocity, rad/s.
    pub ang_vel: [f64; 3],
    /// Gravity direction in the base frame (unit vector).
    pub gravity: [f64; 3],
    /// Joint positions, rad.
    pub joint_pos: [f64; JOINT_COUNT],
    /// Joint velocities, rad/s.
    pub joint_vel: [f64; JOINT_COUNT],
}

impl ProprioState {
    /// Upright rest state: zero motion, gravity straight down, joints at
    /// zero.
    #[must_use]
    pub fn neutral() -> Self {
        ProprioState {
            lin_vel: [0.0; 3],
            ang_vel: [0.0; 3],
            gravity: [0.0, 0.0, -1.0],
            joint_pos: [0.0; JOINT_COUNT],
            joint_vel: [0.0; JOINT_COUNT],
        }
    }

    /// Checks finiteness and the unit-gravity invariant.
    ///
    /// # Errors
    /// Returns a contract violation naming the offending field.
    pub fn validate(&self) -> Result<()> {
        let all_finite = self
            .lin_vel
            .iter()
            .chain(&self.ang_vel)
            .chain(&self.gravity)
            .chain(&self.joint_pos)
            .chain(&self.joint_vel)
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::Contract("proprioceptive state must be finite".into()));
        }
        let g2 = self.gravity.iter().map(|v| v * v).sum::<f64>();
        if (g2.sqrt() - 1.0).abs() > 1e-6 {
            return Err(Error::Contract(format!(
                "gravity direction must be unit length, |g| = {}",
                g2.sqrt()
            )));
        }
        Ok(())
    }
}

/// Per-component observation gains.
///
/// The distance block has no gain here: it is always divided by the
/// sensing radius (range normalization).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ObsGains {
    pub command: f64,
    pub lin_vel: f64,
    pub ang_vel: f64,
    pub gravity: f64,
    pub joint_pos: f64,
    pub joint_vel: f64,
    pub prev_action: f64,
    /// Elevation-map gain.
    pub height: f64,
    /// Sensing-radius gain (1/5 maps the [1, 5] m range into [0.2, 1]).
    pub radius: f64,
}

impl Default for ObsGains {
    fn default() -> Self {
        ObsGains {
            command: 1.0,
            lin_vel: 0.5,
            ang_vel: 0.25,
            gravity: 1.0,
            joint_pos: 1.0,
            joint_vel: 0.05,
            prev_action: 1.0,
            height: 1.0,
            radius: 0.2,
        }
    }
}

/// One component of the observation layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutEntry {
    pub name: &'static str,
    pub offset: usize,
    pub length: usize,
}

/// The canonical component layout covering `[0, 628)` contiguously.
#[must_use]
pub fn layout() -> Vec<LayoutEntry> {
    let table = [
        ("command", 3),
        ("lin_vel", 3),
        ("ang_vel", 3),
        ("gravity", 3),
        ("joint_pos", JOINT_COUNT),
        ("joint_vel", JOINT_COUNT),
        ("prev_action", ACTION_DIMS),
        ("elevation", ELEV_CELLS),
        ("distance", DIST_CELLS),
        ("radius", 1),
    ];
    let mut offset = 0;
    table
        .into_iter()
        .map(|(name, length)| {
            let e = LayoutEntry {
                name,
                offset,
                length,
            };
            offset += length;
            e
        })
        .collect()
}

/// A flat observation plus the layout table describing it.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationVector {
    pub values: Vec<f64>,
    pub layout: Vec<LayoutEntry>,
}

impl ObservationVector {
    /// Layout entry for a named component.
    #[must_use]
    pub fn component(&self, name: &str) -> Option<LayoutEntry> {
        self.layout.iter().copied().find(|e| e.name == name)
    }

    /// The value slice of a named component.
    #[must_use]
    pub fn slice(&self, name: &str) -> Option<&[f64]> {
        self.component(name)
            .map(|e| &self.values[e.offset..e.offset + e.length])
    }
}

/// Assembles the flat observation in canonical component order.
///
/// `prev_r` is the sensing radius the maps were built with (it also fills
/// the radius slot, scaled by `gains.radius`).
///
/// # Errors
/// Returns a contract violation for an invalid proprioceptive state,
/// wrongly shaped maps, a radius mismatch between the maps, or a
/// non-finite command/radius.
pub fn assemble(
    cmd: [f64; 3],
    s: &ProprioState,
    prev_action: &[f64; ACTION_DIMS],
    e: &ElevationMap,
    d: &DistanceMap,
    prev_r: f64,
    gains: &ObsGains,
) -> Result<ObservationVector> {
    s.validate()?;
    if !cmd.iter().all(|v| v.is_finite()) {
        return Err(Error::Contract("command must be finite".into()));
    }
    if !prev_action.iter().all(|v| v.is_finite()) {
        return Err(Error::Contract("prev_action must be finite".into()));
    }
    if e.cells.len() != ELEV_CELLS {
        return Err(Error::Contract(format!(
            "elevation map has {} cells, expected {ELEV_CELLS}",
            e.cells.len()
        )));
    }
    if d.cells.len() != DIST_CELLS {
        return Err(Error::Contract(format!(
            "distance map has {} cells, expected {DIST_CELLS}",
            d.cells.len()
        )));
    }
    if !prev_r.is_finite() || !(RADIUS_MIN..=RADIUS_MAX).contains(&prev_r) {
        return Err(Error::Contract(format!(
            "sensing radius must lie in [{RADIUS_MIN}, {RADIUS_MAX}], got {prev_r}"
        )));
    }
    if (e.radius - d.radius).abs() > 1e-12 {
        return Err(Error::Contract(format!(
            "map radii disagree: elevation {} vs distance {}",
            e.radius, d.radius
        )));
    }

    let mut values = Vec::with_capacity(OBS_DIMS);
    values.extend(cmd.iter().map(|v| v * gains.command));
    values.extend(s.lin_vel.iter().map(|v| v * gains.lin_vel));
    values.extend(s.ang_vel.iter().map(|v| v * gains.ang_vel));
    values.extend(s.gravity.iter().map(|v| v * gains.gravity));
    values.extend(s.joint_pos.iter().map(|v| v * gains.joint_pos));
    values.extend(s.joint_vel.iter().map(|v| v * gains.joint_vel));
    values.extend(prev_action.iter().map(|v| v * gains.prev_action));
    values.extend(e.cells.iter().map(|v| v * gains.height));
    // Range normalization: sentinel cells (= radius) read exactly 1.0.
    values.extend(d.cells.iter().map(|v| v / d.radius));
    values.push(prev_r * gains.radius);
    debug_assert_eq!(values.len(), OBS_DIMS);

    Ok(ObservationVector {
        values,
        layout: layout(),
    })
}

/// A decomposed policy output.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeAction {
    /// Raw policy output (12 joint channels + 1 radius channel).
    pub mu: [f64; ACTION_DIMS],
    /// Joint position targets, rad.
    pub q_target: [f64; JOINT_COUNT],
    /// Commanded sensing radius, m, in `[1, 5]`.
    pub r: f64,
}

/// Maps a sensing radius in `(1, 5)` back to the raw channel value that
/// decomposes to it (inverse of `r = 3 + 2*tanh(mu)`); the argument is
/// nudged inside the open interval so the boundary radii stay finite.
#[must_use]
pub fn radius_to_channel(r: f64) -> f64 {
    let t = ((r - 3.0) / 2.0).clamp(-(1.0 - 1e-12), 1.0 - 1e-12);
    t.atanh()
}

/// Splits a raw 13-channel output into joint targets and sensing radius.
///
/// `q_target = s_a * mu[0..12] + q_default`; the radius channel is squashed
/// by `r = 3 + 2*tanh(mu[12])` and clamped to `[1, 5]`.
///
/// # Errors
/// Returns a contract violation for non-finite `mu`, `q_default`, or a
/// non-finite/negative scale.
pub fn decompose_action(
    mu: &[f64; ACTION_DIMS],
    q_default: &[f64; JOINT_COUNT],
    s_a: f64,
) -> Result<CompositeAction> {
    if !mu.iter().all(|v| v.is_finite()) {
        return Err(Error::Contract("action channels must be finite".into()));
    }
    if !q_default.iter().all(|v| v.is_finite()) {
        return Err(Error::Contract("default joint posture must be finite".into()));
    }
    if !s_a.is_finite() {
        return Err(Error::Contract(format!("action scale must be finite, got {s_a}")));
    }
    let mut q_target = [0.0; JOINT_COUNT];
    for i in 0..JOINT_COUNT {
        q_target[i] = s_a * mu[i] + q_default[i];
    }
    let r = (3.0 + 2.0 * mu[ACTION_DIMS - 1].tanh()).clamp(RADIUS_MIN, RADIUS_MAX);
    Ok(CompositeAction {
        mu: *mu,
        q_target,
        r,
    })
}
