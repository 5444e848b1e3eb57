//! Frames, poses, point clouds, heightfields, box obstacles and ray casting.
//!
//! Conventions used throughout the crate:
//!
//! * World frame: `x` forward along the track, `y` left, `z` up.
//! * Base frame: origin at the robot base, `x` forward along the heading
//!   (yaw), axes otherwise world-aligned (the proxy walker never rolls or
//!   pitches).
//! * Sensor frame: base-aligned axes, origin at the sensor head (base origin
//!   plus a vertical mount offset).
//!
//! Heights are meters; angles are radians; yaw is wrapped to `[-pi, pi)`.

use crate::terrain::TerrainKind;
use crate::{Error, Result};

/// Residual tolerance for the heightfield ray-march bisection refinement, m.
pub const RAY_MARCH_TOL: f64 = 1e-4;

/// Unit-length tolerance accepted by [`ray_cast`] for direction vectors.
pub const DIR_UNIT_TOL: f64 = 1e-9;

// ---------------------------------------------------------------- frames --

/// Coordinate frame a [`PointCloud`] is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Sensor-centered, base-aligned axes.
    Sensor,
    /// Robot-base-centered, yaw-aligned axes.
    Base,
    /// Track/world coordinates.
    World,
}

/// Planar robot pose: position plus heading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    /// Position of the base origin in world coordinates, m.
    pub position: [f64; 3],
    /// Heading about +z, wrapped to `[-pi, pi)`, rad.
    pub yaw: f64,
}

impl Pose {
    /// Creates a pose, wrapping `yaw` into `[-pi, pi)`.
    ///
    /// # Errors
    /// Returns a contract violation if any component is non-finite.
    pub fn new(position: [f64; 3], yaw: f64) -> Result<Self> {
        if !position.iter().all(|v| v.is_finite()) || !yaw.is_finite() {
            return Err(Error::Contract("pose components must be finite".into()));
        }
        Ok(Self {
            position,
            yaw: wrap_angle(yaw),
        })
    }
}

/// Wraps an angle into `[-pi, pi)`.
#[must_use]
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::PI;
    let two_pi = 2.0 * PI;
    let mut w = (a + PI).rem_euclid(two_pi) - PI;
    // rem_euclid can land exactly on +pi for inputs like -pi - eps.
    if w >= PI {
        w -= two_pi;
    }
    w
}

// ---------------------------------------------------------- point clouds --

/// A set of 3D points tagged with the frame they are expressed in.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<[f64; 3]>,
    pub frame: Frame,
}

impl PointCloud {
    /// Creates a cloud after checking every coordinate is finite.
    ///
    /// # Errors
    /// Returns a contract violation if any coordinate is non-finite.
    pub fn new(points: Vec<[f64; 3]>, frame: Frame) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !p.iter().all(|v| v.is_finite()) {
                return Err(Error::Contract(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
        }
        Ok(Self { points, frame })
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Rotates `p` by `yaw` about +z.
#[inline]
#[must_use]
fn rot_z(p: [f64; 3], yaw: f64) -> [f64; 3] {
    let (s, c) = yaw.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]]
}

/// Transforms a world-frame cloud into the base frame of `pose`.
///
/// # Errors
/// Returns a contract violation if the cloud is not world-framed.
pub fn world_to_base(cloud: &PointCloud, pose: &Pose) -> Result<PointCloud> {
    if cloud.frame != Frame::World {
        return Err(Error::Contract(format!(
            "world_to_base expects a world-frame cloud, got {:?}",
            cloud.frame
        )));
    }
    let points = cloud
        .points
        .iter()
        .map(|p| {
            let d = [
                p[0] - pose.position[0],
                p[1] - pose.position[1],
                p[2] - pose.position[2],
            ];
            rot_z(d, -pose.yaw)
        })
        .collect();
    Ok(PointCloud {
        points,
        frame: Frame::Base,
    })
}

/// Transforms a base-frame cloud back into world coordinates.
///
/// # Errors
/// Returns a contract violation if the cloud is not base-framed.
pub fn base_to_world(cloud: &PointCloud, pose: &Pose) -> Result<PointCloud> {
    if cloud.frame != Frame::Base {
        return Err(Error::Contract(format!(
            "base_to_world expects a base-frame cloud, got {:?}",
            cloud.frame
        )));
    }
    let points = cloud
        .points
        .iter()
        .map(|p| {
            let r = rot_z(*p, pose.yaw);
            [
                r[0] + pose.position[0],
                r[1] + pose.position[1],
                r[2] + pose.position[2],
            ]
        })
        .collect();
    Ok(PointCloud {
        points,
        frame: Frame::World,
    })
}

/// Shifts a sensor-frame cloud down into the base frame.
///
/// The sensor shares the base axes and sits `mount_height` m above the base
/// origin, so the transform is a pure +z offset of every point.
///
/// # Errors
/// Returns a contract violation if the cloud is not sensor-framed.
pub fn sensor_to_base(cloud: &PointCloud, mount_height: f64) -> Result<PointCloud> {
    if cloud.frame != Frame::Sensor {
        return Err(Error::Contract(format!(
            "sensor_to_base expects a sensor-frame cloud, got {:?}",
            cloud.frame
        )));
    }
    let points = cloud
        .points
        .iter()
        .map(|p| [p[0], p[1], p[2] + mount_height])
        .collect();
    Ok(PointCloud {
        points,
        frame: Frame::Base,
    })
}

// ----------------------------------------------------------- heightfield --

/// Regular grid of terrain heights with bilinear sampling.
///
/// `heights[i * ny + j]` is the surface height at node
/// `(origin.x + i*cell, origin.y + j*cell)`; the sampled footprint is the
/// closed rectangle spanned by the outermost nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightField {
    /// World position of node (0, 0), m.
    pub origin: [f64; 2],
    /// Node spacing, m (> 0).
    pub cell: f64,
    /// Node count along x.
    pub nx: usize,
    /// Node count along y.
    pub ny: usize,
    /// Row-major node heights (`nx * ny` values), m.
    pub heights: Vec<f64>,
    /// Largest node height, m (cached for ray-march early exit).
    pub max_height: f64,
}

impl HeightField {
    /// Creates a heightfield, validating shape and cell size.
    ///
    /// # Errors
    /// Returns a contract violation for an empty grid, a non-positive cell
    /// size, or a `heights` length that does not match `nx * ny`.
    pub fn new(origin: [f64; 2], cell: f64, nx: usize, ny: usize, heights: Vec<f64>) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::Contract(format!(
                "heightfield needs at least 2x2 nodes, got {nx}x{ny}"
            )));
        }
        if !(cell > 0.0) || !cell.is_finite() {
            return Err(Error::Contract(format!("cell size must be positive, got {cell}")));
        }
        if heights.len() != nx * ny {
            return Err(Error::Contract(format!(
                "heights length {} does not match {nx}x{ny}",
                heights.len()
            )));
        }
        if !heights.iter().all(|h| h.is_finite()) {
            return Err(Error::Contract("heightfield heights must be finite".into()));
        }
        let max_height = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            origin,
            cell,
            nx,
            ny,
            heights,
            max_height,
        })
    }

    /// Height at node `(i, j)`.
    #[inline]
    #[must_use]
    pub fn node(&self, i: usize, j: usize) -> f64 {
        self.heights[i * self.ny + j]
    }

    /// Inclusive sampling bounds `[x_min, x_max, y_min, y_max]`.
    #[must_use]
    pub fn bounds(&self) -> [f64; 4] {
        [
            self.origin[0],
            self.origin[0] + (self.nx - 1) as f64 * self.cell,
            self.origin[1],
            self.origin[1] + (self.ny - 1) as f64 * self.cell,
        ]
    }

    /// True if `(x, y)` lies inside the sampled footprint.
    #[must_use]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let b = self.bounds();
        x >= b[0] && x <= b[1] && y >= b[2] && y <= b[3]
    }

    /// Bilinear sample without the domain check; callers must ensure
    /// `contains(x, y)`.
    #[must_use]
    fn sample_unchecked(&self, x: f64, y: f64) -> f64 {
        let fx = (x - self.origin[0]) / self.cell;
        let fy = (y - self.origin[1]) / self.cell;
        // Clamp the cell index so queries on the max edge use the last cell
        // with a fractional coordinate of exactly 1.
        let i = (fx.floor() as usize).min(self.nx - 2);
        let j = (fy.floor() as usize).min(self.ny - 2);
        let tx = fx - i as f64;
        let ty = fy - j as f64;
        let h00 = self.node(i, j);
        let h10 = self.node(i + 1, j);
        let h01 = self.node(i, j + 1);
        let h11 = self.node(i + 1, j + 1);
        let h0 = h00 * (1.0 - tx) + h10 * tx;
        let h1 = h01 * (1.0 - tx) + h11 * tx;
        h0 * (1.0 - ty) + h1 * ty
    }
}

/// Bilinearly interpolated terrain height at `(x, y)`.
///
/// # Errors
/// Returns a domain error when the query point lies outside the field's
/// footprint.
pub fn heightfield_sample(hf: &HeightField, x: f64, y: f64) -> Result<f64> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::Contract("sample coordinates must be finite".into()));
    }
    if !hf.contains(x, y) {
        let b = hf.bounds();
        return Err(Error::Domain(format!(
            "({x:.3}, {y:.3}) outside heightfield footprint x in [{:.3}, {:.3}], y in [{:.3}, {:.3}]",
            b[0], b[1], b[2], b[3]
        )));
    }
    Ok(hf.sample_unchecked(x, y))
}

// -------------------------------------------------------- box obstacles --

/// Axis-aligned box obstacle tagged with the terrain archetype it realizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxObstacle {
    /// Box center in world coordinates, m.
    pub center: [f64; 3],
    /// Half extents along x/y/z, m (each > 0).
    pub half_extents: [f64; 3],
    /// Terrain archetype this box belongs to.
    pub kind: TerrainKind,
}

impl BoxObstacle {
    /// Creates a box obstacle with positive half extents.
    ///
    /// # Errors
    /// Returns a contract violation for non-positive or non-finite extents.
    pub fn new(center: [f64; 3], half_extents: [f64; 3], kind: TerrainKind) -> Result<Self> {
        if !center.iter().all(|v| v.is_finite()) {
            return Err(Error::Contract("box center must be finite".into()));
        }
        if !half_extents.iter().all(|v| v.is_finite() && *v > 0.0) {
            return Err(Error::Contract(format!(
                "box half extents must be positive, got {half_extents:?}"
            )));
        }
        Ok(Self {
            center,
            half_extents,
            kind,
        })
    }

    /// Lower corner of the box.
    #[must_use]
    pub fn min_corner(&self) -> [f64; 3] {
        [
            self.center[0] - self.half_extents[0],
            self.center[1] - self.half_extents[1],
            self.center[2] - self.half_extents[2],
        ]
    }

    /// Upper corner of the box.
    #[must_use]
    pub fn max_corner(&self) -> [f64; 3] {
        [
            self.center[0] + self.half_extents[0],
            self.center[1] + self.half_extents[1],
            self.center[2] + self.half_extents[2],
        ]
    }
}

// -------------------------------------------------------------- ray cast --

/// Scene a ray can hit: optional ground plus box obstacles.
#[derive(Debug, Clone, Copy)]
pub struct Scene<'a> {
    pub heightfield: Option<&'a HeightField>,
    pub obstacles: &'a [BoxObstacle],
}

/// Result of a successful ray cast.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit {
    /// Hit position in world coordinates, m.
    pub point: [f64; 3],
    /// Distance from the ray origin, m.
    pub range: f64,
}

/// Casts a ray and returns the nearest hit within `max_range`, if any.
///
/// Boxes are tested with the slab method; the heightfield is marched at a
/// quarter-cell stride and the bracketing interval of the first crossing is
/// refined by bisection to [`RAY_MARCH_TOL`].  A ray that starts at or below
/// the terrain surface hits immediately at range zero.
///
/// # Errors
/// Returns a contract violation if `dir` is not unit length (within
/// [`DIR_UNIT_TOL`]) or `max_range` is not positive.
pub fn ray_cast(
    scene: &Scene<'_>,
    origin: [f64; 3],
    dir: [f64; 3],
    max_range: f64,
) -> Result<Option<RayHit>> {
    let norm2 = dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2];
    if (norm2.sqrt() - 1.0).abs() > DIR_UNIT_TOL {
        return Err(Error::Contract(format!(
            "ray direction must be unit length, |dir| = {}",
            norm2.sqrt()
        )));
    }
    if !(max_range > 0.0) || !max_range.is_finite() {
        return Err(Error::Contract(format!(
            "max_range must be positive and finite, got {max_range}"
        )));
    }
    if !origin.iter().all(|v| v.is_finite()) {
        return Err(Error::Contract("ray origin must be finite".into()));
    }

    let mut best: Option<f64> = None;
    for b in scene.obstacles {
        if let Some(t) = ray_box(origin, dir, b, max_range) {
            if best.map_or(true, |bt| t < bt) {
                best = Some(t);
            }
        }
    }
    if let Some(hf) = scene.heightfield {
        let cap = best.unwrap_or(max_range);
        if let Some(t) = ray_heightfield(origin, dir, hf, cap) {
            if best.map_or(true, |bt| t < bt) {
                best = Some(t);
            }
        }
    }
    Ok(best.map(|t| RayHit {
        point: [
            origin[0] + t * dir[0],
            origin[1] + t * dir[1],
            origin[2] + t * dir[2],
        ],
        range: t,
    }))
}

/// Slab-method ray/box intersection; returns the entry distance in
/// `(0, max_range]`, or the exit distance when the ray starts inside.
fn ray_box(origin: [f64; 3], dir: [f64; 3], b: &BoxObstacle, max_range: f64) -> Option<f64> {
    let lo = b.min_corner();
    let hi = b.max_corner();
    let mut t_min = f64::NEG_INFINITY;
    let mut t_max = f64::INFINITY;
    for a in 0..3 {
        if dir[a].abs() < 1e-15 {
            if origin[a] < lo[a] || origin[a] > hi[a] {
                return None;
            }
        } else {
            let inv = 1.0 / dir[a];
            let mut t0 = (lo[a] - origin[a]) * inv;
            let mut t1 = (hi[a] - origin[a]) * inv;
            if t0 > t1 {
                std::mem::swap(&mut t0, &mut t1);
            }
            t_min = t_min.max(t0);
            t_max = t_max.min(t1);
            if t_min > t_max {
                return None;
            }
        }
    }
    let t = if t_min > 1e-12 { t_min } else { t_max };
    (t > 1e-12 && t <= max_range).then_some(t)
}

/// Fixed-stride march along the ray looking for the first crossing below the
/// terrain surface, refined by bisection.
///
/// Samples sit on the fixed grid `t = k * stride`; stretches where a
/// crossing is provably impossible (outside the footprint rectangle, or
/// above the highest node while not descending) are skipped without
/// changing which bracket gets refined.
fn ray_heightfield(origin: [f64; 3], dir: [f64; 3], hf: &HeightField, max_range: f64) -> Option<f64> {
    // Elevation of the ray above the surface at parameter t; None outside
    // the field footprint (no ground there).
    let clearance = |t: f64| -> Option<f64> {
        let x = origin[0] + t * dir[0];
        let y = origin[1] + t * dir[1];
        hf.contains(x, y)
            .then(|| origin[2] + t * dir[2] - hf.sample_unchecked(x, y))
    };

    if let Some(c0) = clearance(0.0) {
        if c0 <= 0.0 {
            // Origin at or below the surface: immediate hit.
            return Some(0.0);
        }
    }

    // Parameter window where the ray is over the footprint rectangle
    // (convex, so a single interval).  Outside it every sample is None and
    // can never open or close a bracket.
    let b = hf.bounds();
    let mut t_in: f64 = 0.0;
    let mut t_out: f64 = max_range;
    for (o, d, lo, hi) in [
        (origin[0], dir[0], b[0], b[1]),
        (origin[1], dir[1], b[2], b[3]),
    ] {
        if d.abs() < 1e-15 {
            if o < lo || o > hi {
                return None;
            }
        } else {
            let inv = 1.0 / d;
            let mut t0 = (lo - o) * inv;
            let mut t1 = (hi - o) * inv;
            if t0 > t1 {
                std::mem::swap(&mut t0, &mut t1);
            }
            t_in = t_in.max(t0);
            t_out = t_out.min(t1);
            if t_in > t_out {
                return None;
            }
        }
    }
    // A non-descending ray above the highest node stays above the surface;
    // once z(t) exceeds max_height no sample can close a bracket.
    if dir[2] > 0.0 {
        let t_z = (hf.max_height - origin[2]) / dir[2];
        if t_z < t_in {
            return None;
        }
        t_out = t_out.min(t_z);
    } else if dir[2] == 0.0 && origin[2] > hf.max_height {
        return None;
    }

    let stride = hf.cell / 4.0;
    let total_steps = (max_range / stride).ceil() as usize;
    let mut k = ((t_in / stride).floor() as usize).min(total_steps);
    let mut t_prev = (k as f64 * stride).min(max_range);
    let mut c_prev = clearance(t_prev);
    while k < total_steps {
        k += 1;
        let t = (k as f64 * stride).min(max_range);
        let c = clearance(t);
        if let (Some(cp), Some(cc)) = (c_prev, c) {
            if cp > 0.0 && cc <= 0.0 {
                // Bracketed the surface crossing: bisect to tolerance.
                let (mut a, mut b) = (t_prev, t);
                while b - a > RAY_MARCH_TOL {
                    let m = 0.5 * (a + b);
                    match clearance(m) {
                        Some(cm) if cm <= 0.0 => b = m,
                        _ => a = m,
                    }
                }
                return Some(0.5 * (a + b));
            }
        }
        t_prev = t;
        c_prev = c;
        if t_prev >= t_out {
            break;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terrain::TerrainKind;

    fn flat_field(h: f64) -> HeightField {
        HeightField::new([-10.0, -10.0], 0.5, 41, 41, vec![h; 41 * 41]).unwrap()
    }

    #[test]
    fn wrap_angle_stays_in_range() {
        for a in [-10.0, -std::f64::consts::PI, 0.0, 3.0, 10.0, 100.0] {
            let w = wrap_angle(a);
            assert!(w >= -std::f64::consts::PI && w < std::f64::consts::PI, "{a} -> {w}");
        }
        assert!((wrap_angle(2.0 * std::f64::consts::PI)).abs() < 1e-12);
    }

    #[test]
    fn pose_rejects_non_finite() {
        assert!(Pose::new([f64::NAN, 0.0, 0.0], 0.0).is_err());
        assert!(Pose::new([0.0, 0.0, 0.0], f64::INFINITY).is_err());
    }

    #[test]
    fn bilinear_matches_plane() {
        // A heightfield sampled from a plane must reproduce it exactly.
        let (nx, ny, cell) = (11, 7, 0.25);
        let plane = |x: f64, y: f64| 0.3 * x - 0.2 * y + 1.0;
        let mut heights = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                heights.push(plane(i as f64 * cell, j as f64 * cell));
            }
        }
        let hf = HeightField::new([0.0, 0.0], cell, nx, ny, heights).unwrap();
        for &(x, y) in &[(0.1, 0.1), (1.37, 0.9), (2.5, 1.5), (0.0, 0.0)] {
            let got = heightfield_sample(&hf, x, y).unwrap();
            assert!((got - plane(x, y)).abs() < 1e-12, "({x},{y}): {got}");
        }
        // Max-edge queries are part of the footprint.
        let xe = (nx - 1) as f64 * cell;
        let ye = (ny - 1) as f64 * cell;
        assert!((heightfield_sample(&hf, xe, ye).unwrap() - plane(xe, ye)).abs() < 1e-12);
    }

    #[test]
    fn sample_outside_footprint_is_domain_error() {
        let hf = flat_field(0.0);
        match heightfield_sample(&hf, 100.0, 0.0) {
            Err(Error::Domain(_)) => {}
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn bilinear_is_continuous_across_cell_edges() {
        // Random-ish node heights: sampling just left/right of an interior
        // node line must agree to first order.
        let mut heights = vec![0.0; 5 * 5];
        for (k, h) in heights.iter_mut().enumerate() {
            *h = ((k * 37 + 11) % 17) as f64 * 0.05;
        }
        let hf = HeightField::new([0.0, 0.0], 1.0, 5, 5, heights).unwrap();
        let eps = 1e-9;
        for edge in 1..4 {
            let x = edge as f64;
            for y in [0.3, 1.7, 2.2] {
                let a = heightfield_sample(&hf, x - eps, y).unwrap();
                let b = heightfield_sample(&hf, x + eps, y).unwrap();
                assert!((a - b).abs() < 1e-6, "jump at x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn transform_round_trip_is_identity() {
        let pose = Pose::new([1.0, -2.0, 0.74], 0.8).unwrap();
        let cloud = PointCloud::new(
            vec![[0.3, 0.4, 0.5], [-1.0, 2.0, -0.3], [5.0, -5.0, 1.0]],
            Frame::World,
        )
        .unwrap();
        let base = world_to_base(&cloud, &pose).unwrap();
        assert_eq!(base.frame, Frame::Base);
        let back = base_to_world(&base, &pose).unwrap();
        assert_eq!(back.frame, Frame::World);
        for (a, b) in cloud.points.iter().zip(&back.points) {
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-9, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn transforms_enforce_frame_tags() {
        let pose = Pose::new([0.0, 0.0, 0.0], 0.0).unwrap();
        let base_cloud = PointCloud::new(vec![[1.0, 0.0, 0.0]], Frame::Base).unwrap();
        assert!(world_to_base(&base_cloud, &pose).is_err());
        let world_cloud = PointCloud::new(vec![[1.0, 0.0, 0.0]], Frame::World).unwrap();
        assert!(base_to_world(&world_cloud, &pose).is_err());
        assert!(sensor_to_base(&world_cloud, 0.5).is_err());
    }

    #[test]
    fn sensor_to_base_applies_mount_offset() {
        let cloud = PointCloud::new(vec![[1.0, 2.0, 3.0]], Frame::Sensor).unwrap();
        let base = sensor_to_base(&cloud, 0.46).unwrap();
        assert_eq!(base.frame, Frame::Base);
        assert_eq!(base.points[0], [1.0, 2.0, 3.46]);
    }

    #[test]
    fn ray_cast_rejects_non_unit_direction() {
        let hf = flat_field(0.0);
        let scene = Scene {
            heightfield: Some(&hf),
            obstacles: &[],
        };
        let res = ray_cast(&scene, [0.0, 0.0, 1.0], [0.0, 0.0, -2.0], 10.0);
        match res {
            Err(Error::Contract(_)) => {}
            other => panic!("expected contract violation, got {other:?}"),
        }
    }

    #[test]
    fn vertical_ray_hits_flat_ground() {
        let hf = flat_field(0.0);
        let scene = Scene {
            heightfield: Some(&hf),
            obstacles: &[],
        };
        let hit = ray_cast(&scene, [0.0, 0.0, 1.0], [0.0, 0.0, -1.0], 10.0)
            .unwrap()
            .expect("must hit");
        assert!((hit.range - 1.0).abs() < RAY_MARCH_TOL, "range {}", hit.range);
        assert!(hit.point[2].abs() < RAY_MARCH_TOL);
    }

    #[test]
    fn ray_box_hit_matches_closed_form() {
        // Box face at x = 2: a ray along +x from the origin hits at exactly 2.
        let b = BoxObstacle::new([2.5, 0.0, 0.5], [0.5, 1.0, 0.5], TerrainKind::Hurdle).unwrap();
        let scene = Scene {
            heightfield: None,
            obstacles: std::slice::from_ref(&b),
        };
        let hit = ray_cast(&scene, [0.0, 0.0, 0.5], [1.0, 0.0, 0.0], 10.0)
            .unwrap()
            .expect("must hit");
        assert!((hit.range - 2.0).abs() < 1e-12);

        // Oblique ray in the xy plane: range = 2 / cos(bearing).
        let bearing: f64 = 0.3;
        let dir = [bearing.cos(), bearing.sin(), 0.0];
        let wall = BoxObstacle::new([2.05, 0.0, 1.0], [0.05, 5.0, 1.0], TerrainKind::Jump).unwrap();
        let scene = Scene {
            heightfield: None,
            obstacles: std::slice::from_ref(&wall),
        };
        let hit = ray_cast(&scene, [0.0, 0.0, 0.5], dir, 10.0).unwrap().expect("must hit");
        assert!((hit.range - 2.0 / bearing.cos()).abs() < 1e-9);
    }

    #[test]
    fn nearest_of_box_and_ground_wins() {
        let hf = flat_field(0.0);
        let b = BoxObstacle::new([1.0, 0.0, 0.5], [0.2, 0.2, 0.5], TerrainKind::Pole).unwrap();
        let scene = Scene {
            heightfield: Some(&hf),
            obstacles: std::slice::from_ref(&b),
        };
        // Slightly downward ray: the pole face at x=0.8 comes before the ground.
        let dir: [f64; 3] = [0.999_687_228_390_13, 0.0, -0.025_009_383_366_32];
        let n = (dir[0] * dir[0] + dir[2] * dir[2]).sqrt();
        let dir = [dir[0] / n, 0.0, dir[2] / n];
        let hit = ray_cast(&scene, [0.0, 0.0, 0.6], dir, 10.0).unwrap().expect("hit");
        assert!((hit.point[0] - 0.8).abs() < 1e-9, "hit {:?}", hit.point);
    }

    #[test]
    fn shrinking_max_range_never_creates_hits() {
        // Monotonicity: if a ray misses at range R it misses at any r < R,
        // and a hit found at R persists (same range) for any cap above it.
        let hf = flat_field(0.0);
        let b = BoxObstacle::new([3.0, 0.5, 1.0], [0.3, 0.3, 1.0], TerrainKind::NarrowGate).unwrap();
        let scene = Scene {
            heightfield: Some(&hf),
            obstacles: std::slice::from_ref(&b),
        };
        let dirs: [[f64; 3]; 4] = [
            [1.0, 0.0, 0.0],
            [0.8, 0.13, -0.1],
            [0.5, -0.5, -0.2],
            [0.9, 0.2, 0.3],
        ];
        for d in dirs {
            let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            let dir = [d[0] / n, d[1] / n, d[2] / n];
            let full = ray_cast(&scene, [0.0, 0.0, 1.0], dir, 20.0).unwrap();
            match full {
                Some(hit) => {
                    let again = ray_cast(&scene, [0.0, 0.0, 1.0], dir, hit.range + 1.0).unwrap();
                    let again = again.expect("hit must persist with a looser cap");
                    assert!((again.range - hit.range).abs() < 1e-9);
                    let short = ray_cast(&scene, [0.0, 0.0, 1.0], dir, hit.range * 0.5).unwrap();
                    assert!(short.is_none(), "hit appeared under a tighter cap");
                }
                None => {
                    let short = ray_cast(&scene, [0.0, 0.0, 1.0], dir, 5.0).unwrap();
                    assert!(short.is_none());
                }
            }
        }
    }

    #[test]
    fn ray_below_surface_hits_immediately() {
        let hf = flat_field(0.5);
        let scene = Scene {
            heightfield: Some(&hf),
            obstacles: &[],
        };
        let hit = ray_cast(&scene, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], 5.0).unwrap().expect("hit");
        assert_eq!(hit.range, 0.0);
    }
}
