//! Synthetic spinning-LiDAR scans over a track, with sensor corruption.
//!
//! [`scan`] fires one ray per (azimuth, elevation) pair from a sensor
//! mounted above the robot base and keeps the nearest hit per ray, so
//! occlusion falls out of the casting itself.  Points come back in the
//! sensor frame in deterministic azimuth-major order regardless of how the
//! rays were parallelized.  [`corrupt`] applies the two measurement
//! artifacts the downstream stack must tolerate: a fixed-fraction random
//! dropout and per-axis uniform point noise.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::geometry::{ray_cast, Frame, PointCloud, Pose, Scene};
use crate::terrain::TrackLayout;
use crate::{Error, Result};

/// Sensor height above the robot base, m.
pub const MOUNT_HEIGHT: f64 = 0.46;

/// Ray layout of one scan sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPattern {
    /// Rays per ring (uniform azimuth spacing over the full circle).
    pub azimuth_count: usize,
    /// Elevation angles, rad, strictly increasing.
    pub elevation_angles: Vec<f64>,
    /// Maximum ray range, m.
    pub max_range: f64,
}

impl ScanPattern {
    /// Creates a validated scan pattern.
    ///
    /// # Errors
    /// Returns a contract violation for zero azimuths, non-increasing or
    /// non-finite elevation angles, or a non-positive range.
    pub fn new(azimuth_count: usize, elevation_angles: Vec<f64>, max_range: f64) -> Result<Self> {
        if azimuth_count == 0 {
            return Err(Error::Contract("scan needs at least one azimuth".into()));
        }
        if elevation_angles.is_empty() {
            return Err(Error::Contract("scan needs at least one elevation".into()));
        }
        if !elevation_angles.iter().all(|a| a.is_finite()) {
            return Err(Error::Contract("elevation angles must be finite".into()));
        }
        if elevation_angles.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Contract(
                "elevation angles must be strictly increasing".into(),
            ));
        }
        if !(max_range > 0.0) || !max_range.is_finite() {
            return Err(Error::Contract(format!(
                "max_range must be positive, got {max_range}"
            )));
        }
        Ok(Self {
            azimuth_count,
            elevation_angles,
            max_range,
        })
    }

    /// `count` elevations uniformly spanning `[lo, hi]` (inclusive), rad.
    fn uniform_elevations(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect()
    }

    /// Full-resolution sweep: 360 azimuths x 40 elevations uniform over
    /// [-7 deg, +52 deg], 20 m range.
    #[must_use]
    pub fn full() -> Self {
        ScanPattern::new(
            360,
            Self::uniform_elevations(-7f64.to_radians(), 52f64.to_radians(), 40),
            20.0,
        )
        .expect("full pattern is valid")
    }

    /// Decimated sweep used inside episodes: 90 azimuths x 12 elevations,
    /// range 6 m (the perception maps never look beyond the 5 m radius cap,
    /// and the episode loop scans at 10 Hz, so the full pattern would be
    /// wasted work). The fan is the same 59 deg span as [`full`] mounted
    /// inverted — [-52, +7] deg — so that a sensor ~1.2 m up sweeps the
    /// ground from ~0.9 m standoff outward instead of staring at the sky.
    #[must_use]
    pub fn perception() -> Self {
        ScanPattern::new(
            90,
            Self::uniform_elevations(-52f64.to_radians(), 7f64.to_radians(), 12),
            6.0,
        )
        .expect("perception pattern is valid")
    }

    /// Rays per sweep.
    #[must_use]
    pub fn ray_count(&self) -> usize {
        self.azimuth_count * self.elevation_angles.len()
    }
}

impl Default for ScanPattern {
    fn default() -> Self {
        ScanPattern::full()
    }
}

/// Measurement corruption parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorNoise {
    /// Half-width of the per-axis uniform perturbation, m.
    pub point_noise: f64,
    /// Fraction of points removed, in `[0, 1]`.
    pub dropout: f64,
}

impl SensorNoise {
    /// Creates validated noise parameters.
    ///
    /// # Errors
    /// Returns a contract violation for a negative noise half-width or a
    /// dropout fraction outside `[0, 1]`.
    pub fn new(point_noise: f64, dropout: f64) -> Result<Self> {
        if !point_noise.is_finite() || point_noise < 0.0 {
            return Err(Error::Contract(format!(
                "point_noise must be >= 0, got {point_noise}"
            )));
        }
        if !dropout.is_finite() || !(0.0..=1.0).contains(&dropout) {
            return Err(Error::Contract(format!(
                "dropout must lie in [0, 1], got {dropout}"
            )));
        }
        Ok(Self {
            point_noise,
            dropout,
        })
    }

    /// No corruption at all.
    #[must_use]
    pub fn none() -> Self {
        SensorNoise {
            point_noise: 0.0,
            dropout: 0.0,
        }
    }
}

impl Default for SensorNoise {
    /// Point noise +/-0.05 m, 10 % dropout.
    fn default() -> Self {
        SensorNoise {
            point_noise: 0.05,
            dropout: 0.10,
        }
    }
}

/// Sweeps the pattern over the track and returns the sensor-frame cloud.
///
/// The sensor sits `mount_height` above the base pose and shares its yaw;
/// azimuth `j` fires at world bearing `yaw + 2*pi*j/N`.  Rays that hit
/// nothing within `pattern.max_range` emit no point.  Points are ordered
/// azimuth-major (all elevations of azimuth 0, then azimuth 1, ...).
///
/// # Errors
/// Returns a domain error when the sensor is outside the track footprint.
pub fn scan(
    track: &TrackLayout,
    pose: &Pose,
    mount_height: f64,
    pattern: &ScanPattern,
) -> Result<PointCloud> {
    if !track.heightfield.contains(pose.position[0], pose.position[1]) {
        return Err(Error::Domain(format!(
            "sensor at ({:.3}, {:.3}) is outside the track footprint",
            pose.position[0], pose.position[1]
        )));
    }
    let scene = Scene {
        heightfield: Some(&track.heightfield),
        obstacles: &track.obstacles,
    };
    scan_scene(&scene, pose, mount_height, pattern)
}

/// [`scan`] against an explicit scene (no footprint precondition).
///
/// # Errors
/// Propagates ray-cast contract violations (none occur for a valid
/// pattern).
pub fn scan_scene(
    scene: &Scene<'_>,
    pose: &Pose,
    mount_height: f64,
    pattern: &ScanPattern,
) -> Result<PointCloud> {
    let origin = [
        pose.position[0],
        pose.position[1],
        pose.position[2] + mount_height,
    ];
    let (sin_yaw, cos_yaw) = pose.yaw.sin_cos();
    let n = pattern.azimuth_count;

    // Azimuth-major: parallel over azimuths, in-order flatten keeps the
    // output deterministic under any thread count.
    let per_azimuth: Vec<Vec<[f64; 3]>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let az = pose.yaw + 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let (sin_az, cos_az) = az.sin_cos();
            let mut pts = Vec::new();
            for &el in &pattern.elevation_angles {
                let (sin_el, cos_el) = el.sin_cos();
                let dir = [cos_el * cos_az, cos_el * sin_az, sin_el];
                if let Ok(Some(hit)) = ray_cast(scene, origin, dir, pattern.max_range) {
                    // World -> sensor frame: translate to the sensor origin,
                    // rotate by -yaw.
                    let dx = hit.point[0] - origin[0];
                    let dy = hit.point[1] - origin[1];
                    let dz = hit.point[2] - origin[2];
                    pts.push([
                        cos_yaw * dx + sin_yaw * dy,
                        -sin_yaw * dx + cos_yaw * dy,
                        dz,
                    ]);
                }
            }
            pts
        })
        .collect();

    PointCloud::new(
        per_azimuth.into_iter().flatten().collect(),
        Frame::Sensor,
    )
}

/// Applies dropout, then per-axis uniform noise, preserving the frame tag.
///
/// Exactly `floor(dropout * N)` points are removed, chosen uniformly at
/// random; survivors keep their relative order and are then perturbed
/// per-axis by independent draws from `[-point_noise, +point_noise]`.
/// Deterministic given the RNG state: removal indices are drawn first,
/// then perturbations in survivor order (skipped entirely when
/// `point_noise` is zero).
#[must_use]
pub fn corrupt(cloud: &PointCloud, noise: &SensorNoise, rng: &mut ChaCha8Rng) -> PointCloud {
    let n = cloud.points.len();
    let drop_count = (noise.dropout * n as f64).floor() as usize;

    // Partial Fisher-Yates over the index set: the first drop_count slots
    // are the removed points.
    let mut keep = vec![true; n];
    if drop_count > 0 {
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..drop_count {
            let j = rng.gen_range(i..n);
            idx.swap(i, j);
            keep[idx[i]] = false;
        }
    }

    let mut points = Vec::with_capacity(n - drop_count);
    for (p, kept) in cloud.points.iter().zip(&keep) {
        if !kept {
            continue;
        }
        if noise.point_noise > 0.0 {
            let b = noise.point_noise;
            points.push([
                p[0] + rng.gen_range(-b..=b),
                p[1] + rng.gen_range(-b..=b),
                p[2] + rng.gen_range(-b..=b),
            ]);
        } else {
            points.push(*p);
        }
    }
    PointCloud::new(points, cloud.frame).expect("corrupted points stay finite")
}
