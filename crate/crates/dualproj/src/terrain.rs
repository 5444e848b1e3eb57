//! Procedural obstacle-track generation with a difficulty curriculum.
//!
//! A track is a 3 m spawn pad followed by a configurable number of 4 m
//! terrain modules drawn from a requested set of archetypes.  Every
//! archetype except the plane carries two curriculum parameters that are
//! linearly interpolated between a start value (difficulty 0) and an end
//! value (difficulty 1), then sampled inside a +/-0.1 difficulty band for
//! intra-class variability.  Within one track the modules ramp from 0.6x
//! the commanded difficulty up to the commanded difficulty, and modules of
//! the same archetype are ordered easiest-first so the ramp survives the
//! band sampling.  Low-amplitude gradient noise is superimposed on all
//! ground cells.
//!
//! Everything here is a pure function of the spec (including its seed): the
//! same [`TrackSpec`] always assembles the identical [`TrackLayout`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{BoxObstacle, HeightField};
use crate::{Error, Result};

/// Length of every terrain module, m.
pub const MODULE_LENGTH: f64 = 4.0;
/// Length of the flat spawn pad ahead of the first module, m.
pub const SPAWN_PAD_LENGTH: f64 = 3.0;
/// Lateral extent of the track (centered on y = 0), m.
pub const TRACK_WIDTH: f64 = 4.0;
/// Heightfield node spacing used by [`assemble_track`], m.
pub const TRACK_CELL: f64 = 0.05;
/// Half width of the intra-class sampling band, in difficulty units.
pub const DIFFICULTY_BAND: f64 = 0.1;
/// Steps realized per stairs module.
pub const STAIR_STEPS: usize = 4;
/// Height of pole and gate walls, m.
const WALL_HEIGHT: f64 = 2.0;
/// Wall thickness (along x) of gate walls, m.
const GATE_DEPTH: f64 = 0.2;
/// Vertical thickness of an overhead beam, m.
const BEAM_THICKNESS: f64 = 0.3;

// ------------------------------------------------------------ archetypes --

/// Terrain archetypes a track can be built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerrainKind {
    /// Flat ground (trivial segment).
    Plane,
    /// Ascending staircase; the gained height persists into the next module.
    StairsUp,
    /// Platform followed by a drop to a lower level that persists.
    Drop,
    /// Full-width wall that must be jumped (or collides).
    Jump,
    /// Thin full-width obstacle at ground level.
    Hurdle,
    /// Overhead beam that forces a crouch when lower than standing height.
    Beam,
    /// Free-standing vertical pole on the track centerline.
    Pole,
    /// Two walls leaving a narrow, laterally offset gap.
    NarrowGate,
}

impl TerrainKind {
    /// All archetypes, in curriculum-table order.
    pub const ALL: [TerrainKind; 8] = [
        TerrainKind::Plane,
        TerrainKind::StairsUp,
        TerrainKind::Drop,
        TerrainKind::Jump,
        TerrainKind::Hurdle,
        TerrainKind::Beam,
        TerrainKind::Pole,
        TerrainKind::NarrowGate,
    ];

    /// Stable lowercase name (matches the config / CSV spelling).
    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            TerrainKind::Plane => "plane",
            TerrainKind::StairsUp => "stairs_up",
            TerrainKind::Drop => "drop",
            TerrainKind::Jump => "jump",
            TerrainKind::Hurdle => "hurdle",
            TerrainKind::Beam => "beam",
            TerrainKind::Pole => "pole",
            TerrainKind::NarrowGate => "narrow_gate",
        }
    }
}

impl std::fmt::Display for TerrainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TerrainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TerrainKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown terrain kind '{s}'")))
    }
}

// ------------------------------------------------------------ curriculum --

/// Which way a parameter moves as difficulty rises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarderDirection {
    /// Larger values are harder.
    Up,
    /// Smaller values are harder.
    Down,
}

/// One curriculum-scheduled terrain parameter.
///
/// `p_min` is the value at difficulty 0 and `p_max` the value at
/// difficulty 1; the pair is a start/end schedule, not ordered bounds, so
/// for a [`HarderDirection::Down`] parameter `p_max` can be the smaller
/// number (e.g. beam clearance 1.33 -> 1.10).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurriculumParam {
    pub name: &'static str,
    /// Value at difficulty 0, m.
    pub p_min: f64,
    /// Value at difficulty 1, m.
    pub p_max: f64,
    pub harder: HarderDirection,
}

const fn param(
    name: &'static str,
    p_min: f64,
    p_max: f64,
    harder: HarderDirection,
) -> CurriculumParam {
    CurriculumParam {
        name,
        p_min,
        p_max,
        harder,
    }
}

const STAIRS_PARAMS: [CurriculumParam; 2] = [
    param("step height", 0.10, 0.30, HarderDirection::Up),
    param("step length", 0.30, 0.50, HarderDirection::Down),
];
const DROP_PARAMS: [CurriculumParam; 2] = [
    param("drop height", 0.10, 0.60, HarderDirection::Up),
    param("platform length", 0.30, 0.50, HarderDirection::Down),
];
const JUMP_PARAMS: [CurriculumParam; 2] = [
    param("wall height", 0.05, 0.40, HarderDirection::Up),
    param("wall depth", 0.10, 0.30, HarderDirection::Up),
];
const HURDLE_PARAMS: [CurriculumParam; 2] = [
    param("hurdle height", 0.05, 0.40, HarderDirection::Up),
    param("hurdle depth", 0.05, 0.10, HarderDirection::Up),
];
const BEAM_PARAMS: [CurriculumParam; 2] = [
    param("clearance height", 1.33, 1.10, HarderDirection::Down),
    param("beam depth", 0.20, 0.20, HarderDirection::Up),
];
const POLE_PARAMS: [CurriculumParam; 2] = [
    param("pole width", 0.50, 0.10, HarderDirection::Down),
    param("position offset", 0.00, 0.00, HarderDirection::Up),
];
const GATE_PARAMS: [CurriculumParam; 2] = [
    param("gate width", 0.80, 0.45, HarderDirection::Down),
    param("position offset", 0.00, 0.60, HarderDirection::Up),
];

/// The curriculum parameters of one archetype (empty for the plane).
#[must_use]
pub fn curriculum_params(kind: TerrainKind) -> &'static [CurriculumParam] {
    match kind {
        TerrainKind::Plane => &[],
        TerrainKind::StairsUp => &STAIRS_PARAMS,
        TerrainKind::Drop => &DROP_PARAMS,
        TerrainKind::Jump => &JUMP_PARAMS,
        TerrainKind::Hurdle => &HURDLE_PARAMS,
        TerrainKind::Beam => &BEAM_PARAMS,
        TerrainKind::Pole => &POLE_PARAMS,
        TerrainKind::NarrowGate => &GATE_PARAMS,
    }
}

/// All 14 scheduled parameters with their archetype.
#[must_use]
pub fn all_curriculum_params() -> Vec<(TerrainKind, &'static CurriculumParam)> {
    TerrainKind::ALL
        .into_iter()
        .flat_map(|k| curriculum_params(k).iter().map(move |p| (k, p)))
        .collect()
}

/// Parameter value at curriculum difficulty `c`.
///
/// Linear interpolation from `p_min` (c = 0) to `p_max` (c = 1), exact at
/// both endpoints.
///
/// # Errors
/// Returns a domain error for `c` outside `[0, 1]`.
pub fn interp_param(p: &CurriculumParam, c: f64) -> Result<f64> {
    if !c.is_finite() || !(0.0..=1.0).contains(&c) {
        return Err(Error::Domain(format!(
            "difficulty must lie in [0, 1], got {c}"
        )));
    }
    Ok(p.p_min * (1.0 - c) + p.p_max * c)
}

// ----------------------------------------------------------- perlin noise --

/// Classic 2D gradient noise, deterministic in `(x, y, seed)`.
///
/// Integer-lattice gradients come from a seeded integer hash, blended with
/// the quintic fade; the value is exactly zero on lattice points and bounded
/// by `[-1, 1]` (unit gradients give |value| <= sqrt(2)/2).
#[must_use]
pub fn perlin2(x: f64, y: f64, seed: u64) -> f64 {
    #[inline]
    fn fade(t: f64) -> f64 {
        t * t * t * (t * (t * 6.0 - 15.0) + 10.0)
    }
    #[inline]
    fn lerp(a: f64, b: f64, t: f64) -> f64 {
        a + t * (b - a)
    }
    /// Dot product of the lattice gradient at `(ix, iy)` with offset `(dx, dy)`.
    #[inline]
    fn grad_dot(ix: i64, iy: i64, seed: u64, dx: f64, dy: f64) -> f64 {
        const DIAG: f64 = std::f64::consts::FRAC_1_SQRT_2;
        const GRADS: [[f64; 2]; 8] = [
            [1.0, 0.0],
            [-1.0, 0.0],
            [0.0, 1.0],
            [0.0, -1.0],
            [DIAG, DIAG],
            [-DIAG, DIAG],
            [DIAG, -DIAG],
            [-DIAG, -DIAG],
        ];
        let mut h = (ix as u64)
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add((iy as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f))
            .wrapping_add(seed.wrapping_mul(0x1656_67b1_9e37_79f9));
        h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h ^= h >> 31;
        let g = GRADS[(h & 7) as usize];
        g[0] * dx + g[1] * dy
    }

    let xf = x.floor();
    let yf = y.floor();
    let xi = xf as i64;
    let yi = yf as i64;
    let dx = x - xf;
    let dy = y - yf;
    let u = fade(dx);
    let v = fade(dy);
    let d00 = grad_dot(xi, yi, seed, dx, dy);
    let d10 = grad_dot(xi + 1, yi, seed, dx - 1.0, dy);
    let d01 = grad_dot(xi, yi + 1, seed, dx, dy - 1.0);
    let d11 = grad_dot(xi + 1, yi + 1, seed, dx - 1.0, dy - 1.0);
    lerp(lerp(d00, d10, u), lerp(d01, d11, u), v)
}

// ------------------------------------------------------------- track spec --

/// Request for one procedurally generated track.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackSpec {
    /// Archetype pool modules are drawn from (uniformly, seeded).
    pub modules: Vec<TerrainKind>,
    /// Curriculum difficulty in `[0, 1]`.
    pub difficulty: f64,
    /// Number of modules laid after the spawn pad (>= 1).
    #[serde(default = "default_obstacles")]
    pub obstacles_per_episode: usize,
    /// Amplitude of the gradient noise superimposed on ground cells, m.
    #[serde(default = "default_noise")]
    pub noise_amplitude: f64,
    /// Seed for module draws, parameter sampling and ground noise.
    #[serde(default)]
    pub seed: u64,
}

fn default_obstacles() -> usize {
    5
}

fn default_noise() -> f64 {
    0.03
}

impl TrackSpec {
    /// Parses a spec from TOML text.
    ///
    /// # Errors
    /// Returns a config error for malformed TOML or invalid field values.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: TrackSpec =
            toml::from_str(text).map_err(|e| Error::Config(format!("track spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the spec's field-level invariants.
    ///
    /// # Errors
    /// Returns a config error describing the first violated constraint.
    pub fn validate(&self) -> Result<()> {
        if self.modules.is_empty() {
            return Err(Error::Config("module list must not be empty".into()));
        }
        if !self.difficulty.is_finite() || !(0.0..=1.0).contains(&self.difficulty) {
            return Err(Error::Config(format!(
                "difficulty must lie in [0, 1], got {}",
                self.difficulty
            )));
        }
        if self.obstacles_per_episode == 0 {
            return Err(Error::Config("obstacles_per_episode must be >= 1".into()));
        }
        if !self.noise_amplitude.is_finite() || self.noise_amplitude < 0.0 {
            return Err(Error::Config(format!(
                "noise_amplitude must be >= 0, got {}",
                self.noise_amplitude
            )));
        }
        Ok(())
    }

    /// Copy of the spec with a different seed.
    #[must_use]
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut s = self.clone();
        s.seed = seed;
        s
    }
}

// -------------------------------------------------------------- modules --

/// The two sampled curriculum values of a module (zeros for a plane);
/// `primary`/`secondary` follow the order in [`curriculum_params`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModuleParams {
    pub primary: f64,
    pub secondary: f64,
}

/// One realized terrain module in module-local coordinates.
///
/// The ground profile is piecewise constant: `(x_start, height)` pairs with
/// heights relative to the module's entry level, the first breakpoint at
/// `x_start = 0`.  Boxes use local x (from the module start), track y and
/// z above the entry level.  `exit_offset` is the ground-level change the
/// module hands to its successor (stairs climb, drops descend).
#[derive(Debug, Clone, PartialEq)]
pub struct TerrainModule {
    pub kind: TerrainKind,
    pub length: f64,
    pub params: ModuleParams,
    pub profile: Vec<(f64, f64)>,
    pub boxes: Vec<BoxObstacle>,
    pub exit_offset: f64,
}

impl TerrainModule {
    /// Ground height (relative to the entry level) at local coordinate `x`.
    #[must_use]
    pub fn profile_height(&self, x_local: f64) -> f64 {
        let mut h = 0.0;
        for &(start, height) in &self.profile {
            if x_local >= start {
                h = height;
            } else {
                break;
            }
        }
        h
    }
}

/// Samples one parameter uniformly inside the +/-0.1 difficulty band
/// around `c`, clipped to `[0, 1]`.
fn sample_in_band(p: &CurriculumParam, c: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let a = interp_param(p, (c - DIFFICULTY_BAND).max(0.0))?;
    let b = interp_param(p, (c + DIFFICULTY_BAND).min(1.0))?;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let u: f64 = rng.gen();
    Ok(lo + u * (hi - lo))
}

/// Generates one terrain module at curriculum difficulty `c`.
///
/// Each scheduled parameter is drawn uniformly from its +/-0.1 difficulty
/// band around `c`; the module geometry (ground profile and obstacle boxes)
/// realizes the drawn values.  Deterministic given the RNG state.
///
/// # Errors
/// Returns a domain error for `c` outside `[0, 1]`.
pub fn gen_module(kind: TerrainKind, c: f64, rng: &mut ChaCha8Rng) -> Result<TerrainModule> {
    let params = sample_module_params(kind, c, rng)?;
    Ok(realize_module(kind, params))
}

/// Draws the curriculum values for one module (no geometry yet).
fn sample_module_params(kind: TerrainKind, c: f64, rng: &mut ChaCha8Rng) -> Result<ModuleParams> {
    if !c.is_finite() || !(0.0..=1.0).contains(&c) {
        return Err(Error::Domain(format!(
            "difficulty must lie in [0, 1], got {c}"
        )));
    }
    let table = curriculum_params(kind);
    if table.is_empty() {
        return Ok(ModuleParams::default());
    }
    Ok(ModuleParams {
        primary: sample_in_band(&table[0], c, rng)?,
        secondary: sample_in_band(&table[1], c, rng)?,
    })
}

/// Builds the geometry for already-drawn parameter values.
fn realize_module(kind: TerrainKind, params: ModuleParams) -> TerrainModule {
    let flat = vec![(0.0, 0.0)];
    let half_w = TRACK_WIDTH / 2.0;
    let mid = MODULE_LENGTH / 2.0;
    let mut boxes = Vec::new();
    let mut profile = flat.clone();
    let mut exit_offset = 0.0;

    match kind {
        TerrainKind::Plane => {}
        TerrainKind::StairsUp => {
            let h = params.primary;
            let l = params.secondary;
            let x0 = 0.5;
            profile = vec![(0.0, 0.0)];
            for s in 0..STAIR_STEPS {
                profile.push((x0 + s as f64 * l, (s + 1) as f64 * h));
            }
            exit_offset = STAIR_STEPS as f64 * h;
        }
        TerrainKind::Drop => {
            let d = params.primary;
            let platform = params.secondary;
            profile = vec![(0.0, 0.0), (platform, -d)];
            exit_offset = -d;
        }
        TerrainKind::Jump | TerrainKind::Hurdle => {
            let h = params.primary;
            let depth = params.secondary;
            boxes.push(
                BoxObstacle::new([mid, 0.0, h / 2.0], [depth / 2.0, half_w, h / 2.0], kind)
                    .expect("wall box extents are positive"),
            );
        }
        TerrainKind::Beam => {
            let clearance = params.primary;
            let depth = params.secondary;
            boxes.push(
                BoxObstacle::new(
                    [mid, 0.0, clearance + BEAM_THICKNESS / 2.0],
                    [depth / 2.0, half_w, BEAM_THICKNESS / 2.0],
                    kind,
                )
                .expect("beam box extents are positive"),
            );
        }
        TerrainKind::Pole => {
            let w = params.primary;
            let offset = params.secondary;
            boxes.push(
                BoxObstacle::new(
                    [mid, offset, WALL_HEIGHT / 2.0],
                    [w / 2.0, w / 2.0, WALL_HEIGHT / 2.0],
                    kind,
                )
                .expect("pole box extents are positive"),
            );
        }
        TerrainKind::NarrowGate => {
            let gap = params.primary;
            let offset = params.secondary;
            let gap_lo = offset - gap / 2.0;
            let gap_hi = offset + gap / 2.0;
            // Left wall: [-half_w, gap_lo]; right wall: [gap_hi, half_w].
            for (lo, hi) in [(-half_w, gap_lo), (gap_hi, half_w)] {
                let span = hi - lo;
                if span > 1e-9 {
                    boxes.push(
                        BoxObstacle::new(
                            [mid, (lo + hi) / 2.0, WALL_HEIGHT / 2.0],
                            [GATE_DEPTH / 2.0, span / 2.0, WALL_HEIGHT / 2.0],
                            kind,
                        )
                        .expect("gate wall extents are positive"),
                    );
                }
            }
        }
    }

    TerrainModule {
        kind,
        length: MODULE_LENGTH,
        params,
        profile,
        boxes,
        exit_offset,
    }
}

/// Sort key that grows with difficulty for the archetype's primary
/// parameter (used to order same-archetype modules easiest-first).
fn difficulty_key(kind: TerrainKind, params: ModuleParams) -> f64 {
    let table = curriculum_params(kind);
    if table.is_empty() {
        return 0.0;
    }
    match table[0].harder {
        HarderDirection::Up => params.primary,
        HarderDirection::Down => -params.primary,
    }
}

// ------------------------------------------------------------- assembly --

/// A fully realized track: terrain, obstacles and per-module segments.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackLayout {
    /// Ground surface over `[0, total_length] x [-2, 2]` m.
    pub heightfield: HeightField,
    /// All obstacle boxes in world coordinates.
    pub obstacles: Vec<BoxObstacle>,
    /// Per-module `[x_start, x_end]` intervals (success bookkeeping).
    pub segments: Vec<[f64; 2]>,
    /// Track length including the spawn pad, m.
    pub total_length: f64,
    /// Realized modules, in track order.
    pub modules: Vec<TerrainModule>,
}

impl TrackLayout {
    /// Realized archetypes in track order.
    #[must_use]
    pub fn kinds(&self) -> Vec<TerrainKind> {
        self.modules.iter().map(|m| m.kind).collect()
    }
}

/// Assembles a full track from a spec.
///
/// Modules are drawn uniformly from `spec.modules` with per-module
/// difficulty ramping linearly from `0.6 * difficulty` to `difficulty`;
/// same-archetype modules are then reordered easiest-first by their drawn
/// primary parameter so the within-track ramp is monotone even though each
/// parameter is sampled inside its difficulty band.  Ground noise
/// `noise_amplitude * perlin2(x, y, seed)` is added to every node.
///
/// # Errors
/// Returns a config error for an invalid spec (empty module list,
/// difficulty outside `[0, 1]`, zero modules, negative noise).
pub fn assemble_track(spec: &TrackSpec) -> Result<TrackLayout> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.obstacles_per_episode;

    // Draw archetypes, then parameters at the ramped difficulties, in a
    // fixed RNG order so the layout is a pure function of the spec.
    let kinds: Vec<TerrainKind> = (0..n)
        .map(|_| spec.modules[rng.gen_range(0..spec.modules.len())])
        .collect();
    let mut drawn: Vec<(TerrainKind, ModuleParams)> = Vec::with_capacity(n);
    for (i, &kind) in kinds.iter().enumerate() {
        let ramp = if n == 1 {
            1.0
        } else {
            0.6 + 0.4 * i as f64 / (n - 1) as f64
        };
        let c_i = spec.difficulty * ramp;
        drawn.push((kind, sample_module_params(kind, c_i, &mut rng)?));
    }

    // Easiest-first within each archetype: sort the parameter draws of each
    // kind by oriented primary value and re-slot them into that kind's
    // positions (stable across kinds, deterministic).
    for kind in TerrainKind::ALL {
        let mut idx: Vec<usize> = (0..n).filter(|&i| drawn[i].0 == kind).collect();
        if idx.len() < 2 {
            continue;
        }
        let mut params: Vec<ModuleParams> = idx.iter().map(|&i| drawn[i].1).collect();
        params.sort_by(|a, b| {
            difficulty_key(kind, *a)
                .partial_cmp(&difficulty_key(kind, *b))
                .expect("curriculum draws are finite")
        });
        for (slot, p) in idx.drain(..).zip(params) {
            drawn[slot].1 = p;
        }
    }

    let modules: Vec<TerrainModule> = drawn
        .into_iter()
        .map(|(kind, params)| realize_module(kind, params))
        .collect();

    // Running entry levels (stairs raise the ground, drops lower it).
    let mut entry_levels = Vec::with_capacity(n);
    let mut level = 0.0;
    for m in &modules {
        entry_levels.push(level);
        level += m.exit_offset;
    }

    let total_length = SPAWN_PAD_LENGTH + n as f64 * MODULE_LENGTH;
    let segments: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let s = SPAWN_PAD_LENGTH + i as f64 * MODULE_LENGTH;
            [s, s + MODULE_LENGTH]
        })
        .collect();

    // Heightfield: nodes every TRACK_CELL over [0, total] x [-2, 2].
    let nx = (total_length / TRACK_CELL).round() as usize + 1;
    let ny = (TRACK_WIDTH / TRACK_CELL).round() as usize + 1;
    let mut heights = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        let x = i as f64 * TRACK_CELL;
        let base = if x < SPAWN_PAD_LENGTH {
            0.0
        } else {
            let k = (((x - SPAWN_PAD_LENGTH) / MODULE_LENGTH) as usize).min(n - 1);
            let x_local = x - (SPAWN_PAD_LENGTH + k as f64 * MODULE_LENGTH);
            entry_levels[k] + modules[k].profile_height(x_local)
        };
        for j in 0..ny {
            let y = -TRACK_WIDTH / 2.0 + j as f64 * TRACK_CELL;
            heights.push(base + spec.noise_amplitude * perlin2(x, y, spec.seed));
        }
    }
    let heightfield = HeightField::new([0.0, -TRACK_WIDTH / 2.0], TRACK_CELL, nx, ny, heights)?;

    // Boxes into world coordinates (shift by module start and entry level).
    let mut obstacles = Vec::new();
    for (k, m) in modules.iter().enumerate() {
        let x0 = SPAWN_PAD_LENGTH + k as f64 * MODULE_LENGTH;
        for b in &m.boxes {
            obstacles.push(BoxObstacle {
                center: [
                    b.center[0] + x0,
                    b.center[1],
                    b.center[2] + entry_levels[k],
                ],
                half_extents: b.half_extents,
                kind: b.kind,
            });
        }
    }

    Ok(TrackLayout {
        heightfield,
        obstacles,
        segments,
        total_length,
        modules,
    })
}
