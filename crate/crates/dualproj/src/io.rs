//! File formats: point clouds (CSV and compact binary), track exports,
//! map grids with PGM previews, observation rows with their layout
//! sidecar, and episode result batches.
//!
//! Everything here is diffable and language-neutral: CSV text, JSON, and
//! ASCII PGM.  Writers are deterministic — identical inputs produce
//! identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{Frame, HeightField, PointCloud};
use crate::obsact::{layout, ObservationVector};
use crate::sim::{EpisodeResult, Termination, DT};
use crate::terrain::{TerrainKind, TrackLayout};
use crate::{geometry::BoxObstacle, Error, Result};

/// Magic prefix of the binary point-cloud format.
pub const CLOUD_MAGIC: &[u8; 4] = b"DPPC";

fn parse_f64(token: &str, what: &str) -> Result<f64> {
    token
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{what}: cannot parse `{}` as a number", token.trim())))
}

// ------------------------------------------------------------- clouds ----

/// Writes a cloud as CSV: header `x,y,z`, one point per row, meters.
///
/// # Errors
/// Returns I/O failures.
pub fn write_cloud_csv(path: &Path, cloud: &PointCloud) -> Result<()> {
    let mut out = String::from("x,y,z\n");
    for p in &cloud.points {
        let _ = writeln!(out, "{},{},{}", p[0], p[1], p[2]);
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a CSV cloud written by [`write_cloud_csv`], tagging it with the
/// frame the caller knows it to be in (the file does not record one).
///
/// # Errors
/// Returns a config error for a malformed file.
pub fn read_cloud_csv(path: &Path, frame: Frame) -> Result<PointCloud> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config(format!("{}: empty cloud file", path.display())))?;
    if header.trim() != "x,y,z" {
        return Err(Error::Config(format!(
            "{}: expected header `x,y,z`, found `{header}`",
            path.display()
        )));
    }
    let mut points = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let mut p = [0.0; 3];
        for v in &mut p {
            let token = cols.next().ok_or_else(|| {
                Error::Config(format!("{}: row {} has fewer than 3 columns", path.display(), n + 2))
            })?;
            *v = parse_f64(token, &format!("{} row {}", path.display(), n + 2))?;
        }
        if cols.next().is_some() {
            return Err(Error::Config(format!(
                "{}: row {} has more than 3 columns",
                path.display(),
                n + 2
            )));
        }
        points.push(p);
    }
    PointCloud::new(points, frame)
}

/// Writes a cloud in the compact binary format: magic `DPPC`, point count
/// as little-endian u32, then x,y,z triples as little-endian f32
/// (single precision — a lossy but compact interchange format).
///
/// # Errors
/// Returns a contract violation if the cloud exceeds `u32::MAX` points,
/// otherwise I/O failures.
pub fn write_cloud_binary(path: &Path, cloud: &PointCloud) -> Result<()> {
    let count = u32::try_from(cloud.len())
        .map_err(|_| Error::Contract("binary cloud format caps at u32::MAX points".into()))?;
    let mut out = BufWriter::new(fs::File::create(path)?);
    out.write_all(CLOUD_MAGIC)?;
    out.write_all(&count.to_le_bytes())?;
    for p in &cloud.points {
        for v in p {
            out.write_all(&(*v as f32).to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads a binary cloud written by [`write_cloud_binary`].
///
/// # Errors
/// Returns a config error for a bad magic, truncation, or a non-finite
/// point.
pub fn read_cloud_binary(path: &Path, frame: Frame) -> Result<PointCloud> {
    let bytes = fs::read(path)?;
    if bytes.len() < 8 || &bytes[0..4] != CLOUD_MAGIC {
        return Err(Error::Config(format!(
            "{}: not a DPPC point-cloud file",
            path.display()
        )));
    }
    let count = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
    let expected = 8 + count * 12;
    if bytes.len() != expected {
        return Err(Error::Config(format!(
            "{}: expected {expected} bytes for {count} points, found {}",
            path.display(),
            bytes.len()
        )));
    }
    let mut points = Vec::with_capacity(count);
    for i in 0..count {
        let at = 8 + i * 12;
        let mut p = [0.0; 3];
        for (k, v) in p.iter_mut().enumerate() {
            let off = at + 4 * k;
            *v = f64::from(f32::from_le_bytes(
                bytes[off..off + 4].try_into().expect("4 bytes"),
            ));
        }
        points.push(p);
    }
    PointCloud::new(points, frame)
}

fn cloud_format(path: &Path) -> Result<&'static str> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Ok("csv"),
        Some("bin") | Some("dppc") => Ok("bin"),
        other => Err(Error::Config(format!(
            "cloud files use .csv, .bin, or .dppc, got `{}`",
            other.unwrap_or("<none>")
        ))),
    }
}

/// Writes a cloud, picking CSV or binary from the file extension
/// (`.csv` vs `.bin`/`.dppc`).
///
/// # Errors
/// Returns a config error for an unrecognized extension.
pub fn write_cloud(path: &Path, cloud: &PointCloud) -> Result<()> {
    match cloud_format(path)? {
        "csv" => write_cloud_csv(path, cloud),
        _ => write_cloud_binary(path, cloud),
    }
}

/// Reads a cloud, picking the format from the file extension.
///
/// # Errors
/// Returns a config error for an unrecognized extension or malformed file.
pub fn read_cloud(path: &Path, frame: Frame) -> Result<PointCloud> {
    match cloud_format(path)? {
        "csv" => read_cloud_csv(path, frame),
        _ => read_cloud_binary(path, frame),
    }
}

// ------------------------------------------------------------- terrain ----

/// Writes a heightfield as CSV: one metadata line
/// `origin_x,origin_y,cell,nx,ny`, then `nx` rows of `ny` node heights
/// (row = x index).
///
/// # Errors
/// Returns I/O failures.
pub fn write_heightfield_csv(path: &Path, hf: &HeightField) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{},{},{},{},{}",
        hf.origin[0], hf.origin[1], hf.cell, hf.nx, hf.ny
    );
    for i in 0..hf.nx {
        for j in 0..hf.ny {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", hf.node(i, j));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a heightfield written by [`write_heightfield_csv`].
///
/// # Errors
/// Returns a config error for a malformed file.
pub fn read_heightfield_csv(path: &Path) -> Result<HeightField> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let meta = lines
        .next()
        .ok_or_else(|| Error::Config(format!("{}: empty heightfield file", path.display())))?;
    let fields: Vec<&str> = meta.split(',').collect();
    if fields.len() != 5 {
        return Err(Error::Config(format!(
            "{}: metadata line needs origin_x,origin_y,cell,nx,ny",
            path.display()
        )));
    }
    let what = format!("{} metadata", path.display());
    let origin = [parse_f64(fields[0], &what)?, parse_f64(fields[1], &what)?];
    let cell = parse_f64(fields[2], &what)?;
    let nx = parse_f64(fields[3], &what)? as usize;
    let ny = parse_f64(fields[4], &what)? as usize;

    let mut heights = Vec::with_capacity(nx * ny);
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        for token in line.split(',') {
            heights.push(parse_f64(token, &format!("{} row {}", path.display(), i + 2))?);
        }
    }
    if heights.len() != nx * ny {
        return Err(Error::Config(format!(
            "{}: expected {} node heights, found {}",
            path.display(),
            nx * ny,
            heights.len()
        )));
    }
    HeightField::new(origin, cell, nx, ny, heights)
}

fn kind_name(kind: TerrainKind) -> String {
    match serde_json::to_value(kind) {
        Ok(serde_json::Value::String(s)) => s,
        _ => unreachable!("TerrainKind serializes to a string"),
    }
}

fn kind_from_name(name: &str) -> Result<TerrainKind> {
    serde_json::from_value(serde_json::Value::String(name.trim().to_string()))
        .map_err(|_| Error::Config(format!("unknown terrain kind `{}`", name.trim())))
}

/// Writes obstacles as CSV with header `kind,cx,cy,cz,hx,hy,hz`
/// (center and half-extents, meters).
///
/// # Errors
/// Returns I/O failures.
pub fn write_obstacles_csv(path: &Path, obstacles: &[BoxObstacle]) -> Result<()> {
    let mut out = String::from("kind,cx,cy,cz,hx,hy,hz\n");
    for b in obstacles {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            kind_name(b.kind),
            b.center[0],
            b.center[1],
            b.center[2],
            b.half_extents[0],
            b.half_extents[1],
            b.half_extents[2]
        );
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads obstacles written by [`write_obstacles_csv`].
///
/// # Errors
/// Returns a config error for a malformed file.
pub fn read_obstacles_csv(path: &Path) -> Result<Vec<BoxObstacle>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config(format!("{}: empty obstacle file", path.display())))?;
    if header.trim() != "kind,cx,cy,cz,hx,hy,hz" {
        return Err(Error::Config(format!(
            "{}: expected header `kind,cx,cy,cz,hx,hy,hz`",
            path.display()
        )));
    }
    let mut obstacles = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 7 {
            return Err(Error::Config(format!(
                "{}: row {} needs 7 columns",
                path.display(),
                n + 2
            )));
        }
        let what = format!("{} row {}", path.display(), n + 2);
        let kind = kind_from_name(cols[0])?;
        let center = [
            parse_f64(cols[1], &what)?,
            parse_f64(cols[2], &what)?,
            parse_f64(cols[3], &what)?,
        ];
        let half = [
            parse_f64(cols[4], &what)?,
            parse_f64(cols[5], &what)?,
            parse_f64(cols[6], &what)?,
        ];
        obstacles.push(BoxObstacle::new(center, half, kind)?);
    }
    Ok(obstacles)
}

/// Side metadata written next to a track export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackMeta {
    /// Track length including the spawn pad, m.
    pub total_length: f64,
    /// Per-module `[x_start, x_end]` intervals.
    pub segments: Vec<[f64; 2]>,
    /// Realized module archetypes in track order.
    pub kinds: Vec<TerrainKind>,
}

/// Exports a track to `dir` as `heightfield.csv`, `obstacles.csv`, and
/// `meta.json` (total length, segments, module kinds).
///
/// # Errors
/// Returns I/O failures.
pub fn write_track(dir: &Path, track: &TrackLayout) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_heightfield_csv(&dir.join("heightfield.csv"), &track.heightfield)?;
    write_obstacles_csv(&dir.join("obstacles.csv"), &track.obstacles)?;
    let meta = TrackMeta {
        total_length: track.total_length,
        segments: track.segments.clone(),
        kinds: track.kinds(),
    };
    let json = serde_json::to_string_pretty(&meta)
        .map_err(|e| Error::Contract(format!("track metadata serialization: {e}")))?;
    fs::write(dir.join("meta.json"), json + "\n")?;
    Ok(())
}

/// Loads a track exported by [`write_track`].  `meta.json` is optional;
/// without it the length comes from the heightfield bounds and the
/// segment list is empty.  Realized modules are not round-tripped.
///
/// # Errors
/// Returns a config error for malformed files.
pub fn read_track(dir: &Path) -> Result<TrackLayout> {
    let heightfield = read_heightfield_csv(&dir.join("heightfield.csv"))?;
    let obstacles = read_obstacles_csv(&dir.join("obstacles.csv"))?;
    let meta_path = dir.join("meta.json");
    let (total_length, segments) = if meta_path.exists() {
        let meta: TrackMeta = serde_json::from_str(&fs::read_to_string(&meta_path)?)
            .map_err(|e| Error::Config(format!("{}: {e}", meta_path.display())))?;
        (meta.total_length, meta.segments)
    } else {
        (heightfield.bounds()[1], Vec::new())
    };
    Ok(TrackLayout {
        heightfield,
        obstacles,
        segments,
        total_length,
        modules: Vec::new(),
    })
}

// ---------------------------------------------------------------- maps ----

/// Writes a row-major grid as CSV (`rows` lines of `cols` values).
///
/// # Errors
/// Returns a contract violation when `values.len() != rows * cols`,
/// otherwise I/O failures.
pub fn write_map_csv(path: &Path, values: &[f64], rows: usize, cols: usize) -> Result<()> {
    if values.len() != rows * cols {
        return Err(Error::Contract(format!(
            "map has {} values, expected {rows}x{cols}",
            values.len()
        )));
    }
    let mut out = String::new();
    for r in 0..rows {
        for c in 0..cols {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", values[r * cols + c]);
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a CSV grid back as `(values, rows, cols)`.
///
/// # Errors
/// Returns a config error for a malformed or ragged file.
pub fn read_map_csv(path: &Path) -> Result<(Vec<f64>, usize, usize)> {
    let text = fs::read_to_string(path)?;
    let mut values = Vec::new();
    let mut rows = 0;
    let mut cols = 0;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|t| parse_f64(t, &format!("{} row {}", path.display(), i + 1)))
            .collect::<Result<_>>()?;
        if rows == 0 {
            cols = row.len();
        } else if row.len() != cols {
            return Err(Error::Config(format!(
                "{}: ragged row {} ({} values, expected {cols})",
                path.display(),
                i + 1,
                row.len()
            )));
        }
        values.extend(row);
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::Config(format!("{}: empty map file", path.display())));
    }
    Ok((values, rows, cols))
}

/// Renders a grid to 8-bit ASCII PGM (P2), affine-scaling values so the
/// grid minimum maps to 0 and the maximum to 255 (a constant grid renders
/// as all zeros).  The scale is recorded in a sidecar text file at
/// `<path>.txt` as `min=<v>` / `max=<v>` lines.
///
/// # Errors
/// Returns a contract violation for a shape mismatch, otherwise I/O
/// failures.
pub fn write_map_pgm(path: &Path, values: &[f64], rows: usize, cols: usize) -> Result<()> {
    if values.len() != rows * cols {
        return Err(Error::Contract(format!(
            "map has {} values, expected {rows}x{cols}",
            values.len()
        )));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let mut out = String::new();
    let _ = writeln!(out, "P2");
    let _ = writeln!(out, "{cols} {rows}");
    let _ = writeln!(out, "255");
    for r in 0..rows {
        for c in 0..cols {
            if c > 0 {
                out.push(' ');
            }
            let v = values[r * cols + c];
            let pixel = if span > 0.0 {
                ((v - lo) / span * 255.0).round() as u8
            } else {
                0
            };
            let _ = write!(out, "{pixel}");
        }
        out.push('\n');
    }
    fs::write(path, out)?;

    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".txt");
    fs::write(sidecar, format!("min={lo}\nmax={hi}\n"))?;
    Ok(())
}

// -------------------------------------------------------- observations ----

/// Writes an observation as a single CSV row of its values.
///
/// # Errors
/// Returns I/O failures.
pub fn write_observation_csv(path: &Path, obs: &ObservationVector) -> Result<()> {
    let row: Vec<String> = obs.values.iter().map(|v| v.to_string()).collect();
    fs::write(path, row.join(",") + "\n")?;
    Ok(())
}

/// Writes the canonical observation layout as a JSON sidecar:
/// an object mapping component name to `{offset, length}`.
///
/// # Errors
/// Returns I/O failures.
pub fn write_layout_json(path: &Path) -> Result<()> {
    #[derive(Serialize)]
    struct Span {
        offset: usize,
        length: usize,
    }
    let table: BTreeMap<&'static str, Span> = layout()
        .into_iter()
        .map(|e| {
            (
                e.name,
                Span {
                    offset: e.offset,
                    length: e.length,
                },
            )
        })
        .collect();
    let json = serde_json::to_string_pretty(&table)
        .map_err(|e| Error::Contract(format!("layout serialization: {e}")))?;
    fs::write(path, json + "\n")?;
    Ok(())
}

// ------------------------------------------------------------- episodes ---

/// One episode batch row: provenance plus headline metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRow {
    /// Episode seed.
    pub seed: u64,
    /// Realized terrain module kinds, in track order.
    pub kinds: Vec<TerrainKind>,
    /// Curriculum difficulty the track was generated at.
    pub c: f64,
    /// Commanded `[v_x, v_y, yaw_rate]`.
    pub cmd: [f64; 3],
    /// Fraction of segments cleared.
    pub r_succ: f64,
    /// Normalized forward progress.
    pub r_trav: f64,
    /// How the episode ended.
    pub termination: Termination,
    /// Mean commanded sensing radius, m.
    pub mean_radius: f64,
}

/// Writes episode rows as JSON lines (one object per row).
///
/// # Errors
/// Returns I/O failures.
pub fn write_episode_rows(path: &Path, rows: &[EpisodeRow]) -> Result<()> {
    let mut out = String::new();
    for row in rows {
        let line = serde_json::to_string(row)
            .map_err(|e| Error::Contract(format!("episode row serialization: {e}")))?;
        out.push_str(&line);
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a JSONL episode batch back.
///
/// # Errors
/// Returns a config error for malformed rows.
pub fn read_episode_rows(path: &Path) -> Result<Vec<EpisodeRow>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            serde_json::from_str(l)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        })
        .collect()
}

/// Dumps an episode's per-step trace as CSV with header
/// `t,x,y,r,reward_total` (t in seconds at the 50 Hz control rate).
///
/// # Errors
/// Returns I/O failures.
pub fn write_trace_csv(path: &Path, result: &EpisodeResult) -> Result<()> {
    let mut out = String::from("t,x,y,r,reward_total\n");
    for i in 0..result.radius_trace.len() {
        let xy = result.xy_trace.get(i).copied().unwrap_or([f64::NAN; 2]);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            (i + 1) as f64 * DT,
            xy[0],
            xy[1],
            result.radius_trace[i],
            result.reward_trace[i]
        );
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terrain::{assemble_track, TrackSpec};
    use tempfile::tempdir;

    fn cloud(points: Vec<[f64; 3]>) -> PointCloud {
        PointCloud::new(points, Frame::Base).unwrap()
    }

    #[test]
    fn cloud_csv_round_trips_exactly() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let original = cloud(vec![
            [0.1, -2.5, 3.75],
            [1.0 / 3.0, 1e-12, -0.0001],
            [5.0, 0.0, -1.0],
        ]);
        write_cloud_csv(&path, &original).unwrap();
        let read = read_cloud_csv(&path, Frame::Base).unwrap();
        assert_eq!(read, original, "f64 display round-trips bit-exactly");
    }

    #[test]
    fn cloud_binary_round_trips_at_f32_precision() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("c.bin");
        let original = cloud(vec![[0.1, -2.5, 3.75], [1.0 / 3.0, 2.0, -7.25]]);
        write_cloud_binary(&path, &original).unwrap();
        let read = read_cloud_binary(&path, Frame::Base).unwrap();
        assert_eq!(read.len(), original.len());
        for (a, b) in read.points.iter().zip(&original.points) {
            for k in 0..3 {
                assert_eq!(a[k], f64::from(b[k] as f32), "exact f32 quantization");
            }
        }
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[0..4], CLOUD_MAGIC);
        assert_eq!(bytes.len(), 8 + 2 * 12);
    }

    #[test]
    fn cloud_extension_dispatch() {
        let dir = tempdir().unwrap();
        let c = cloud(vec![[1.0, 2.0, 3.0]]);
        write_cloud(&dir.path().join("a.csv"), &c).unwrap();
        write_cloud(&dir.path().join("a.dppc"), &c).unwrap();
        assert!(read_cloud(&dir.path().join("a.csv"), Frame::Base).is_ok());
        assert!(read_cloud(&dir.path().join("a.dppc"), Frame::Base).is_ok());
        assert!(matches!(
            write_cloud(&dir.path().join("a.xyz"), &c),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn malformed_cloud_files_are_config_errors() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        fs::write(&p, "x,y\n1,2\n").unwrap();
        assert!(matches!(read_cloud_csv(&p, Frame::Base), Err(Error::Config(_))));
        fs::write(&p, "x,y,z\n1,2\n").unwrap();
        assert!(matches!(read_cloud_csv(&p, Frame::Base), Err(Error::Config(_))));
        fs::write(&p, "x,y,z\n1,2,abc\n").unwrap();
        assert!(matches!(read_cloud_csv(&p, Frame::Base), Err(Error::Config(_))));
        let b = dir.path().join("bad.bin");
        fs::write(&b, b"NOPE\x00\x00\x00\x00").unwrap();
        assert!(matches!(read_cloud_binary(&b, Frame::Base), Err(Error::Config(_))));
    }

    #[test]
    fn heightfield_round_trips() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("hf.csv");
        let hf = HeightField::new(
            [0.0, -2.0],
            0.05,
            3,
            4,
            vec![
                0.0, 0.1, 0.2, 0.3, //
                0.5, -0.25, 1.0 / 3.0, 0.0, //
                1.5, 2.5, 3.5, 4.5,
            ],
        )
        .unwrap();
        write_heightfield_csv(&path, &hf).unwrap();
        let read = read_heightfield_csv(&path).unwrap();
        assert_eq!(read, hf);
    }

    #[test]
    fn obstacles_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("obs.csv");
        let boxes = vec![
            BoxObstacle::new([3.0, 0.0, 0.2], [0.05, 2.0, 0.2], TerrainKind::Hurdle).unwrap(),
            BoxObstacle::new([7.5, 0.6, 1.25], [0.1, 0.7, 0.15], TerrainKind::NarrowGate)
                .unwrap(),
        ];
        write_obstacles_csv(&path, &boxes).unwrap();
        let read = read_obstacles_csv(&path).unwrap();
        assert_eq!(read, boxes);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("kind,cx,cy,cz,hx,hy,hz\n"));
        assert!(text.contains("narrow_gate"), "snake_case kind names");
    }

    #[test]
    fn track_export_round_trips() {
        let dir = tempdir().unwrap();
        let spec = TrackSpec {
            modules: vec![TerrainKind::Plane, TerrainKind::Hurdle],
            difficulty: 0.5,
            obstacles_per_episode: 3,
            noise_amplitude: 0.02,
            seed: 9,
        };
        let track = assemble_track(&spec).unwrap();
        write_track(dir.path(), &track).unwrap();
        let read = read_track(dir.path()).unwrap();
        assert_eq!(read.heightfield, track.heightfield);
        assert_eq!(read.obstacles, track.obstacles);
        assert_eq!(read.segments, track.segments);
        assert_eq!(read.total_length, track.total_length);
    }

    #[test]
    fn map_csv_round_trips() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("E.csv");
        let values: Vec<f64> = (0..21 * 17).map(|i| i as f64 * 0.25 - 10.0).collect();
        write_map_csv(&path, &values, 21, 17).unwrap();
        let (read, rows, cols) = read_map_csv(&path).unwrap();
        assert_eq!((rows, cols), (21, 17));
        assert_eq!(read, values);
        assert!(matches!(
            write_map_csv(&path, &values, 20, 17),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn pgm_scales_and_records_the_range() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.pgm");
        write_map_pgm(&path, &[0.0, 0.5, 1.0, 0.25], 2, 2).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("P2"));
        assert_eq!(lines.next(), Some("2 2"));
        assert_eq!(lines.next(), Some("255"));
        assert_eq!(lines.next(), Some("0 128"));
        assert_eq!(lines.next(), Some("255 64"));
        let sidecar = fs::read_to_string(dir.path().join("m.pgm.txt")).unwrap();
        assert_eq!(sidecar, "min=0\nmax=1\n");

        // Constant grids render as zeros instead of dividing by zero.
        let flat = dir.path().join("flat.pgm");
        write_map_pgm(&flat, &[2.0; 4], 2, 2).unwrap();
        let text = fs::read_to_string(&flat).unwrap();
        assert!(text.ends_with("0 0\n0 0\n"));
    }

    #[test]
    fn layout_sidecar_matches_the_canonical_table() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("layout.json");
        write_layout_json(&path).unwrap();
        let parsed: BTreeMap<String, BTreeMap<String, usize>> =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed.len(), 10);
        assert_eq!(parsed["elevation"]["offset"], 49);
        assert_eq!(parsed["elevation"]["length"], 357);
        assert_eq!(parsed["distance"]["offset"], 406);
        assert_eq!(parsed["distance"]["length"], 221);
        assert_eq!(parsed["radius"]["offset"], 627);
    }

    #[test]
    fn episode_rows_round_trip_as_jsonl() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        let rows = vec![
            EpisodeRow {
                seed: 1,
                kinds: vec![TerrainKind::Plane, TerrainKind::Beam],
                c: 0.25,
                cmd: [1.0, 0.0, 0.0],
                r_succ: 1.0,
                r_trav: 1.0,
                termination: Termination::Completed,
                mean_radius: 4.2,
            },
            EpisodeRow {
                seed: 2,
                kinds: vec![TerrainKind::Hurdle],
                c: 1.0,
                cmd: [0.5, 0.0, 0.0],
                r_succ: 0.0,
                r_trav: 0.21,
                termination: Termination::Collision,
                mean_radius: 2.0,
            },
        ];
        write_episode_rows(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2, "one JSON object per line");
        assert!(text.contains("\"termination\":\"collision\""));
        assert_eq!(read_episode_rows(&path).unwrap(), rows);
    }

    #[test]
    fn trace_csv_has_one_row_per_step() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        let result = EpisodeResult {
            r_succ: 1.0,
            r_trav: 1.0,
            radius_trace: vec![3.0, 3.5],
            reward_trace: vec![2.5, 2.6],
            xy_trace: vec![[1.52, 0.0], [1.54, 0.0]],
            termination: Termination::Completed,
            final_x: 1.54,
            steps: 2,
        };
        write_trace_csv(&path, &result).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "t,x,y,r,reward_total");
        assert_eq!(lines[1], "0.02,1.52,0,3,2.5");
        assert_eq!(lines[2], "0.04,1.54,0,3.5,2.6");
    }
}
