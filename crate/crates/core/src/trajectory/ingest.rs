//! From GPS fixes to region sequences.

use chrono::{DateTime, NaiveDateTime};
use thiserror::Error;

use super::{GridError, GridSpec, RegionId, Trajectory};

/// One GPS fix.
#[derive(Clone, Debug, PartialEq)]
pub struct RawPoint {
    pub object_id: String,
    /// Seconds since the Unix epoch.
    pub timestamp: i64,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("no points to regionize")]
    Empty,
    #[error("point {index} at ({lat}, {lon}) lies outside the grid bounding box")]
    OutOfBox { index: usize, lat: f64, lon: f64 },
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("regions {a} and {b} at index pair ({index},{}) are not externally connected", index + 1)]
    Gap { index: usize, a: RegionId, b: RegionId },
    #[error("region {0} is outside the grid")]
    BadRegion(RegionId),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// How [`bridge_gaps`] treats consecutive regions that are not neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapPolicy {
    Reject,
    /// Fill each jump with the 8-connected digital line between its endpoints.
    Rasterize,
}

fn axis_index(value: f64, min: f64, max: f64, cells: u32) -> u32 {
    let f = ((value - min) / (max - min) * cells as f64).floor();
    f.clamp(0.0, (cells - 1) as f64) as u32
}

fn cell_of(grid: &GridSpec, lat: f64, lon: f64) -> RegionId {
    let row = axis_index(lat, grid.lat_min, grid.lat_max, grid.rows);
    let col = axis_index(lon, grid.lon_min, grid.lon_max, grid.cols);
    grid.region(row, col)
}

fn push_collapsed(out: &mut Vec<RegionId>, r: RegionId) {
    if out.last() != Some(&r) {
        out.push(r);
    }
}

/// Maps time-ordered points of one object to grid cells, collapsing runs of
/// the same cell. Points on the upper box edge fall in the last row/column;
/// points outside the box are rejected.
pub fn regionize(points: &[RawPoint], grid: &GridSpec) -> Result<Vec<RegionId>, IngestError> {
    regionize_impl(points, grid, false)
}

/// Like [`regionize`] but clamps out-of-box points onto the border cells.
pub fn regionize_clamped(points: &[RawPoint], grid: &GridSpec) -> Result<Vec<RegionId>, IngestError> {
    regionize_impl(points, grid, true)
}

fn regionize_impl(points: &[RawPoint], grid: &GridSpec, clamp: bool) -> Result<Vec<RegionId>, IngestError> {
    grid.check()?;
    if points.is_empty() {
        return Err(IngestError::Empty);
    }
    let mut out = Vec::with_capacity(points.len());
    for (index, p) in points.iter().enumerate() {
        if !p.lat.is_finite() || !p.lon.is_finite() {
            return Err(IngestError::NonFinite { index });
        }
        let inside = (grid.lat_min..=grid.lat_max).contains(&p.lat) && (grid.lon_min..=grid.lon_max).contains(&p.lon);
        if !inside && !clamp {
            return Err(IngestError::OutOfBox { index, lat: p.lat, lon: p.lon });
        }
        push_collapsed(&mut out, cell_of(grid, p.lat, p.lon));
    }
    Ok(out)
}

/// Cells of the 8-connected digital line from `a` to `b`, both included.
///
/// Integer Bresenham over (row, col); one cell per step of the major axis.
pub(crate) fn line_cells(grid: &GridSpec, a: RegionId, b: RegionId) -> Vec<RegionId> {
    let (r0, c0) = grid.row_col(a);
    let (r1, c1) = grid.row_col(b);
    let (mut r, mut c) = (r0 as i64, c0 as i64);
    let (r1, c1) = (r1 as i64, c1 as i64);
    let dr = (r1 - r).abs();
    let dc = -(c1 - c).abs();
    let sr = if r < r1 { 1 } else { -1 };
    let sc = if c < c1 { 1 } else { -1 };
    let mut err = dr + dc;
    let mut out = Vec::with_capacity(dr.max(-dc) as usize + 1);
    loop {
        out.push(grid.region(r as u32, c as u32));
        if r == r1 && c == c1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dc {
            err += dc;
            r += sr;
        }
        if e2 <= dr {
            err += dr;
            c += sc;
        }
    }
    out
}

/// Enforces the externally-connected chain property on a region sequence.
pub fn bridge_gaps(seq: &[RegionId], grid: &GridSpec, policy: GapPolicy) -> Result<Vec<RegionId>, IngestError> {
    if seq.is_empty() {
        return Err(IngestError::Empty);
    }
    if let Some(&bad) = seq.iter().find(|r| !grid.contains(**r)) {
        return Err(IngestError::BadRegion(bad));
    }
    let mut out = Vec::with_capacity(seq.len());
    out.push(seq[0]);
    for (index, w) in seq.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if a == b || grid.externally_connected(a, b) {
            push_collapsed(&mut out, b);
            continue;
        }
        match policy {
            GapPolicy::Reject => return Err(IngestError::Gap { index, a, b }),
            GapPolicy::Rasterize => {
                for r in line_cells(grid, a, b).into_iter().skip(1) {
                    push_collapsed(&mut out, r);
                }
            }
        }
    }
    Ok(out)
}

fn parse_timestamp(s: &str) -> Option<i64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<i64>() {
        return Some(v);
    }
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then(|| v.floor() as i64);
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.timestamp());
    }
    for fmt in ["%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M:%S%.f"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(dt.and_utc().timestamp());
        }
    }
    None
}

/// Reads `object_id,timestamp,longitude,latitude` records (the T-Drive
/// column order). A non-numeric first line is taken as a header.
pub fn parse_points_csv(text: &str) -> Result<Vec<RawPoint>, IngestError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|e| IngestError::Malformed { line, message: e.to_string() })?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if rec.len() != 4 {
            return Err(IngestError::Malformed { line, message: format!("expected 4 fields, found {}", rec.len()) });
        }
        let lon = rec[2].parse::<f64>();
        let lat = rec[3].parse::<f64>();
        if line == 1 && (lon.is_err() || lat.is_err()) {
            continue;
        }
        let bad = |what: &str| IngestError::Malformed { line, message: format!("invalid {what}") };
        let lon = lon.map_err(|_| bad("longitude"))?;
        let lat = lat.map_err(|_| bad("latitude"))?;
        let timestamp = parse_timestamp(&rec[1]).ok_or_else(|| bad("timestamp"))?;
        out.push(RawPoint { object_id: rec[0].to_string(), timestamp, lat, lon });
    }
    Ok(out)
}

/// Groups points by object in order of first appearance; each group is
/// stably sorted by timestamp.
pub fn group_by_object(points: Vec<RawPoint>) -> Vec<(String, Vec<RawPoint>)> {
    let mut index: std::collections::HashMap<String, usize> = Default::default();
    let mut groups: Vec<(String, Vec<RawPoint>)> = Vec::new();
    for p in points {
        let slot = *index.entry(p.object_id.clone()).or_insert_with(|| {
            groups.push((p.object_id.clone(), Vec::new()));
            groups.len() - 1
        });
        groups[slot].1.push(p);
    }
    for (_, g) in &mut groups {
        g.sort_by_key(|p| p.timestamp);
    }
    groups
}

/// Bounding box of all finite points, widened slightly when degenerate.
pub fn covering_grid(points: &[RawPoint], rows: u32, cols: u32) -> Result<GridSpec, IngestError> {
    let finite = points.iter().filter(|p| p.lat.is_finite() && p.lon.is_finite());
    let (mut lat_min, mut lat_max, mut lon_min, mut lon_max) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    let mut any = false;
    for p in finite {
        any = true;
        lat_min = lat_min.min(p.lat);
        lat_max = lat_max.max(p.lat);
        lon_min = lon_min.min(p.lon);
        lon_max = lon_max.max(p.lon);
    }
    if !any {
        return Err(IngestError::Empty);
    }
    if lat_min == lat_max {
        lat_max = lat_min + 1e-9;
    }
    if lon_min == lon_max {
        lon_max = lon_min + 1e-9;
    }
    Ok(GridSpec::new(lat_min, lat_max, lon_min, lon_max, rows, cols)?)
}

/// Result of turning a point set into trajectories.
#[derive(Debug, Default)]
pub struct IngestOutcome {
    pub trajectories: Vec<Trajectory>,
    /// Objects that were dropped, with the reason.
    pub skipped: Vec<(String, String)>,
}

/// Regionizes and gap-bridges every object; objects that fail are skipped.
pub fn ingest_points(points: Vec<RawPoint>, grid: &GridSpec, policy: GapPolicy, clamp: bool) -> IngestOutcome {
    let mut out = IngestOutcome::default();
    for (id, pts) in group_by_object(points) {
        let cells = if clamp { regionize_clamped(&pts, grid) } else { regionize(&pts, grid) };
        let result = cells.and_then(|c| bridge_gaps(&c, grid, policy));
        match result {
            Ok(regions) if regions.len() >= 2 => out.trajectories.push(Trajectory::new(id, regions)),
            Ok(_) => out.skipped.push((id, "fewer than 2 distinct regions".to_string())),
            Err(e) => out.skipped.push((id, e.to_string())),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(lat: f64, lon: f64) -> RawPoint {
        RawPoint { object_id: "o".into(), timestamp: 0, lat, lon }
    }

    fn cells(v: &[RegionId]) -> Vec<u32> {
        v.iter().map(|r| r.0).collect()
    }

    #[test]
    fn regionize_examples() {
        let g = GridSpec::cells(2, 2).unwrap();
        assert_eq!(cells(&regionize(&[pt(0.25, 0.25)], &g).unwrap()), vec![0]);
        let seq = regionize(&[pt(0.25, 0.25), pt(0.26, 0.26), pt(0.25, 0.75)], &g).unwrap();
        assert_eq!(cells(&seq), vec![0, 1]);
        // The upper edge is inside and lands in the last cell.
        assert_eq!(cells(&regionize(&[pt(1.0, 1.0)], &g).unwrap()), vec![3]);
    }

    #[test]
    fn regionize_errors() {
        let g = GridSpec::cells(2, 2).unwrap();
        assert_eq!(regionize(&[], &g), Err(IngestError::Empty));
        let err = regionize(&[pt(0.5, 0.5), pt(1.5, 0.2)], &g).unwrap_err();
        assert_eq!(err, IngestError::OutOfBox { index: 1, lat: 1.5, lon: 0.2 });
        assert_eq!(cells(&regionize_clamped(&[pt(0.1, 0.1), pt(1.5, 0.2)], &g).unwrap()), vec![0, 2]);
    }

    #[test]
    fn gap_examples() {
        let g2 = GridSpec::cells(2, 2).unwrap();
        let seq = [RegionId(0), RegionId(1)];
        for p in [GapPolicy::Reject, GapPolicy::Rasterize] {
            assert_eq!(bridge_gaps(&seq, &g2, p).unwrap(), seq.to_vec());
        }
        let g3 = GridSpec::cells(3, 3).unwrap();
        let jump = [RegionId(0), RegionId(8)];
        assert_eq!(cells(&bridge_gaps(&jump, &g3, GapPolicy::Rasterize).unwrap()), vec![0, 4, 8]);
        assert_eq!(
            bridge_gaps(&jump, &g3, GapPolicy::Reject),
            Err(IngestError::Gap { index: 0, a: RegionId(0), b: RegionId(8) })
        );
    }

    #[test]
    fn csv_parsing() {
        let text = "object_id,timestamp,longitude,latitude\n\
                    1,2008-02-02 15:36:08,116.51172,39.92123\n\
                    1,1202000000,116.5,39.9\n";
        let pts = parse_points_csv(text).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].timestamp, 1201966568);
        assert_eq!(pts[0].lon, 116.51172);
        assert_eq!(pts[1].lat, 39.9);
        let err = parse_points_csv("1,2008-02-02 15:36:08,116.5\n").unwrap_err();
        assert!(matches!(err, IngestError::Malformed { line: 1, .. }));
        let err = parse_points_csv("1,0,1,2\n1,noon,1,2\n").unwrap_err();
        assert_eq!(err, IngestError::Malformed { line: 2, message: "invalid timestamp".into() });
    }

    #[test]
    fn grouping_sorts_each_object() {
        let mk = |id: &str, t: i64| RawPoint { object_id: id.into(), timestamp: t, lat: 0.0, lon: 0.0 };
        let groups = group_by_object(vec![mk("b", 5), mk("a", 3), mk("b", 1)]);
        assert_eq!(groups[0].0, "b");
        assert_eq!(groups[0].1.iter().map(|p| p.timestamp).collect::<Vec<_>>(), vec![1, 5]);
        assert_eq!(groups[1].0, "a");
    }
}
