//! Grid partitionings, trajectories over them, and pairwise classification.
//!
//! A map is cut into a `rows x cols` grid of cells. Two distinct cells are
//! externally connected when they share an edge or a corner (8-adjacency); a
//! cell is equal only to itself. A trajectory is a sequence of at least two
//! cells in which consecutive cells are externally connected.

mod classify;
mod file;
mod generate;
mod ingest;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{builtin_tc10, builtin_tc6, Calculus};

pub use classify::{classify, classify_checked, ClassifyError};
pub use file::{parse_trajectories, write_trajectories, TrajectoryFileError};
pub use generate::{enumerate_trajectories, random_trajectory, random_walk, Enumerate, GenerateError};
pub use ingest::{
    bridge_gaps, covering_grid, group_by_object, ingest_points, parse_points_csv, regionize, regionize_clamped,
    GapPolicy, IngestError, IngestOutcome, RawPoint,
};

/// Which trajectory calculus a trajectory set is interpreted in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CalcKind {
    Tc6,
    Tc10,
}

impl CalcKind {
    pub fn calculus(self) -> Calculus {
        match self {
            CalcKind::Tc6 => builtin_tc6(),
            CalcKind::Tc10 => builtin_tc10(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CalcKind::Tc6 => "tc6",
            CalcKind::Tc10 => "tc10",
        }
    }

    pub fn relation_count(self) -> usize {
        match self {
            CalcKind::Tc6 => 6,
            CalcKind::Tc10 => 10,
        }
    }
}

impl fmt::Display for CalcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CalcKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "tc6" => Ok(CalcKind::Tc6),
            "tc10" => Ok(CalcKind::Tc10),
            other => Err(format!("unknown calculus {other:?}, expected tc6 or tc10")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs at least one row and one column, got {rows}x{cols}")]
    Empty { rows: u32, cols: u32 },
    #[error("grid has more than 2^32 cells")]
    TooLarge,
    #[error("bounding box must satisfy lat_min < lat_max and lon_min < lon_max")]
    BadBox,
}

/// A rectangular partitioning of a latitude/longitude box into equal cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
    pub rows: u32,
    pub cols: u32,
}

impl GridSpec {
    pub fn new(lat_min: f64, lat_max: f64, lon_min: f64, lon_max: f64, rows: u32, cols: u32) -> Result<Self, GridError> {
        let g = GridSpec { lat_min, lat_max, lon_min, lon_max, rows, cols };
        g.check()?;
        Ok(g)
    }

    /// A grid over the unit box, for callers that only care about cell topology.
    pub fn cells(rows: u32, cols: u32) -> Result<Self, GridError> {
        GridSpec::new(0.0, 1.0, 0.0, 1.0, rows, cols)
    }

    pub fn check(&self) -> Result<(), GridError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(GridError::Empty { rows: self.rows, cols: self.cols });
        }
        if (self.rows as u64) * (self.cols as u64) > u32::MAX as u64 {
            return Err(GridError::TooLarge);
        }
        let ok = self.lat_min.is_finite()
            && self.lat_max.is_finite()
            && self.lon_min.is_finite()
            && self.lon_max.is_finite()
            && self.lat_min < self.lat_max
            && self.lon_min < self.lon_max;
        if !ok {
            return Err(GridError::BadBox);
        }
        Ok(())
    }

    #[inline]
    pub fn cell_count(&self) -> u32 {
        self.rows * self.cols
    }

    #[inline]
    pub fn contains(&self, r: RegionId) -> bool {
        r.0 < self.cell_count()
    }

    #[inline]
    pub fn region(&self, row: u32, col: u32) -> RegionId {
        debug_assert!(row < self.rows && col < self.cols);
        RegionId(row * self.cols + col)
    }

    #[inline]
    pub fn row_col(&self, r: RegionId) -> (u32, u32) {
        (r.0 / self.cols, r.0 % self.cols)
    }

    /// 8-adjacency between distinct cells.
    pub fn externally_connected(&self, a: RegionId, b: RegionId) -> bool {
        if a == b {
            return false;
        }
        let (ar, ac) = self.row_col(a);
        let (br, bc) = self.row_col(b);
        ar.abs_diff(br) <= 1 && ac.abs_diff(bc) <= 1
    }

    /// The 8-neighbours of a cell in ascending id order.
    pub fn neighbours(&self, r: RegionId) -> impl Iterator<Item = RegionId> + '_ {
        let (row, col) = self.row_col(r);
        let rows = row.saturating_sub(1)..=(row + 1).min(self.rows - 1);
        rows.flat_map(move |nr| {
            (col.saturating_sub(1)..=(col + 1).min(self.cols - 1)).map(move |nc| (nr, nc))
        })
        .filter(move |&(nr, nc)| (nr, nc) != (row, col))
        .map(move |(nr, nc)| self.region(nr, nc))
    }
}

/// A grid cell, numbered `row * cols + col`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionId(pub u32);

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A named region sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trajectory {
    pub id: String,
    pub regions: Vec<RegionId>,
}

impl Trajectory {
    pub fn new(id: impl Into<String>, regions: Vec<RegionId>) -> Self {
        Trajectory { id: id.into(), regions }
    }

    /// Convenience constructor from raw cell numbers.
    pub fn from_cells(id: impl Into<String>, cells: &[u32]) -> Self {
        Trajectory::new(id, cells.iter().map(|&c| RegionId(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn start(&self) -> RegionId {
        self.regions[0]
    }

    pub fn finish(&self) -> RegionId {
        self.regions[self.regions.len() - 1]
    }

    pub fn reversed(&self) -> Trajectory {
        let mut regions = self.regions.clone();
        regions.reverse();
        Trajectory { id: format!("{}~rev", self.id), regions }
    }
}

/// A clause of the trajectory definition that a sequence fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrajectoryViolation {
    TooShort { len: usize },
    OutsideGrid { index: usize, region: RegionId },
    ConsecutiveEqual { index: usize },
    NotAdjacent { index: usize },
    StartEqualsFinish,
}

impl fmt::Display for TrajectoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrajectoryViolation::TooShort { len } => write!(f, "length {len} < 2"),
            TrajectoryViolation::OutsideGrid { index, region } => {
                write!(f, "region {region} at index {index} is outside the grid")
            }
            TrajectoryViolation::ConsecutiveEqual { index } => {
                write!(f, "consecutive equal at ({},{})", index, index + 1)
            }
            TrajectoryViolation::NotAdjacent { index } => {
                write!(f, "regions at ({},{}) are not externally connected", index, index + 1)
            }
            TrajectoryViolation::StartEqualsFinish => write!(f, "t1 = tn"),
        }
    }
}

/// Lists every clause the trajectory violates; empty means valid.
pub fn validate_trajectory(t: &Trajectory, grid: &GridSpec, mode: CalcKind) -> Vec<TrajectoryViolation> {
    let mut out = Vec::new();
    if t.regions.len() < 2 {
        out.push(TrajectoryViolation::TooShort { len: t.regions.len() });
    }
    for (index, &region) in t.regions.iter().enumerate() {
        if !grid.contains(region) {
            out.push(TrajectoryViolation::OutsideGrid { index, region });
        }
    }
    for (index, w) in t.regions.windows(2).enumerate() {
        if w[0] == w[1] {
            out.push(TrajectoryViolation::ConsecutiveEqual { index });
        } else if grid.contains(w[0]) && grid.contains(w[1]) && !grid.externally_connected(w[0], w[1]) {
            out.push(TrajectoryViolation::NotAdjacent { index });
        }
    }
    if mode == CalcKind::Tc10 && t.regions.len() >= 2 && t.start() == t.finish() {
        out.push(TrajectoryViolation::StartEqualsFinish);
    }
    out
}
