//! Text trajectory files: one `id: r1 r2 ...` line per trajectory.
//! Blank lines and lines starting with `#` are ignored.

use thiserror::Error;

use super::{RegionId, Trajectory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrajectoryFileError {
    #[error("line {line}: missing ':' after the trajectory id")]
    MissingColon { line: usize },
    #[error("line {line}: empty trajectory id")]
    EmptyId { line: usize },
    #[error("line {line}: {token:?} is not a region number")]
    BadRegion { line: usize, token: String },
    #[error("line {line}: trajectory {id:?} has no regions")]
    NoRegions { line: usize, id: String },
    #[error("line {line}: duplicate trajectory id {id:?}")]
    DuplicateId { line: usize, id: String },
}

pub fn parse_trajectories(text: &str) -> Result<Vec<Trajectory>, TrajectoryFileError> {
    let mut out: Vec<Trajectory> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (id, rest) = trimmed.split_once(':').ok_or(TrajectoryFileError::MissingColon { line })?;
        let id = id.trim();
        if id.is_empty() {
            return Err(TrajectoryFileError::EmptyId { line });
        }
        let regions = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>()
                    .map(RegionId)
                    .map_err(|_| TrajectoryFileError::BadRegion { line, token: tok.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if regions.is_empty() {
            return Err(TrajectoryFileError::NoRegions { line, id: id.to_string() });
        }
        if !seen.insert(id.to_string()) {
            return Err(TrajectoryFileError::DuplicateId { line, id: id.to_string() });
        }
        out.push(Trajectory::new(id, regions));
    }
    Ok(out)
}

pub fn write_trajectories(ts: &[Trajectory]) -> String {
    let mut out = String::new();
    for t in ts {
        out.push_str(&t.id);
        out.push(':');
        for r in &t.regions {
            out.push(' ');
            out.push_str(&r.0.to_string());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let ts = vec![Trajectory::from_cells("a", &[0, 1, 2]), Trajectory::from_cells("taxi 7", &[5, 4])];
        let text = write_trajectories(&ts);
        assert_eq!(text, "a: 0 1 2\ntaxi 7: 5 4\n");
        assert_eq!(parse_trajectories(&text).unwrap(), ts);
    }

    #[test]
    fn comments_and_errors() {
        let ts = parse_trajectories("# header\n\n x :1  2\n").unwrap();
        assert_eq!(ts, vec![Trajectory::from_cells("x", &[1, 2])]);
        assert_eq!(parse_trajectories("a 1 2").unwrap_err(), TrajectoryFileError::MissingColon { line: 1 });
        assert_eq!(
            parse_trajectories("a: 1 -2").unwrap_err(),
            TrajectoryFileError::BadRegion { line: 1, token: "-2".into() }
        );
        assert!(matches!(parse_trajectories("a: 1 2\na: 3 4").unwrap_err(), TrajectoryFileError::DuplicateId { line: 2, .. }));
        assert!(matches!(parse_trajectories("a:").unwrap_err(), TrajectoryFileError::NoRegions { .. }));
    }
}
