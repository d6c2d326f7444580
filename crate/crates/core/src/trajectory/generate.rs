use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{CalcKind, GridSpec, RegionId, Trajectory};

/// Attempts made before a tc10 walk that keeps returning to its start is declared infeasible.
const TC10_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("trajectories need at least 2 regions, requested {0}")]
    TooShort(usize),
    #[error("a {rows}x{cols} grid has no externally connected cells")]
    NoNeighbours { rows: u32, cols: u32 },
    #[error("no {mode} walk of length {len} found after {attempts} attempts")]
    Infeasible { mode: CalcKind, len: usize, attempts: usize },
}

/// A uniform random 8-connected walk: uniform start cell, then a uniform
/// neighbour at every step. Deterministic for a given seed.
pub fn random_trajectory(grid: &GridSpec, length: usize, mode: CalcKind, seed: u64) -> Result<Trajectory, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = random_walk(grid, length, mode, &mut rng)?;
    t.id = format!("r{seed}");
    Ok(t)
}

/// Same as [`random_trajectory`] but draws from a caller-owned generator, for
/// producing many walks from one seed.
pub fn random_walk<R: Rng + ?Sized>(
    grid: &GridSpec,
    length: usize,
    mode: CalcKind,
    rng: &mut R,
) -> Result<Trajectory, GenerateError> {
    if length < 2 {
        return Err(GenerateError::TooShort(length));
    }
    if grid.cell_count() < 2 {
        return Err(GenerateError::NoNeighbours { rows: grid.rows, cols: grid.cols });
    }
    let mut buf: Vec<RegionId> = Vec::with_capacity(8);
    for _ in 0..TC10_RETRIES {
        let mut regions = Vec::with_capacity(length);
        regions.push(RegionId(rng.random_range(0..grid.cell_count())));
        while regions.len() < length {
            buf.clear();
            buf.extend(grid.neighbours(*regions.last().unwrap()));
            regions.push(buf[rng.random_range(0..buf.len())]);
        }
        if mode == CalcKind::Tc6 || regions[0] != regions[length - 1] {
            return Ok(Trajectory::new("walk", regions));
        }
    }
    Err(GenerateError::Infeasible { mode, len: length, attempts: TC10_RETRIES })
}

/// Every valid trajectory of length `2..=max_len` on `grid`, each exactly
/// once, in lexicographic order of region sequences.
pub fn enumerate_trajectories(grid: &GridSpec, max_len: usize, mode: CalcKind) -> Enumerate<'_> {
    Enumerate { grid, max_len, mode, path: Vec::new(), stack: Vec::new(), next_start: 0, counter: 0 }
}

/// Depth-first iterator behind [`enumerate_trajectories`].
pub struct Enumerate<'g> {
    grid: &'g GridSpec,
    max_len: usize,
    mode: CalcKind,
    path: Vec<RegionId>,
    // Remaining neighbour candidates for each depth of `path`.
    stack: Vec<Vec<RegionId>>,
    next_start: u32,
    counter: usize,
}

impl Enumerate<'_> {
    fn push(&mut self, r: RegionId) {
        self.path.push(r);
        let mut next: Vec<RegionId> =
            if self.path.len() < self.max_len { self.grid.neighbours(r).collect() } else { Vec::new() };
        next.reverse();
        self.stack.push(next);
    }
}

impl Iterator for Enumerate<'_> {
    type Item = Trajectory;

    fn next(&mut self) -> Option<Trajectory> {
        if self.max_len < 2 {
            return None;
        }
        loop {
            match self.stack.last_mut() {
                None => {
                    if self.next_start >= self.grid.cell_count() {
                        return None;
                    }
                    let s = RegionId(self.next_start);
                    self.next_start += 1;
                    self.push(s);
                }
                Some(candidates) => match candidates.pop() {
                    Some(r) => {
                        self.push(r);
                        let ok = self.mode == CalcKind::Tc6 || self.path[0] != r;
                        if ok {
                            self.counter += 1;
                            return Some(Trajectory::new(format!("e{}", self.counter), self.path.clone()));
                        }
                    }
                    None => {
                        self.stack.pop();
                        self.path.pop();
                    }
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::validate_trajectory;

    fn grid(r: u32, c: u32) -> GridSpec {
        GridSpec::cells(r, c).unwrap()
    }

    #[test]
    fn three_by_three_length_two() {
        // Independent count: sum of 8-neighbour degrees = 4 corners * 3 + 4 edges * 5 + 1 centre * 8.
        let g = grid(3, 3);
        let degree_sum: usize = (0..9).map(|c| g.neighbours(RegionId(c)).count()).sum();
        assert_eq!(degree_sum, 4 * 3 + 4 * 5 + 8);
        assert_eq!(enumerate_trajectories(&g, 2, CalcKind::Tc6).count(), 40);
    }

    #[test]
    fn tiny_grids() {
        let g = grid(1, 2);
        let all: Vec<Vec<u32>> =
            enumerate_trajectories(&g, 2, CalcKind::Tc6).map(|t| t.regions.iter().map(|r| r.0).collect()).collect();
        assert_eq!(all, vec![vec![0, 1], vec![1, 0]]);
        let len3 = enumerate_trajectories(&g, 3, CalcKind::Tc10).filter(|t| t.len() == 3).count();
        assert_eq!(len3, 0);
        assert_eq!(enumerate_trajectories(&grid(1, 1), 4, CalcKind::Tc6).count(), 0);
        assert_eq!(enumerate_trajectories(&g, 1, CalcKind::Tc6).count(), 0);
    }

    #[test]
    fn order_is_lexicographic_and_unique() {
        let g = grid(2, 3);
        for mode in [CalcKind::Tc6, CalcKind::Tc10] {
            let seqs: Vec<Vec<RegionId>> = enumerate_trajectories(&g, 4, mode).map(|t| t.regions).collect();
            assert!(seqs.windows(2).all(|w| w[0] < w[1]));
            assert!(seqs.iter().all(|s| validate_trajectory(&Trajectory::new("x", s.clone()), &g, mode).is_empty()));
        }
    }

    #[test]
    fn random_walks() {
        let g = grid(10, 10);
        let a = random_trajectory(&g, 12, CalcKind::Tc10, 7).unwrap();
        let b = random_trajectory(&g, 12, CalcKind::Tc10, 7).unwrap();
        assert_eq!(a, b);
        assert!(validate_trajectory(&a, &g, CalcKind::Tc10).is_empty());

        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut returned = 0;
        for _ in 0..10_000 {
            let len = rng.random_range(2..=6);
            let t = random_walk(&grid(3, 3), len, CalcKind::Tc10, &mut rng).unwrap();
            if t.start() == t.finish() {
                returned += 1;
            }
        }
        assert_eq!(returned, 0);
    }

    #[test]
    fn infeasible_requests() {
        assert_eq!(random_trajectory(&grid(3, 3), 1, CalcKind::Tc6, 0), Err(GenerateError::TooShort(1)));
        assert!(matches!(random_trajectory(&grid(1, 1), 2, CalcKind::Tc6, 0), Err(GenerateError::NoNeighbours { .. })));
        assert!(matches!(random_trajectory(&grid(1, 2), 3, CalcKind::Tc10, 0), Err(GenerateError::Infeasible { .. })));
        assert!(random_trajectory(&grid(1, 2), 2, CalcKind::Tc10, 0).is_ok());
    }
}
