//! Benchmark harness: synthetic or supplied trajectories, revealed
//! relations as singleton constraints, and timed native solving.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::calculus::{RelationId, RelationSet};
use crate::solver::{canonical_pairs, solve_with, Instance, Outcome, SolveOptions, SolverError};
use crate::trajectory::{classify, random_walk, CalcKind, GenerateError, GridSpec, Trajectory};

/// Grid resolution of the synthetic city.
pub const SYNTHETIC_ROWS: u32 = 100;
pub const SYNTHETIC_COLS: u32 = 200;
/// Length distribution of synthetic trajectories, in regions.
pub const SYNTHETIC_MEAN_LEN: f64 = 282.0;
pub const SYNTHETIC_STD_LEN: f64 = 33.27;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    /// Growing element count, one revealed relation per element.
    Exp1,
    /// Fixed element count, growing revealed relations per element.
    Exp2,
}

impl std::str::FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exp1" => Ok(Experiment::Exp1),
            "exp2" => Ok(Experiment::Exp2),
            other => Err(format!("unknown experiment {other:?}, expected exp1 or exp2")),
        }
    }
}

/// One CSV row of benchmark output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub experiment: Experiment,
    pub calculus: String,
    pub n_elements: usize,
    pub known_per_element: usize,
    pub wall_ms: f64,
    pub peak_rss_bytes: u64,
    pub status: String,
}

/// A row plus facts that are logged but not part of the CSV contract.
#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub row: BenchRow,
    pub revealed: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub nodes: u64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("only {have} trajectories available, {need} requested")]
    NotEnoughTrajectories { have: usize, need: usize },
    #[error("{0}")]
    Config(String),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

pub enum Source {
    Synthetic,
    Trajectories(Vec<Trajectory>),
}

pub struct BenchConfig {
    pub experiment: Experiment,
    pub kind: CalcKind,
    /// Element counts (exp1) or revealed relations per element (exp2).
    pub sizes: Vec<usize>,
    /// Element count for exp2.
    pub fixed_elements: usize,
    pub seed: u64,
    pub budget: Duration,
    pub source: Source,
    /// Run rows concurrently; timings are then less faithful.
    pub parallel: bool,
}

impl BenchConfig {
    pub fn new(experiment: Experiment, kind: CalcKind, sizes: Vec<usize>) -> Self {
        BenchConfig {
            experiment,
            kind,
            sizes,
            fixed_elements: 50,
            seed: 0,
            budget: Duration::from_secs(600),
            source: Source::Synthetic,
            parallel: false,
        }
    }
}

/// Default exp1 element counts.
pub fn default_exp1_sizes() -> Vec<usize> {
    (10..=250).step_by(10).collect()
}

/// Default exp2 per-element counts.
pub fn default_exp2_sizes() -> Vec<usize> {
    let mut v = vec![3];
    v.extend((5..=50).step_by(5));
    v
}

/// `count` random walks on the synthetic grid with normally distributed
/// lengths. Prefixes of the pool are the pools for smaller counts.
pub fn synthetic_pool(kind: CalcKind, count: usize, seed: u64) -> Result<Vec<Trajectory>, GenerateError> {
    let grid = GridSpec::cells(SYNTHETIC_ROWS, SYNTHETIC_COLS).expect("constant grid is valid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lengths = Normal::new(SYNTHETIC_MEAN_LEN, SYNTHETIC_STD_LEN).expect("finite parameters");
    (0..count)
        .map(|i| {
            let len = lengths.sample(&mut rng).round().max(2.0) as usize;
            let mut t = random_walk(&grid, len, kind, &mut rng)?;
            t.id = format!("t{i}");
            Ok(t)
        })
        .collect()
}

/// The relation of every canonical pair, in pair order.
pub fn classify_all(kind: CalcKind, ts: &[Trajectory]) -> Vec<RelationId> {
    let n = ts.len();
    let pairs: Vec<(usize, usize)> = canonical_pairs(n).collect();
    pairs.par_iter().map(|&(i, j)| classify(kind, &ts[i], &ts[j])).collect()
}

/// Random graph on `n` nodes where every node gets degree `k` when the
/// greedy pass allows it (`k` is clamped to `n - 1`). Edges are canonical.
pub fn reveal_pairs(n: usize, k: usize, seed: u64) -> Vec<(usize, usize)> {
    let k = k.min(n.saturating_sub(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = canonical_pairs(n).collect();
    pairs.shuffle(&mut rng);
    let mut degree = vec![0usize; n];
    let mut out = Vec::new();
    for (i, j) in pairs {
        if degree[i] < k && degree[j] < k {
            degree[i] += 1;
            degree[j] += 1;
            out.push((i, j));
        }
    }
    out.sort_unstable();
    out
}

/// An instance whose constraints are the true relations of the revealed
/// pairs, so the trajectories themselves form a model. Each constraint is
/// written with a random orientation.
pub fn revealed_instance(
    kind: CalcKind,
    ts: &[Trajectory],
    relations: &[RelationId],
    revealed: &[(usize, usize)],
    seed: u64,
) -> Instance {
    let calc = kind.calculus();
    let n = ts.len();
    let mut inst = Instance::new(calc, ts.iter().map(|t| t.id.clone()).collect()).expect("trajectory ids are unique");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for &(i, j) in revealed {
        let r = relations[crate::solver::pair_index(n, i, j)];
        let (x, y, r) = if rng.random_bool(0.5) { (i, j, r) } else { (j, i, inst.calculus().converse(r)) };
        inst.add_constraint_at(x, y, RelationSet::singleton(r)).expect("indices are in range");
    }
    inst
}

/// Peak resident set size of this process in bytes, 0 when unknown.
pub fn peak_rss_bytes() -> u64 {
    let Ok(status) = std::fs::read_to_string("/proc/self/status") else { return 0 };
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|rest| rest.trim().trim_end_matches("kB").trim().parse::<u64>().ok())
        .map_or(0, |kb| kb * 1024)
}

struct Job {
    n: usize,
    k: usize,
}

fn run_job(cfg: &BenchConfig, pool: &[Trajectory], relations_for: &dyn Fn(usize) -> Vec<RelationId>, job: &Job) -> Result<BenchRecord, BenchError> {
    let ts = &pool[..job.n];
    let relations = relations_for(job.n);
    let revealed = reveal_pairs(job.n, job.k, cfg.seed.wrapping_add(job.n as u64 * 1_000_003 + job.k as u64));
    let inst = revealed_instance(cfg.kind, ts, &relations, &revealed, cfg.seed.wrapping_add(job.k as u64));
    let mut degree = vec![0usize; job.n];
    for &(i, j) in &revealed {
        degree[i] += 1;
        degree[j] += 1;
    }
    let start = Instant::now();
    let (outcome, stats) = solve_with(&inst, &SolveOptions { deadline: Some(start + cfg.budget) })?;
    let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
    if outcome == Outcome::Unsat {
        // A configuration exists by construction, so this is a solver bug.
        return Err(BenchError::Config(format!("instance with {} elements reported unsat", job.n)));
    }
    Ok(BenchRecord {
        row: BenchRow {
            experiment: cfg.experiment,
            calculus: cfg.kind.name().to_string(),
            n_elements: job.n,
            known_per_element: job.k,
            wall_ms,
            peak_rss_bytes: peak_rss_bytes(),
            status: outcome.status().to_string(),
        },
        revealed: revealed.len(),
        min_degree: degree.iter().copied().min().unwrap_or(0),
        max_degree: degree.iter().copied().max().unwrap_or(0),
        nodes: stats.nodes,
    })
}

/// Runs every configured row.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    let jobs: Vec<Job> = match cfg.experiment {
        Experiment::Exp1 => cfg.sizes.iter().map(|&n| Job { n, k: 1 }).collect(),
        Experiment::Exp2 => cfg.sizes.iter().map(|&k| Job { n: cfg.fixed_elements, k }).collect(),
    };
    let need = jobs.iter().map(|j| j.n).max().unwrap_or(0);
    if jobs.iter().any(|j| j.n < 2) {
        return Err(BenchError::Config("every row needs at least 2 elements".into()));
    }
    let pool = match &cfg.source {
        Source::Synthetic => synthetic_pool(cfg.kind, need, cfg.seed)?,
        Source::Trajectories(ts) => {
            if ts.len() < need {
                return Err(BenchError::NotEnoughTrajectories { have: ts.len(), need });
            }
            ts[..need].to_vec()
        }
    };
    // Relations of the largest prefix, sliced down for smaller rows.
    let all = classify_all(cfg.kind, &pool);
    let relations_for = |n: usize| -> Vec<RelationId> {
        canonical_pairs(n).map(|(i, j)| all[crate::solver::pair_index(need, i, j)]).collect()
    };
    if cfg.parallel {
        jobs.par_iter().map(|job| run_job(cfg, &pool, &relations_for, job)).collect()
    } else {
        jobs.iter().map(|job| run_job(cfg, &pool, &relations_for, job)).collect()
    }
}

/// Writes rows as CSV with a header.
pub fn write_rows<W: std::io::Write>(rows: &[BenchRow], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reveal_graph_degrees() {
        for (n, k) in [(50, 3), (50, 10), (50, 49), (10, 1), (7, 1)] {
            let edges = reveal_pairs(n, k, 4);
            let mut deg = vec![0; n];
            for &(i, j) in &edges {
                assert!(i < j);
                deg[i] += 1;
                deg[j] += 1;
            }
            assert!(deg.iter().all(|&d| d <= k));
            let full = deg.iter().filter(|&&d| d == k).count();
            assert!(full + 2 >= n, "n={n} k={k} degrees {deg:?}");
        }
        assert_eq!(reveal_pairs(5, 9, 0).len(), 10);
    }

    #[test]
    fn pool_is_nested_and_valid() {
        let small = synthetic_pool(CalcKind::Tc10, 3, 11).unwrap();
        let large = synthetic_pool(CalcKind::Tc10, 6, 11).unwrap();
        assert_eq!(small[..], large[..3]);
        let grid = GridSpec::cells(SYNTHETIC_ROWS, SYNTHETIC_COLS).unwrap();
        for t in &large {
            assert!(crate::trajectory::validate_trajectory(t, &grid, CalcKind::Tc10).is_empty());
        }
    }
}
