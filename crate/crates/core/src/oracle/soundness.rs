use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::{Calculus, RelationId};
use crate::trajectory::{classify, enumerate_trajectories, CalcKind, GridSpec, Trajectory};

/// At most this many violations are stored in a report; the count is exact.
pub const MAX_RECORDED_VIOLATIONS: usize = 10_000;

/// Triples per independently seeded chunk in sampled mode.
const SAMPLE_CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Sampling {
    /// Every ordered triple, repetitions included.
    Exhaustive,
    /// `count` uniformly drawn ordered triples.
    Sampled { count: u64, seed: u64 },
}

/// A triple whose outer relation is missing from the table cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessViolation {
    pub t1: Vec<u32>,
    pub t2: Vec<u32>,
    pub t3: Vec<u32>,
    pub r12: String,
    pub r23: String,
    pub r13: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub calculus: String,
    pub rows: u32,
    pub cols: u32,
    pub max_len: usize,
    pub sampling: Sampling,
    pub trajectories: usize,
    pub triples_checked: u64,
    pub violation_count: u64,
    /// The first violations found, capped at [`MAX_RECORDED_VIOLATIONS`].
    pub violations: Vec<SoundnessViolation>,
    /// Observed `(r12, r23, r13)` combinations, sorted.
    pub witnessed: Vec<[String; 3]>,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.violation_count == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Per-worker accumulator; merging is associative.
struct Acc {
    k: usize,
    checked: u64,
    count: u64,
    bad: Vec<(usize, usize, usize)>,
    witnessed: Vec<bool>,
}

impl Acc {
    fn new(k: usize) -> Self {
        Acc { k, checked: 0, count: 0, bad: Vec::new(), witnessed: vec![false; k * k * k] }
    }

    #[inline]
    fn record(&mut self, calc: &Calculus, idx: (usize, usize, usize), r12: RelationId, r23: RelationId, r13: RelationId) {
        self.checked += 1;
        let k = self.k;
        self.witnessed[(r12.index() * k + r23.index()) * k + r13.index()] = true;
        if !calc.compose(r12, r23).contains(r13) {
            self.count += 1;
            if self.bad.len() < MAX_RECORDED_VIOLATIONS {
                self.bad.push(idx);
            }
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.checked += other.checked;
        self.count += other.count;
        let room = MAX_RECORDED_VIOLATIONS - self.bad.len();
        self.bad.extend(other.bad.into_iter().take(room));
        for (w, o) in self.witnessed.iter_mut().zip(other.witnessed) {
            *w |= o;
        }
        self
    }
}

/// Matrix of classifications over a trajectory list, row-major.
fn relation_matrix(kind: CalcKind, ts: &[Trajectory]) -> Vec<RelationId> {
    let n = ts.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (0..n).map(move |j| classify(kind, &ts[i], &ts[j])))
        .collect()
}

/// Checks composition soundness of the built-in table for `kind`.
pub fn verify_soundness(kind: CalcKind, grid: &GridSpec, max_len: usize, sampling: Sampling) -> SoundnessReport {
    verify_soundness_with(&kind.calculus(), kind, grid, max_len, sampling)
}

/// Checks `calc`'s table against classifications made under `kind`. The
/// calculus must use the same alphabet as `kind`; this is how edited or
/// corrupted tables are tested.
pub fn verify_soundness_with(
    calc: &Calculus,
    kind: CalcKind,
    grid: &GridSpec,
    max_len: usize,
    sampling: Sampling,
) -> SoundnessReport {
    assert_eq!(calc.len(), kind.relation_count(), "calculus alphabet must match the trajectory calculus");
    let ts: Vec<Trajectory> = enumerate_trajectories(grid, max_len, kind).collect();
    let n = ts.len();
    let k = calc.len();
    let acc = if n == 0 {
        Acc::new(k)
    } else {
        match sampling {
            Sampling::Exhaustive => {
                let m = relation_matrix(kind, &ts);
                (0..n)
                    .into_par_iter()
                    .fold(
                        || Acc::new(k),
                        |mut acc, a| {
                            for b in 0..n {
                                let r12 = m[a * n + b];
                                for c in 0..n {
                                    acc.record(calc, (a, b, c), r12, m[b * n + c], m[a * n + c]);
                                }
                            }
                            acc
                        },
                    )
                    .reduce(|| Acc::new(k), Acc::merge)
            }
            Sampling::Sampled { count, seed } => {
                let chunks = count.div_ceil(SAMPLE_CHUNK);
                (0..chunks)
                    .into_par_iter()
                    .map(|chunk| {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        rng.set_stream(chunk);
                        let mut acc = Acc::new(k);
                        let todo = SAMPLE_CHUNK.min(count - chunk * SAMPLE_CHUNK);
                        for _ in 0..todo {
                            let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                            let r12 = classify(kind, &ts[a], &ts[b]);
                            let r23 = classify(kind, &ts[b], &ts[c]);
                            let r13 = classify(kind, &ts[a], &ts[c]);
                            acc.record(calc, (a, b, c), r12, r23, r13);
                        }
                        acc
                    })
                    .reduce(|| Acc::new(k), Acc::merge)
            }
        }
    };

    let cells = |t: &Trajectory| t.regions.iter().map(|r| r.0).collect::<Vec<_>>();
    let sym = |r: RelationId| calc.symbol(r).to_string();
    let mut bad = acc.bad;
    bad.sort_unstable();
    let violations = bad
        .into_iter()
        .map(|(a, b, c)| SoundnessViolation {
            t1: cells(&ts[a]),
            t2: cells(&ts[b]),
            t3: cells(&ts[c]),
            r12: sym(classify(kind, &ts[a], &ts[b])),
            r23: sym(classify(kind, &ts[b], &ts[c])),
            r13: sym(classify(kind, &ts[a], &ts[c])),
        })
        .collect();
    let mut witnessed = Vec::new();
    for (pos, &seen) in acc.witnessed.iter().enumerate() {
        if seen {
            let id = |x: usize| RelationId(x as u8);
            witnessed.push([sym(id(pos / (k * k))), sym(id(pos / k % k)), sym(id(pos % k))]);
        }
    }
    SoundnessReport {
        calculus: calc.name().to_string(),
        rows: grid.rows,
        cols: grid.cols,
        max_len,
        sampling,
        trajectories: n,
        triples_checked: acc.checked,
        violation_count: acc.count,
        violations,
        witnessed,
    }
}

/// Table entries `(r1, r2, r3)` with `r3` in `c(r1, r2)` that the report
/// never observed, in row-major table order.
pub fn coverage_report(report: &SoundnessReport, calc: &Calculus) -> Vec<(RelationId, RelationId, RelationId)> {
    let seen: std::collections::HashSet<[&str; 3]> =
        report.witnessed.iter().map(|[a, b, c]| [a.as_str(), b.as_str(), c.as_str()]).collect();
    let mut out = Vec::new();
    for r1 in calc.relations() {
        for r2 in calc.relations() {
            for r3 in calc.compose(r1, r2) {
                if !seen.contains(&[calc.symbol(r1), calc.symbol(r2), calc.symbol(r3)]) {
                    out.push((r1, r2, r3));
                }
            }
        }
    }
    out
}
