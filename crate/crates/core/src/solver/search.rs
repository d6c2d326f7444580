use std::time::{Duration, Instant};

use thiserror::Error;

use crate::calculus::{validate_calculus, RelationId, RelationSet};

use super::network::{build_network, Network, Stop};
use super::{canonical_pairs, Assignment, Instance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    /// The canonical-pair search is only sound for calculi satisfying every
    /// law checked by `validate_calculus`.
    #[error("calculus {name:?} fails validation:\n{report}")]
    InvalidCalculus { name: String, report: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Sat(Assignment),
    Unsat,
    Timeout,
}

impl Outcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Sat(_))
    }

    pub fn status(&self) -> &'static str {
        match self {
            Outcome::Sat(_) => "sat",
            Outcome::Unsat => "unsat",
            Outcome::Timeout => "timeout",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    pub deadline: Option<Instant>,
}

impl SolveOptions {
    pub fn with_budget(budget: Duration) -> Self {
        SolveOptions { deadline: Some(Instant::now() + budget) }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Values tried.
    pub nodes: u64,
    /// Exhausted branching points.
    pub backtracks: u64,
    /// Domain reductions made by propagation.
    pub revisions: u64,
}

/// Decisions between deadline checks.
const NODE_CHECK_INTERVAL: u64 = 256;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Branching {
    /// Smallest undecided domain first, ties by pair order.
    MinDomain,
    /// First undecided pair in pair order.
    Static,
}

struct Frame {
    i: usize,
    j: usize,
    remaining: RelationSet,
    mark: usize,
}

struct Search {
    net: Network,
    branching: Branching,
    deadline: Option<Instant>,
    stats: SearchStats,
    frames: Vec<Frame>,
    started: bool,
    done: bool,
}

enum Step {
    Model(Assignment),
    Exhausted,
    Timeout,
}

fn check_calculus(inst: &Instance) -> Result<(), SolverError> {
    let calc = inst.calculus();
    let report = validate_calculus(calc);
    if report.is_valid() {
        Ok(())
    } else {
        Err(SolverError::InvalidCalculus { name: calc.name().to_string(), report: report.render(calc).join("\n") })
    }
}

impl Search {
    fn new(inst: &Instance, branching: Branching, opts: &SolveOptions) -> Self {
        Search {
            net: build_network(inst),
            branching,
            deadline: opts.deadline,
            stats: SearchStats::default(),
            frames: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn select(&self) -> Option<(usize, usize)> {
        let n = self.net.len();
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..n {
            for j in i + 1..n {
                let size = self.net.domain(i, j).len();
                if size <= 1 {
                    continue;
                }
                if self.branching == Branching::Static || size == 2 {
                    return Some((i, j));
                }
                if best.is_none_or(|(_, _, b)| size < b) {
                    best = Some((i, j, size));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn extract(&self) -> Assignment {
        let n = self.net.len();
        let values: Vec<RelationId> = canonical_pairs(n)
            .map(|(i, j)| self.net.domain(i, j).single().expect("all pairs decided"))
            .collect();
        Assignment::from_canonical(self.net.calculus(), n, &values)
    }

    /// Advances to the next model in search order.
    fn next_model(&mut self) -> Step {
        if self.done {
            return Step::Exhausted;
        }
        if !self.started {
            self.started = true;
            if self.net.first_empty().is_some() {
                self.done = true;
                return Step::Exhausted;
            }
            self.net.seed_constrained();
            match self.net.propagate(self.deadline) {
                Ok(()) => {}
                Err(Stop::Empty(..)) => {
                    self.done = true;
                    return Step::Exhausted;
                }
                Err(Stop::Timeout) => return self.stop_timeout(),
            }
            if let Some(step) = self.descend() {
                return step;
            }
        }
        loop {
            let Some(top) = self.frames.last_mut() else {
                self.done = true;
                return Step::Exhausted;
            };
            let (i, j, mark) = (top.i, top.j, top.mark);
            let Some(v) = top.remaining.first() else {
                self.frames.pop();
                self.stats.backtracks += 1;
                continue;
            };
            top.remaining.remove(v);
            self.net.undo_to(mark);
            self.stats.nodes += 1;
            if self.stats.nodes.is_multiple_of(NODE_CHECK_INTERVAL) && self.timed_out() {
                return self.stop_timeout();
            }
            self.net.assign(i, j, RelationSet::singleton(v));
            match self.net.propagate(self.deadline) {
                Ok(()) => {
                    if let Some(step) = self.descend() {
                        return step;
                    }
                }
                Err(Stop::Empty(..)) => {}
                Err(Stop::Timeout) => return self.stop_timeout(),
            }
        }
    }

    /// Opens a branching point, or reports a model when every pair is decided.
    fn descend(&mut self) -> Option<Step> {
        match self.select() {
            Some((i, j)) => {
                let remaining = self.net.domain(i, j);
                self.frames.push(Frame { i, j, remaining, mark: self.net.trail_len() });
                None
            }
            None => Some(Step::Model(self.extract())),
        }
    }

    fn stop_timeout(&mut self) -> Step {
        self.done = true;
        Step::Timeout
    }

    fn finish_stats(&self) -> SearchStats {
        SearchStats { revisions: self.net.revisions, ..self.stats }
    }
}

#[cfg(debug_assertions)]
fn debug_verify(inst: &Instance, a: &Assignment) {
    let v = super::verify_assignment(inst, a);
    assert!(v.is_empty(), "solver produced a non-model: {:?}", v.iter().take(5).collect::<Vec<_>>());
}

#[cfg(not(debug_assertions))]
fn debug_verify(_: &Instance, _: &Assignment) {}

/// Decides model existence and returns one model if there is one.
pub fn solve(inst: &Instance) -> Result<Outcome, SolverError> {
    solve_with(inst, &SolveOptions::default()).map(|(o, _)| o)
}

/// [`solve`] with a deadline, also returning search statistics.
pub fn solve_with(inst: &Instance, opts: &SolveOptions) -> Result<(Outcome, SearchStats), SolverError> {
    check_calculus(inst)?;
    let mut search = Search::new(inst, Branching::MinDomain, opts);
    let outcome = match search.next_model() {
        Step::Model(a) => {
            debug_verify(inst, &a);
            Outcome::Sat(a)
        }
        Step::Exhausted => Outcome::Unsat,
        Step::Timeout => Outcome::Timeout,
    };
    Ok((outcome, search.finish_stats()))
}

/// All models, up to `limit`, in lexicographic order over canonical pairs
/// and relation declaration order.
pub fn enumerate_models(inst: &Instance, limit: Option<usize>) -> Result<Vec<Assignment>, SolverError> {
    enumerate_models_with(inst, limit, &SolveOptions::default()).map(|e| e.models)
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub models: Vec<Assignment>,
    /// False when the deadline cut the enumeration short.
    pub complete: bool,
    pub stats: SearchStats,
}

pub fn enumerate_models_with(
    inst: &Instance,
    limit: Option<usize>,
    opts: &SolveOptions,
) -> Result<Enumeration, SolverError> {
    check_calculus(inst)?;
    let mut search = Search::new(inst, Branching::Static, opts);
    let mut models = Vec::new();
    let mut complete = true;
    while limit.is_none_or(|l| models.len() < l) {
        match search.next_model() {
            Step::Model(a) => {
                debug_verify(inst, &a);
                models.push(a);
            }
            Step::Exhausted => break,
            Step::Timeout => {
                complete = false;
                break;
            }
        }
    }
    Ok(Enumeration { models, complete, stats: search.finish_stats() })
}
