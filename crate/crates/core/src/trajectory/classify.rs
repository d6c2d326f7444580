use std::collections::HashSet;

use thiserror::Error;

use super::{validate_trajectory, CalcKind, GridSpec, Trajectory};
use crate::calculus::{tc10, tc6, RelationId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("trajectory {id:?} is not a valid {mode} trajectory: {violation}")]
    Invalid { id: String, mode: CalcKind, violation: String },
}

fn shares_region(a: &Trajectory, b: &Trajectory) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.len() <= 8 {
        return large.regions.iter().any(|r| small.regions.contains(r));
    }
    let seen: HashSet<_> = small.regions.iter().copied().collect();
    large.regions.iter().any(|r| seen.contains(r))
}

/// The base relation holding from `t1` to `t2`.
///
/// Both trajectories are assumed valid for `kind`; use [`classify_checked`]
/// when that is not already established. The ladder below tests each relation
/// only after every earlier one failed:
///
/// * tc6: identical, same endpoints (alt), same start (s), same finish (f),
///   any shared region (i), otherwise dis.
/// * tc10: identical, exact reversal (rev), same endpoints (alt), swapped
///   endpoints (ret), same start, same finish, `t1` starts where `t2` finishes
///   (ex), `t1` finishes where `t2` starts (exi), shared region, otherwise dis.
///
/// Once the endpoint conditions fail, the index ranges attached to the
/// intersect definitions only exclude endpoint-to-endpoint matches, which are
/// already ruled out, so "intersect" is plain region sharing.
pub fn classify(kind: CalcKind, t1: &Trajectory, t2: &Trajectory) -> RelationId {
    let a = &t1.regions;
    let b = &t2.regions;
    let same_start = t1.start() == t2.start();
    let same_finish = t1.finish() == t2.finish();
    match kind {
        CalcKind::Tc6 => {
            if a == b {
                tc6::EQ
            } else if same_start && same_finish {
                tc6::ALT
            } else if same_start {
                tc6::S
            } else if same_finish {
                tc6::F
            } else if shares_region(t1, t2) {
                tc6::I
            } else {
                tc6::DIS
            }
        }
        CalcKind::Tc10 => {
            let start_at_finish = t1.start() == t2.finish();
            let finish_at_start = t1.finish() == t2.start();
            if a == b {
                tc10::EQ
            } else if a.len() == b.len() && a.iter().eq(b.iter().rev()) {
                tc10::REV
            } else if same_start && same_finish {
                tc10::ALT
            } else if start_at_finish && finish_at_start {
                tc10::RET
            } else if same_start {
                tc10::S
            } else if same_finish {
                tc10::F
            } else if start_at_finish {
                tc10::EX
            } else if finish_at_start {
                tc10::EXI
            } else if shares_region(t1, t2) {
                tc10::I
            } else {
                tc10::DIS
            }
        }
    }
}

fn require_valid(t: &Trajectory, grid: &GridSpec, kind: CalcKind) -> Result<(), ClassifyError> {
    match validate_trajectory(t, grid, kind).first() {
        None => Ok(()),
        Some(v) => Err(ClassifyError::Invalid { id: t.id.clone(), mode: kind, violation: v.to_string() }),
    }
}

/// [`classify`] after checking both trajectories against `grid` and `kind`.
pub fn classify_checked(
    kind: CalcKind,
    grid: &GridSpec,
    t1: &Trajectory,
    t2: &Trajectory,
) -> Result<RelationId, ClassifyError> {
    require_valid(t1, grid, kind)?;
    require_valid(t2, grid, kind)?;
    Ok(classify(kind, t1, t2))
}
