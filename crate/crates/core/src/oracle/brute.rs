use thiserror::Error;

use crate::calculus::RelationId;
use crate::solver::{verify_assignment, Assignment, Instance};

/// Default bound on `relations ^ canonical pairs`.
pub const DEFAULT_STATE_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute force would visit {states} assignments, above the cap of {cap}")]
    TooLarge { states: String, cap: u64 },
}

#[derive(Clone, Debug)]
pub struct BruteForce {
    /// Every model, in lexicographic canonical-pair order.
    pub models: Vec<Assignment>,
    pub states: u64,
}

impl BruteForce {
    pub fn is_sat(&self) -> bool {
        !self.models.is_empty()
    }
}

/// Tries every assignment of the canonical pairs and keeps the models.
pub fn brute_force_solve(inst: &Instance) -> Result<BruteForce, OracleError> {
    brute_force_solve_capped(inst, DEFAULT_STATE_CAP)
}

pub fn brute_force_solve_capped(inst: &Instance, cap: u64) -> Result<BruteForce, OracleError> {
    let calc = inst.calculus();
    let n = inst.len();
    let pairs = n * n.saturating_sub(1) / 2;
    let k = calc.len() as u64;
    let states = (0..pairs).try_fold(1u64, |acc, _| acc.checked_mul(k).filter(|&s| s <= cap));
    let Some(states) = states else {
        return Err(OracleError::TooLarge { states: format!("{}^{}", k, pairs), cap });
    };
    let mut values = vec![RelationId(0); pairs];
    let mut models = Vec::new();
    loop {
        let a = Assignment::from_canonical(calc, n, &values);
        if verify_assignment(inst, &a).is_empty() {
            models.push(a);
        }
        // Odometer with the last pair varying fastest.
        let mut pos = pairs;
        loop {
            if pos == 0 {
                return Ok(BruteForce { models, states });
            }
            pos -= 1;
            if (values[pos].0 as u64) + 1 < k {
                values[pos].0 += 1;
                break;
            }
            values[pos] = RelationId(0);
        }
    }
}
