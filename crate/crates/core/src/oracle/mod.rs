//! Ground truth by exhaustion: composition-table soundness over enumerated
//! trajectories, witness coverage, and a brute-force model finder.

mod brute;
mod definitions;
mod fault;
mod soundness;

pub use brute::{brute_force_solve, brute_force_solve_capped, BruteForce, OracleError, DEFAULT_STATE_CAP};
pub use definitions::definitions_holding;
pub use fault::{random_corruption, CellCorruption};
pub use soundness::{
    coverage_report, verify_soundness, verify_soundness_with, Sampling, SoundnessReport, SoundnessViolation,
    MAX_RECORDED_VIOLATIONS,
};
