use rand::seq::IteratorRandom;
use rand::Rng;

use crate::calculus::{Calculus, RelationId, RelationSet};

/// A single-cell table edit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellCorruption {
    pub r1: RelationId,
    pub r2: RelationId,
    pub original: RelationSet,
    pub replacement: RelationSet,
}

/// Picks a random cell and a random non-empty replacement that drops at
/// least one relation of the original cell. Pure additions are excluded:
/// a superset cell is still sound, so no soundness check can flag it.
pub fn random_corruption<R: Rng + ?Sized>(calc: &Calculus, rng: &mut R) -> CellCorruption {
    let n = calc.len();
    let full = calc.universe().bits();
    loop {
        let r1 = RelationId(rng.random_range(0..n) as u8);
        let r2 = RelationId(rng.random_range(0..n) as u8);
        let original = calc.compose(r1, r2);
        let candidate = (1..=full)
            .map(RelationSet::from_bits)
            .filter(|s| !original.is_subset(*s))
            .choose(rng);
        if let Some(replacement) = candidate {
            return CellCorruption { r1, r2, original, replacement };
        }
    }
}

impl CellCorruption {
    pub fn apply(&self, calc: &Calculus) -> Calculus {
        calc.with_cell(self.r1, self.r2, self.replacement)
    }
}
