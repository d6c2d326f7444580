#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tcalc::calculus::{builtin_tc6, Calculus, RelationSet};
use tcalc::solver::Instance;

/// Three trajectories; the first two are disjoint and the last two are
/// equal or alternatives.
pub fn example_instance() -> Instance {
    let calc = builtin_tc6();
    let dis = calc.set_of(&["dis"]).unwrap();
    let eq_alt = calc.set_of(&["eq", "alt"]).unwrap();
    Instance::new(calc, vec!["T1".into(), "T2".into(), "T3".into()])
        .unwrap()
        .with_constraint("T1", "T2", dis)
        .unwrap()
        .with_constraint("T2", "T3", eq_alt)
        .unwrap()
}

/// A random non-empty subset of size 1 or 2.
pub fn small_set(calc: &Calculus, rng: &mut impl Rng) -> RelationSet {
    let n = calc.len();
    let a = rng.random_range(0..n) as u64;
    let mut bits = 1u64 << a;
    if rng.random_bool(0.5) {
        bits |= 1u64 << rng.random_range(0..n);
    }
    RelationSet::from_bits(bits)
}

/// Random instance over `n` elements with singleton and doubleton constraints
/// on random ordered pairs.
pub fn random_instance(calc: &Calculus, n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = Instance::numbered(calc.clone(), n);
    let count = rng.random_range(1..=n * (n - 1));
    for _ in 0..count {
        let x = rng.random_range(0..n);
        let mut y = rng.random_range(0..n - 1);
        if y >= x {
            y += 1;
        }
        let rels = small_set(calc, &mut rng);
        inst.add_constraint_at(x, y, rels).unwrap();
    }
    inst
}
