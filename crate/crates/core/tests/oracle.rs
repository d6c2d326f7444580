use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tcalc::calculus::{builtin_tc10, builtin_tc6, validate_calculus, RelationSet};
use tcalc::oracle::{
    brute_force_solve, brute_force_solve_capped, coverage_report, random_corruption, verify_soundness,
    verify_soundness_with, OracleError, Sampling, SoundnessReport,
};
use tcalc::solver::Instance;
use tcalc::trajectory::{CalcKind, GridSpec};

mod common;

fn g3() -> GridSpec {
    GridSpec::cells(3, 3).unwrap()
}

#[test]
fn small_exhaustive_runs_are_sound() {
    for kind in [CalcKind::Tc6, CalcKind::Tc10] {
        let r = verify_soundness(kind, &g3(), 2, Sampling::Exhaustive);
        assert!(r.is_sound(), "{kind}: {:?}", r.violations.first());
        assert_eq!(r.triples_checked, (r.trajectories as u64).pow(3));
    }
}

#[test]
fn corrupted_cell_is_witnessed() {
    let tc6 = builtin_tc6();
    let s = tc6.relation("s").unwrap();
    let bad = tc6.with_cell(s, s, tc6.set_of(&["eq"]).unwrap());
    let r = verify_soundness_with(&bad, CalcKind::Tc6, &g3(), 3, Sampling::Exhaustive);
    assert!(!r.is_sound());
    assert!(r.violations.iter().all(|v| v.r12 == "s" && v.r23 == "s"));
    assert!(r.violations.iter().any(|v| v.r13 == "alt") && r.violations.iter().any(|v| v.r13 == "s"));
}

#[test]
fn coverage_grows_with_length() {
    let tc6 = builtin_tc6();
    let short = verify_soundness(CalcKind::Tc6, &g3(), 2, Sampling::Exhaustive);
    let long = verify_soundness(CalcKind::Tc6, &g3(), 3, Sampling::Exhaustive);
    let (a, b) = (coverage_report(&short, &tc6), coverage_report(&long, &tc6));
    assert!(b.len() <= a.len());
    assert!(b.iter().all(|t| a.contains(t)));
    assert!(short.witnessed.contains(&["eq".into(), "eq".into(), "eq".into()]));

    let empty = SoundnessReport { witnessed: vec![], ..short };
    let total: usize = tc6.relations().flat_map(|x| tc6.relations().map(move |y| (x, y))).map(|(x, y)| tc6.compose(x, y).len()).sum();
    assert_eq!(coverage_report(&empty, &tc6).len(), total);
}

#[test]
fn reports_round_trip_as_json() {
    let r = verify_soundness(CalcKind::Tc10, &GridSpec::cells(2, 3).unwrap(), 3, Sampling::Sampled { count: 5000, seed: 3 });
    assert_eq!(r.triples_checked, 5000);
    assert_eq!(SoundnessReport::from_json(&r.to_json()).unwrap(), r);
    let again = verify_soundness(CalcKind::Tc10, &GridSpec::cells(2, 3).unwrap(), 3, Sampling::Sampled { count: 5000, seed: 3 });
    assert_eq!(again, r);
}

#[test]
fn brute_force_examples() {
    assert_eq!(brute_force_solve(&common::example_instance()).unwrap().models.len(), 3);
    let two = Instance::new(builtin_tc6(), vec!["a".into(), "b".into()]).unwrap();
    assert_eq!(brute_force_solve(&two).unwrap().models.len(), 6);
    let big = Instance::numbered(builtin_tc10(), 5);
    assert!(matches!(brute_force_solve(&big), Err(OracleError::TooLarge { .. })));
    assert!(brute_force_solve_capped(&Instance::numbered(builtin_tc6(), 3), 215).is_err());
    assert!(brute_force_solve_capped(&Instance::numbered(builtin_tc6(), 3), 216).is_ok());
}

#[test]
fn corruptions_drop_a_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for calc in [builtin_tc6(), builtin_tc10()] {
        for _ in 0..50 {
            let c = random_corruption(&calc, &mut rng);
            assert!(!c.replacement.is_empty());
            assert!(!c.original.is_subset(c.replacement));
            assert_eq!(c.original, calc.compose(c.r1, c.r2));
            assert_eq!(c.apply(&calc).compose(c.r1, c.r2), c.replacement);
        }
    }
    // A cell that loses a relation and stays mirror-consistent is only
    // visible to the soundness check.
    let tc6 = builtin_tc6();
    let i = tc6.relation("i").unwrap();
    let smaller = tc6.compose(i, i).difference(RelationSet::singleton(tc6.relation("dis").unwrap()));
    let bad = tc6.with_cell(i, i, smaller);
    assert!(validate_calculus(&bad).is_valid());
    assert!(!verify_soundness_with(&bad, CalcKind::Tc6, &g3(), 3, Sampling::Exhaustive).is_sound());
}
