use proptest::prelude::*;

use tcalc::calculus::{builtin_tc10, builtin_tc6, RelationSet};
use tcalc::oracle::brute_force_solve;
use tcalc::solver::{
    algebraic_closure, build_network, enumerate_models, parse_instance, solve, verify_assignment, write_instance,
    write_models, Assignment, AssignmentViolation, Closure, Instance, InstanceError, InstanceFileError, Outcome,
};

mod common;

fn two(calc: tcalc::calculus::Calculus) -> Instance {
    Instance::new(calc, vec!["a".into(), "b".into()]).unwrap()
}

#[test]
fn network_construction() {
    let net = build_network(&two(builtin_tc6()));
    assert_eq!(net.domain(0, 1), builtin_tc6().universe());

    let tc10 = builtin_tc10();
    let inst = two(tc10.clone()).with_constraint("b", "a", tc10.set_of(&["ex"]).unwrap()).unwrap();
    assert_eq!(build_network(&inst).domain(0, 1), tc10.set_of(&["exi"]).unwrap());

    let tc6 = builtin_tc6();
    let inst = two(tc6.clone())
        .with_constraint("a", "b", tc6.set_of(&["s"]).unwrap())
        .unwrap()
        .with_constraint("a", "b", tc6.set_of(&["f"]).unwrap())
        .unwrap();
    assert_eq!(build_network(&inst).first_empty(), Some((0, 1)));
    assert_eq!(solve(&inst).unwrap(), Outcome::Unsat);
}

#[test]
fn instance_errors() {
    let tc6 = builtin_tc6();
    let mut inst = two(tc6.clone());
    assert_eq!(inst.add_constraint("a", "q", tc6.universe()), Err(InstanceError::UnknownElement("q".into())));
    assert_eq!(inst.add_constraint("a", "a", tc6.universe()), Err(InstanceError::SelfConstraint("a".into())));
    assert!(matches!(inst.add_constraint("a", "b", RelationSet::EMPTY), Err(InstanceError::EmptyRelations(..))));
    assert!(Instance::new(tc6, vec!["a".into(), "a".into()]).is_err());
}

#[test]
fn example_closure() {
    let mut net = build_network(&common::example_instance());
    assert_eq!(algebraic_closure(&mut net), Closure::Consistent);
    let tc6 = builtin_tc6();
    assert_eq!(net.domain(0, 2), tc6.set_of(&["i", "dis"]).unwrap());
    assert_eq!(net.domain(1, 2), tc6.set_of(&["eq", "alt"]).unwrap());
    let before = net.canonical_domains();
    assert_eq!(algebraic_closure(&mut net), Closure::Consistent);
    assert_eq!(net.canonical_domains(), before);
}

#[test]
fn extends_both_ways_is_unsat() {
    let tc10 = builtin_tc10();
    let ex = tc10.set_of(&["ex"]).unwrap();
    let inst = two(tc10).with_constraint("a", "b", ex).unwrap().with_constraint("b", "a", ex).unwrap();
    let mut net = build_network(&inst);
    assert_eq!(algebraic_closure(&mut net), Closure::Empty { x: 0, y: 1 });
    assert_eq!(solve(&inst).unwrap(), Outcome::Unsat);
    assert!(enumerate_models(&inst, None).unwrap().is_empty());
    assert!(!brute_force_solve(&inst).unwrap().is_sat());
}

#[test]
fn example_models() {
    let inst = common::example_instance();
    let tc6 = builtin_tc6();
    let sym = |a: &Assignment, x, y| tc6.symbol(a.get(x, y)).to_string();
    let models = enumerate_models(&inst, None).unwrap();
    let got: Vec<(String, String, String)> = models.iter().map(|m| (sym(m, 0, 1), sym(m, 1, 2), sym(m, 0, 2))).collect();
    let want = [("dis", "alt", "i"), ("dis", "alt", "dis"), ("dis", "eq", "dis")]
        .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()));
    let mut sorted = got.clone();
    sorted.sort();
    let mut want_sorted = want.to_vec();
    want_sorted.sort();
    assert_eq!(sorted, want_sorted);
    // Pair order is (T1,T2), (T1,T3), (T2,T3), so (T1,T3) = i sorts first.
    assert_eq!(got[0], ("dis".into(), "alt".into(), "i".into()));
    assert_eq!(models, enumerate_models(&inst, None).unwrap());
    assert!(solve(&inst).unwrap().is_sat());
    assert_eq!(enumerate_models(&inst, Some(2)).unwrap().len(), 2);
}

#[test]
fn trivial_instances() {
    let single = Instance::new(builtin_tc6(), vec!["x".into()]).unwrap();
    match solve(&single).unwrap() {
        Outcome::Sat(a) => assert_eq!(a.get(0, 0), builtin_tc6().equality()),
        other => panic!("{other:?}"),
    }
    assert_eq!(enumerate_models(&two(builtin_tc6()), None).unwrap().len(), 6);
    assert!(enumerate_models(&Instance::new(builtin_tc6(), vec![]).unwrap(), None).unwrap().len() == 1);
}

#[test]
fn verification_finds_each_clause() {
    let inst = common::example_instance();
    let tc6 = builtin_tc6();
    let r = |s| tc6.relation(s).unwrap();
    let model = Assignment::from_canonical(&tc6, 3, &[r("dis"), r("i"), r("alt")]);
    assert!(verify_assignment(&inst, &model).is_empty());

    let mut flipped = model.clone();
    flipped.set(0, 2, r("eq"));
    flipped.set(2, 0, r("eq"));
    let v = verify_assignment(&inst, &flipped);
    assert!(v.contains(&AssignmentViolation::Composition { x: 0, y: 1, z: 2 }), "{v:?}");

    let mut reflexive = model.clone();
    reflexive.set(1, 1, r("dis"));
    assert!(verify_assignment(&inst, &reflexive).contains(&AssignmentViolation::Reflexive { x: 1 }));

    let wrong = Assignment::from_canonical(&tc6, 3, &[r("i"), r("i"), r("eq")]);
    assert!(verify_assignment(&inst, &wrong).contains(&AssignmentViolation::Constraint { index: 0 }));
}

#[test]
fn refuses_invalid_calculi() {
    let tc6 = builtin_tc6();
    let broken = tc6.with_cell(tc6.relation("s").unwrap(), tc6.relation("f").unwrap(), tc6.set_of(&["i"]).unwrap());
    let inst = Instance::new(broken, vec!["a".into()]).unwrap();
    assert!(solve(&inst).is_err());
}

#[test]
fn instance_files() {
    let text = r#"{"calculus": "tc6", "elements": ["T1", "T2", "T3"],
        "constraints": [{"x": "T1", "y": "T2", "rels": ["dis"]}, {"x": "T2", "y": "T3", "rels": ["eq", "alt"]}]}"#;
    let inst = parse_instance(text).unwrap();
    assert_eq!(inst.constraints().len(), 2);
    let again = parse_instance(&write_instance(&inst)).unwrap();
    assert_eq!(again.constraints(), inst.constraints());

    let models = enumerate_models(&inst, None).unwrap();
    let out: serde_json::Value = serde_json::from_str(&write_models(&inst, "sat", &models)).unwrap();
    assert_eq!(out["status"], "sat");
    let first = out["models"][0].as_object().unwrap();
    assert_eq!(first.keys().collect::<Vec<_>>(), ["T1|T2", "T1|T3", "T2|T3"]);

    let bad = r#"{"calculus": "tc6", "elements": ["a"], "constraints": [{"x": "a", "y": "b", "rels": ["s"]}]}"#;
    assert!(matches!(parse_instance(bad), Err(InstanceFileError::Constraint { index: 0, .. })));
    let bad = r#"{"calculus": "tc6", "elements": ["a", "b"], "constraints": [{"x": "a", "y": "b", "rels": ["ex"]}]}"#;
    assert!(matches!(parse_instance(bad), Err(InstanceFileError::UnknownRelation { .. })));
    assert!(matches!(parse_instance("{\n\"calculus\": }"), Err(InstanceFileError::Parse { line: 2, .. })));

    // Inline calculi round-trip through the calculus file format.
    let saved = tcalc::calculus::save_calculus(&builtin_tc10().with_name("mine"));
    let inline = format!(r#"{{"calculus": {saved}, "elements": ["a", "b"], "constraints": []}}"#);
    let inst = parse_instance(&inline).unwrap();
    assert_eq!(inst.calculus().name(), "mine");
    assert!(write_instance(&inst).contains("\"mine\""));
}

#[test]
fn solver_matches_brute_force() {
    let mut sat = 0;
    for seed in 0..60u64 {
        let (calc, n) = if seed % 2 == 0 { (builtin_tc6(), 4) } else { (builtin_tc10(), 3) };
        let inst = common::random_instance(&calc, n, seed);
        let brute = brute_force_solve(&inst).unwrap();
        let models = enumerate_models(&inst, None).unwrap();
        assert_eq!(solve(&inst).unwrap().is_sat(), brute.is_sat(), "seed {seed}");
        assert_eq!(models, brute.models, "seed {seed}");
        sat += brute.is_sat() as usize;
    }
    assert!(sat > 5 && sat < 55, "a useful mix of verdicts, got {sat} sat");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_keeps_every_model(seed in any::<u64>(), tc10 in any::<bool>()) {
        let (calc, n) = if tc10 { (builtin_tc10(), 3) } else { (builtin_tc6(), 4) };
        let inst = common::random_instance(&calc, n, seed);
        let mut net = build_network(&inst);
        let closure = algebraic_closure(&mut net);
        let brute = brute_force_solve(&inst).unwrap();
        if let Closure::Empty { .. } = closure {
            prop_assert!(!brute.is_sat());
        }
        for m in &brute.models {
            for i in 0..n {
                for j in i + 1..n {
                    prop_assert!(net.domain(i, j).contains(m.get(i, j)));
                }
            }
        }
    }

    #[test]
    fn solving_is_deterministic(seed in any::<u64>()) {
        let inst = common::random_instance(&builtin_tc6(), 5, seed);
        let a = solve(&inst).unwrap();
        prop_assert_eq!(&a, &solve(&inst).unwrap());
        if let Outcome::Sat(m) = &a {
            prop_assert!(verify_assignment(&inst, m).is_empty());
        }
    }
}
