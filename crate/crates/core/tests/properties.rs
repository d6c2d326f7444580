use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tcalc::calculus::{builtin_tc10, builtin_tc6, tc10, RelationSet};
use tcalc::oracle::definitions_holding;
use tcalc::trajectory::{
    bridge_gaps, classify, random_trajectory, random_walk, regionize, CalcKind, GapPolicy, GridSpec, RawPoint, RegionId,
};

fn kind_strategy() -> impl Strategy<Value = CalcKind> {
    prop_oneof![Just(CalcKind::Tc6), Just(CalcKind::Tc10)]
}

fn set_strategy(n: usize) -> impl Strategy<Value = RelationSet> {
    (0u64..(1 << n)).prop_map(RelationSet::from_bits)
}

proptest! {
    #[test]
    fn compose_set_is_monotone(a in set_strategy(10), b in set_strategy(10), extra_a in set_strategy(10), extra_b in set_strategy(10)) {
        let c = builtin_tc10();
        let small = c.compose_set(a, b);
        let large = c.compose_set(a | extra_a, b | extra_b);
        prop_assert!(small.is_subset(large));
        prop_assert_eq!(small.is_empty(), a.is_empty() || b.is_empty());
    }

    #[test]
    fn compose_set_is_a_union_of_cells(a in set_strategy(6), b in set_strategy(6)) {
        let c = builtin_tc6();
        let mut want = RelationSet::EMPTY;
        for x in a {
            for y in b {
                want |= c.compose(x, y);
            }
        }
        prop_assert_eq!(c.compose_set(a, b), want);
    }

    #[test]
    fn converse_of_composition(a in set_strategy(10), b in set_strategy(10)) {
        let c = builtin_tc10();
        prop_assert_eq!(c.converse_set(c.compose_set(a, b)), c.compose_set(c.converse_set(b), c.converse_set(a)));
    }

    #[test]
    fn definitions_are_jepd_and_match(kind in kind_strategy(), seed in any::<u64>(), la in 2usize..=12, lb in 2usize..=12) {
        let g = GridSpec::cells(10, 10).unwrap();
        let a = random_trajectory(&g, la, kind, seed).unwrap();
        let b = random_trajectory(&g, lb, kind, seed.wrapping_add(1)).unwrap();
        let holding = definitions_holding(kind, &a, &b);
        prop_assert_eq!(holding.len(), 1);
        prop_assert_eq!(holding.single(), Some(classify(kind, &a, &b)));
    }

    #[test]
    fn classification_respects_converses(kind in kind_strategy(), seed in any::<u64>(), la in 2usize..=8, lb in 2usize..=8) {
        // A small grid makes shared endpoints common.
        let g = GridSpec::cells(3, 3).unwrap();
        let a = random_trajectory(&g, la, kind, seed).unwrap();
        let b = random_trajectory(&g, lb, kind, seed ^ 0xabcdef).unwrap();
        let calc = kind.calculus();
        prop_assert_eq!(classify(kind, &b, &a), calc.converse(classify(kind, &a, &b)));
        if kind == CalcKind::Tc10 {
            prop_assert_eq!(classify(kind, &a, &a.reversed()), tc10::REV);
        }
    }

    #[test]
    fn regionize_never_repeats(points in proptest::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..60), rows in 1u32..6, cols in 1u32..6) {
        let g = GridSpec::cells(rows, cols).unwrap();
        let pts: Vec<RawPoint> = points.iter().map(|&(lat, lon)| RawPoint { object_id: "o".into(), timestamp: 0, lat, lon }).collect();
        let seq = regionize(&pts, &g).unwrap();
        prop_assert!(seq.windows(2).all(|w| w[0] != w[1]));
        prop_assert!(seq.iter().all(|r| g.contains(*r)));
    }

    #[test]
    fn rasterized_jumps_form_chains(cells in proptest::collection::vec(0u32..48, 1..12)) {
        let g = GridSpec::cells(6, 8).unwrap();
        let seq: Vec<RegionId> = cells.into_iter().map(RegionId).collect();
        let out = bridge_gaps(&seq, &g, GapPolicy::Rasterize).unwrap();
        prop_assert!(out.windows(2).all(|w| g.externally_connected(w[0], w[1])));
        prop_assert_eq!(out.first(), seq.first());
        prop_assert_eq!(out.last(), seq.last());
    }

    #[test]
    fn single_jump_length_is_chebyshev(a in 0u32..48, b in 0u32..48) {
        let g = GridSpec::cells(6, 8).unwrap();
        prop_assume!(a != b);
        let out = bridge_gaps(&[RegionId(a), RegionId(b)], &g, GapPolicy::Rasterize).unwrap();
        let ((ar, ac), (br, bc)) = (g.row_col(RegionId(a)), g.row_col(RegionId(b)));
        prop_assert_eq!(out.len() as u32, ar.abs_diff(br).max(ac.abs_diff(bc)) + 1);
    }
}

#[test]
fn tc6_table_is_symmetric() {
    let c = builtin_tc6();
    for a in c.relations() {
        for b in c.relations() {
            assert_eq!(c.compose(a, b), c.compose(b, a));
        }
    }
}

#[test]
fn random_walks_with_mixed_lengths_are_jepd() {
    let g = GridSpec::cells(4, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kind in [CalcKind::Tc6, CalcKind::Tc10] {
        for _ in 0..2000 {
            let (la, lb) = (rng.random_range(2..=12), rng.random_range(2..=12));
            let a = random_walk(&g, la, kind, &mut rng).unwrap();
            let b = random_walk(&g, lb, kind, &mut rng).unwrap();
            assert_eq!(definitions_holding(kind, &a, &b).single(), Some(classify(kind, &a, &b)), "{a:?} {b:?}");
        }
    }
}
