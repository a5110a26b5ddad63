mod common;

use mmp_elliptic_core::io::{model_to_json, parse_model};
use mmp_elliptic_core::{
    canonical_contribution, component_degree, emit_dot, hassett_reduce, intersection_data, is_hassett_stable, q,
    reduce, reduce_with, validate, FiberModelState, KodairaFiberType, Rational, ReduceOptions, TransformationKind,
    VertexId,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use KodairaFiberType::*;

fn any_type() -> impl Strategy<Value = KodairaFiberType> {
    prop_oneof![
        (0u32..6).prop_map(I),
        Just(II),
        Just(III),
        Just(IV),
        (0u32..4).prop_map(IStar),
        Just(IIStar),
        Just(IIIStar),
        Just(IVStar),
        Just(N0),
        Just(N1),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weierstrass_contributes_nothing(t in any_type()) {
        prop_assert_eq!(canonical_contribution(t, FiberModelState::Weierstrass), Rational::ZERO);
        if let Ok(d) = intersection_data(t) {
            prop_assert!(d.a_squared < Rational::ZERO && d.e_squared < Rational::ZERO);
        }
    }

    #[test]
    fn hassett_keeps_markers_and_factors(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = common::random_model(&mut rng, 5, 8);
        let base = x.base_curve().unwrap();
        let b = common::random_below(&mut rng, &x.weights, 12, true);
        let once = hassett_reduce(&base, &b).unwrap();
        let mut before: Vec<_> = base.markers().iter().map(|m| m.index).collect();
        let mut after: Vec<_> = once.markers().iter().map(|m| m.index).collect();
        before.sort();
        after.sort();
        prop_assert_eq!(before, after);
        // Factorization is only meaningful where both reductions are stable.
        let (a, m) = common::random_admissible_pair(&mut rng, &x, 12);
        let via = hassett_reduce(&hassett_reduce(&base, &m).unwrap(), &a).unwrap();
        prop_assert!(via.is_isomorphic(&hassett_reduce(&base, &a).unwrap()));
    }

    #[test]
    fn section_degree_is_component_degree(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = common::random_model(&mut rng, 5, 8);
        let w = common::random_below(&mut rng, &x.weights, 12, true);
        let y = x.reweighted(w.clone());
        let base = y.base_curve().unwrap();
        let mut all_positive = true;
        for c in &y.elliptic {
            let d = y.section_degree(&c.id).unwrap();
            prop_assert_eq!(d, component_degree(&base, &VertexId::from(&c.id), &w).unwrap());
            all_positive &= d > Rational::ZERO;
        }
        prop_assert_eq!(is_hassett_stable(&base, &w).unwrap(), all_positive);
    }

    #[test]
    fn section_self_intersection_is_nonpositive(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = common::random_model(&mut rng, 5, 8);
        for c in &x.elliptic {
            let s_squared = -c.deg_l;
            prop_assert!(s_squared <= Rational::ZERO);
            prop_assert_eq!(s_squared.is_zero(), c.deg_l.is_zero());
        }
        let mut bad = x.clone();
        bad.elliptic[0].deg_l = -Rational::ONE;
        prop_assert!(!validate(&bad).is_empty());
    }

    #[test]
    fn every_step_is_valid_and_commutes(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = common::random_model(&mut rng, 5, 8);
        let a = common::random_admissible(&mut rng, &x, &x.weights, 60);
        let trace = reduce_with(&x, &a, ReduceOptions { check_hassett: true }).unwrap();
        let mut nodes = x.pseudo_node_count();
        let mut last_t = Rational::ONE;
        for r in &trace.records {
            prop_assert!(validate(&r.snapshot_after).is_empty());
            prop_assert!(r.t <= last_t);
            last_t = r.t;
            let now = r.snapshot_after.pseudo_node_count();
            match r.kind {
                TransformationKind::LaNaveFlip => prop_assert!(now > nodes),
                TransformationKind::TreeCollapseToPoint | TransformationKind::TreeCollapseToCurve => {
                    prop_assert!(now < nodes)
                }
                _ => {}
            }
            nodes = now;
            let w = &r.snapshot_after.weights;
            let carried: Rational = r.snapshot_after.all_fibers().iter().map(|(_, f)| w.sum_over(&f.markers)).sum();
            prop_assert_eq!(carried, w.entries().iter().sum::<Rational>());
        }
    }

    #[test]
    fn factorization(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = common::random_model(&mut rng, 5, 8);
        let (a, m) = common::random_admissible_pair(&mut rng, &x, 60);
        let direct = reduce(&x, &a).unwrap().final_model;
        let two_step = reduce(&reduce(&x, &m).unwrap().final_model, &a).unwrap().final_model;
        prop_assert_eq!(direct.normalized(), two_step.normalized());
    }

    #[test]
    fn snapshots_roundtrip_through_json(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = common::random_model(&mut rng, 5, 8);
        let a = common::random_below(&mut rng, &x.weights, 12, false);
        let trace = reduce(&x, &a).unwrap();
        for y in std::iter::once(&x).chain(trace.records.iter().map(|r| &r.snapshot_after)) {
            let text = model_to_json(y);
            prop_assert_eq!(&parse_model(&text).unwrap(), y);
            prop_assert_eq!(model_to_json(y), text);
            prop_assert_eq!(emit_dot(y), emit_dot(&y.clone()));
        }
    }
}

#[test]
fn coincident_walls_are_checked_after_the_batch() {
    let mut rng = StdRng::seed_from_u64(4040924294956792379);
    let x = common::random_model(&mut rng, 5, 8);
    let a = common::random_admissible(&mut rng, &x, &x.weights, 60);
    let trace = reduce_with(&x, &a, ReduceOptions { check_hassett: true }).unwrap();
    let at: Vec<TransformationKind> = trace.records.iter().filter(|r| r.t == q(4, 9)).map(|r| r.kind).collect();
    assert_eq!(at, [TransformationKind::FiberToWeierstrass, TransformationKind::LaNaveFlip]);
}

#[test]
fn leaf_flips_onto_a_type_two_bridge() {
    // X1 bridges X2 and X4 and loses its only marker at the target, while
    // the leaf X4 reaches degree zero at the same time.
    let text = include_str!("fixtures/bridge_then_leaf.json");
    let x = parse_model(text).unwrap();
    let a = mmp_elliptic_core::io::parse_weight_list("1/6,5/12,3/4,0,7/8,1/2,1/4").unwrap();
    let trace = reduce(&x, &a).unwrap();
    let last: Vec<TransformationKind> = trace.records.iter().filter(|r| r.t.is_zero()).map(|r| r.kind).collect();
    assert_eq!(last, [TransformationKind::TypeIIPseudoFormation, TransformationKind::LaNaveFlip]);
    let y = &trace.final_model;
    assert!(validate(y).is_empty());
    assert!(y.pseudo2.is_empty());
    assert_eq!(y.trees.len(), 1);
    let tree = &y.trees[0];
    assert_eq!((tree.host.to_string(), tree.host_fiber.to_string()), ("X2".into(), "G1b".into()));
    assert_eq!(tree.root.id.to_string(), "X1");
    assert_eq!(tree.root.children.len(), 1);
    assert_eq!(tree.root.children[0].node.id.to_string(), "X4");
}
