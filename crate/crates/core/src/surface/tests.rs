use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::fiber::{canonical_contribution, fiber_model_at, intersection_data};
use crate::fixtures::{single_component, two_component_degeneration};
use crate::rational::q;

fn cid(s: &str) -> ComponentId {
    ComponentId::from(s)
}

#[test]
fn fixture_is_valid_across_alpha() {
    for alpha in [q(1, 1), q(3, 5), q(1, 2), q(9, 20), q(5, 12), q(1, 3), q(0, 1)] {
        let x = two_component_degeneration(alpha).unwrap();
        assert!(validate(&x).is_empty(), "alpha = {alpha}: {:?}", validate(&x));
    }
}

#[test]
fn base_curve_after_flip() {
    let x = two_component_degeneration(q(9, 20)).unwrap();
    let c = x.base_curve().unwrap();
    assert_eq!(c.vertices().len(), 1);
    assert_eq!(c.markers().len(), 12);
    assert_eq!(c.coincident(), &[BTreeSet::from([MarkerIndex(11), MarkerIndex(12)])]);
    let host = x.elliptic[0].fibers.iter().find(|f| f.is_host()).unwrap();
    assert_eq!(host.coeff, q(9, 10));
}

#[test]
fn section_degrees() {
    let x = two_component_degeneration(q(3, 5)).unwrap();
    assert_eq!(x.section_degree(&cid("X1")).unwrap(), Rational::int(9));
    assert_eq!(x.section_degree(&cid("X2")).unwrap(), q(1, 5));
    assert!(!x.should_contract_section(&cid("X2")).unwrap());
    let at_wall = x.reweighted(two_component_degeneration(q(1, 2)).unwrap().weights);
    assert!(at_wall.should_contract_section(&cid("X2")).unwrap());

    let y = two_component_degeneration(q(9, 20)).unwrap();
    assert_eq!(y.section_degree(&cid("X2")), Err(SurfaceError::NoSection(cid("X2"))));
    assert_eq!(y.section_degree(&cid("X9")), Err(SurfaceError::UnknownComponent(cid("X9"))));
}

#[test]
fn pseudo_fates() {
    let x = two_component_degeneration(q(9, 20)).unwrap();
    assert_eq!(x.pseudo_fate(&cid("X2")).unwrap(), PseudoFate::Big);
    let lighter = x.reweighted(two_component_degeneration(q(2, 5)).unwrap().weights);
    assert_eq!(lighter.pseudo_fate(&cid("X2")).unwrap(), PseudoFate::ContractToPoint);
    let mut iso = lighter.clone();
    iso.trees[0].root.isotrivial_jinf = true;
    iso.trees[0].root.deg_l = Rational::ZERO;
    assert_eq!(iso.pseudo_fate(&cid("X2")).unwrap(), PseudoFate::ContractToCurve);
    assert!(matches!(x.pseudo_fate(&cid("X1")), Err(SurfaceError::UnknownTree(_))));
}

#[test]
fn host_coefficient_mismatch_is_one_violation() {
    let mut x = two_component_degeneration(q(9, 20)).unwrap();
    let host = x.elliptic[0].fibers.iter_mut().find(|f| f.is_host()).unwrap();
    host.coeff = q(9, 20);
    let v = validate(&x);
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].kind, ViolationKind::TreeCoefficient);
}

#[test]
fn intermediate_below_threshold_is_one_violation() {
    let mut x =
        single_component(0, Rational::ONE, &[(KodairaFiberType::II, q(1, 2)), (KodairaFiberType::I(1), q(1, 1))])
            .unwrap();
    x.elliptic[0].fibers[0].state = FiberModelState::Intermediate;
    let v = validate(&x);
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].kind, ViolationKind::FiberState);
}

#[test]
fn structural_violations() {
    let mut x = two_component_degeneration(Rational::ONE).unwrap();
    x.elliptic[1].attach[0].peer_fiber = FiberId::from("nope");
    let kinds: Vec<_> = validate(&x).into_iter().map(|v| v.kind).collect();
    assert!(kinds.contains(&ViolationKind::Attachment));

    let mut y = two_component_degeneration(Rational::ONE).unwrap();
    y.elliptic[0].fibers[0].markers.insert(MarkerIndex(12));
    let kinds: Vec<_> = validate(&y).into_iter().map(|v| v.kind).collect();
    assert!(kinds.contains(&ViolationKind::MarkerAssignment));

    let mut z = single_component(0, Rational::ONE, &[(KodairaFiberType::II, q(1, 2))]).unwrap();
    z.elliptic[0].fibers[0].ftype = KodairaFiberType::N2;
    let v = validate(&z);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind, ViolationKind::UnsupportedType);
}

#[test]
fn intermediate_at_one_is_tolerated() {
    let x = two_component_degeneration(q(1, 2)).unwrap();
    let host = x.elliptic[0].fibers.iter().find(|f| f.is_host()).unwrap();
    assert_eq!(host.coeff, Rational::ONE);
    assert!(validate(&x).is_empty());
}

#[test]
fn same_shape_ignores_coefficients() {
    let a = two_component_degeneration(q(9, 20)).unwrap();
    let b = two_component_degeneration(q(23, 50)).unwrap();
    assert!(a.same_shape(&b));
    assert!(!a.same_shape(&two_component_degeneration(q(1, 3)).unwrap()));
}

#[test]
fn volume_reference_values() {
    let i1 = KodairaFiberType::I(1);
    let twelve = single_component(0, Rational::ONE, &[(i1, Rational::ONE); 12]).unwrap();
    assert_eq!(volume(&twelve).unwrap(), Rational::int(21));
    assert_eq!(volume(&single_component(0, Rational::ONE, &[]).unwrap()).unwrap(), Rational::int(-3));
    assert_eq!(volume(&single_component(1, Rational::ZERO, &[]).unwrap()).unwrap(), Rational::ZERO);
    let twisted = single_component(0, Rational::ONE, &[(KodairaFiberType::II, Rational::ONE)]).unwrap();
    assert!(matches!(volume(&twisted), Err(SurfaceError::UnsupportedConfiguration(_))));
    assert!(matches!(
        volume(&two_component_degeneration(Rational::ONE).unwrap()),
        Err(SurfaceError::UnsupportedConfiguration(_))
    ));
}

/// Intersection form evaluated on the explicit class of `K + S + F_A` in the
/// basis `F, S, A_1, E_1, A_2, E_2, ...`.
fn gram_volume(genus: u32, deg_l: Rational, fibers: &[(KodairaFiberType, Rational)]) -> Rational {
    let inter: Vec<_> =
        fibers.iter().filter(|(t, a)| fiber_model_at(*t, *a).unwrap() == FiberModelState::Intermediate).collect();
    let n = 2 + 2 * inter.len();
    let mut g = vec![vec![Rational::ZERO; n]; n];
    g[0][1] = Rational::ONE;
    g[1][0] = Rational::ONE;
    g[1][1] = -deg_l;
    let mut d = vec![Rational::ZERO; n];
    d[0] = Rational::int(2 * genus as i128 - 2) + deg_l;
    d[1] = Rational::ONE;
    for (t, a) in fibers {
        if fiber_model_at(*t, *a).unwrap() == FiberModelState::Weierstrass {
            d[0] += *a;
        }
    }
    for (j, (t, a)) in inter.iter().enumerate() {
        let data = intersection_data(*t).unwrap();
        let (ia, ie) = (2 + 2 * j, 3 + 2 * j);
        g[1][ia] = Rational::ONE;
        g[ia][1] = Rational::ONE;
        g[ia][ia] = data.a_squared;
        g[ie][ie] = data.e_squared;
        g[ia][ie] = data.a_dot_e;
        g[ie][ia] = data.a_dot_e;
        d[ia] = *a;
        d[ie] = Rational::ONE + canonical_contribution(*t, FiberModelState::Intermediate);
    }
    let mut total = Rational::ZERO;
    for i in 0..n {
        for k in 0..n {
            total += d[i] * g[i][k] * d[k];
        }
    }
    total
}

#[test]
fn gram_oracle_matches_reference_values() {
    let i1 = KodairaFiberType::I(1);
    assert_eq!(gram_volume(0, Rational::ONE, &[(i1, Rational::ONE); 12]), Rational::int(21));
    assert_eq!(gram_volume(0, Rational::ONE, &[]), Rational::int(-3));
    assert_eq!(gram_volume(1, Rational::ZERO, &[]), Rational::ZERO);
}

fn arb_fiber() -> impl Strategy<Value = (KodairaFiberType, Rational)> {
    let types = prop_oneof![
        (1u32..4).prop_map(KodairaFiberType::I),
        Just(KodairaFiberType::II),
        Just(KodairaFiberType::III),
        Just(KodairaFiberType::IV),
        (0u32..3).prop_map(KodairaFiberType::IStar),
        Just(KodairaFiberType::IIStar),
        Just(KodairaFiberType::IIIStar),
        Just(KodairaFiberType::IVStar),
    ];
    (types, 0i128..60).prop_map(|(t, n)| (t, q(n, 60)))
}

proptest! {
    #[test]
    fn volume_matches_gram_oracle(
        genus in 0u32..3,
        deg_l in 0i128..4,
        fibers in proptest::collection::vec(arb_fiber(), 0..12),
    ) {
        let x = single_component(genus, Rational::int(deg_l), &fibers).unwrap();
        prop_assert!(validate(&x).is_empty());
        prop_assert_eq!(volume(&x).unwrap(), gram_volume(genus, Rational::int(deg_l), &fibers));
    }

    #[test]
    fn section_degree_counts_attachments(alpha_n in 31i128..=60) {
        let alpha = q(alpha_n, 60);
        let x = two_component_degeneration(alpha).unwrap();
        for c in &x.elliptic {
            let direct = Rational::int(2 * c.genus as i128 - 2 + c.attach.len() as i128)
                + x.weights.sum_over(&x.markers_at_component(&c.id));
            prop_assert_eq!(x.section_degree(&c.id).unwrap(), direct);
        }
    }
}
