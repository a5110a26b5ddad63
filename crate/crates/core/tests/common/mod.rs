//! Seeded generators of valid models and target weights.
#![allow(dead_code)]

use mmp_elliptic_core::{
    hassett_reduce, is_hassett_stable, q, validate, AttachFiber, BrokenEllipticSurface, ComponentId, EllipticComponent,
    FiberId, KodairaFiberType, MarkedFiber, Rational, WeightVector,
};
use rand::rngs::StdRng;
use rand::Rng;

use KodairaFiberType::*;

pub const MARKER_TYPES: [KodairaFiberType; 11] =
    [I(1), I(2), I(3), II, III, IV, IStar(0), IStar(1), IIStar, IIIStar, IVStar];

/// Twisted fibers that can be glued to each other.
pub const ATTACH_PAIRS: [(KodairaFiberType, KodairaFiberType); 5] =
    [(II, IIStar), (III, IIIStar), (IV, IVStar), (IStar(0), IStar(0)), (IStar(1), IStar(1))];

/// A tree of at most `max_components` elliptic components glued along twisted
/// fibers, with at most `max_markers` marked fibers, all weights 1, whose
/// base curve is Hassett stable.
pub fn random_model(rng: &mut StdRng, max_components: usize, max_markers: usize) -> BrokenEllipticSurface {
    loop {
        let k = rng.gen_range(1..=max_components);
        let r = rng.gen_range(1..=max_markers);
        let ids: Vec<ComponentId> = (1..=k).map(|i| ComponentId(format!("X{i}"))).collect();
        let mut comps: Vec<EllipticComponent> = ids
            .iter()
            .map(|id| EllipticComponent {
                id: id.clone(),
                genus: if rng.gen_bool(0.25) { 1 } else { 0 },
                deg_l: Rational::int(rng.gen_range(1..=2)),
                isotrivial_jinf: false,
                section_contracted: false,
                fibers: vec![],
                attach: vec![],
            })
            .collect();
        for child in 1..k {
            let parent = rng.gen_range(0..child);
            let (mut a, mut b) = ATTACH_PAIRS[rng.gen_range(0..ATTACH_PAIRS.len())];
            if rng.gen_bool(0.5) {
                std::mem::swap(&mut a, &mut b);
            }
            let fa = FiberId(format!("G{child}a"));
            let fb = FiberId(format!("G{child}b"));
            comps[parent].attach.push(AttachFiber {
                id: fa.clone(),
                ftype: a,
                peer: ids[child].clone(),
                peer_fiber: fb.clone(),
            });
            comps[child].attach.push(AttachFiber { id: fb, ftype: b, peer: ids[parent].clone(), peer_fiber: fa });
        }
        for m in 1..=r {
            let t = MARKER_TYPES[rng.gen_range(0..MARKER_TYPES.len())];
            let c = rng.gen_range(0..k);
            comps[c].fibers.push(MarkedFiber::marked(&format!("F{m}"), t, m, Rational::ONE).expect("weight one"));
        }
        let x = BrokenEllipticSurface {
            elliptic: comps,
            pseudo2: vec![],
            trees: vec![],
            weights: WeightVector::uniform(r, Rational::ONE).expect("weights"),
        };
        let Ok(base) = x.base_curve() else { continue };
        if is_hassett_stable(&base, &x.weights) == Ok(true) && validate(&x).is_empty() {
            return x;
        }
    }
}

/// Entries `n / denom` with `lo <= n / denom <= upper_i`.
pub fn random_below(rng: &mut StdRng, upper: &WeightVector, denom: i128, positive: bool) -> WeightVector {
    let entries = upper
        .entries()
        .iter()
        .map(|u| {
            let top = (*u * Rational::int(denom)).numer() / (*u * Rational::int(denom)).denom();
            let lo = if positive { 1 } else { 0 };
            q(rng.gen_range(lo..=top.max(lo)), denom)
        })
        .collect();
    WeightVector::new(entries).expect("weights in range")
}

/// Positive weights at which the Hassett reduction of the base curve is stable.
pub fn admissible(x: &BrokenEllipticSurface, w: &WeightVector) -> bool {
    if w.entries().iter().any(|a| a.is_zero()) {
        return false;
    }
    let base = x.base_curve().expect("base curve");
    match hassett_reduce(&base, w) {
        Ok(c) => is_hassett_stable(&c, w) == Ok(true),
        Err(_) => false,
    }
}

pub fn random_admissible(
    rng: &mut StdRng,
    x: &BrokenEllipticSurface,
    upper: &WeightVector,
    denom: i128,
) -> WeightVector {
    loop {
        let w = random_below(rng, upper, denom, true);
        if admissible(x, &w) {
            return w;
        }
    }
}

/// Admissible `a <= m <= x.weights`, with `a` the componentwise minimum of `m`
/// and another admissible point.
pub fn random_admissible_pair(
    rng: &mut StdRng,
    x: &BrokenEllipticSurface,
    denom: i128,
) -> (WeightVector, WeightVector) {
    loop {
        let m = random_admissible(rng, x, &x.weights, denom);
        for _ in 0..50 {
            let l = random_admissible(rng, x, &x.weights, denom);
            let a = WeightVector::new(m.entries().iter().zip(l.entries()).map(|(p, q)| *p.min(q)).collect())
                .expect("weights in range");
            if admissible(x, &a) {
                return (a, m);
            }
        }
    }
}
