//! Workloads shared by the benchmarks.

use mmp_elliptic_core::surface::{AttachFiber, EllipticComponent, MarkedFiber};
use mmp_elliptic_core::{BrokenEllipticSurface, ComponentId, FiberId, KodairaFiberType, Rational, WeightVector};

/// A chain `X1 - X2 - ... - Xk` of rational components glued along `I*0`
/// fibers. Each component carries `per` markers on `I1` fibers of weight one.
pub fn chain(k: usize, per: usize) -> BrokenEllipticSurface {
    assert!(k >= 1 && per >= 1);
    let i1 = KodairaFiberType::I(1);
    let glue = KodairaFiberType::IStar(0);
    let mut elliptic = Vec::with_capacity(k);
    for c in 1..=k {
        let fibers = (0..per)
            .map(|j| {
                let m = (c - 1) * per + j + 1;
                MarkedFiber::marked(&format!("F{m}"), i1, m, Rational::ONE).expect("weight one is valid")
            })
            .collect();
        let mut attach = Vec::new();
        if c > 1 {
            attach.push(AttachFiber {
                id: FiberId::from(format!("G{}b", c - 1).as_str()),
                ftype: glue,
                peer: ComponentId::from(format!("X{}", c - 1).as_str()),
                peer_fiber: FiberId::from(format!("G{}a", c - 1).as_str()),
            });
        }
        if c < k {
            attach.push(AttachFiber {
                id: FiberId::from(format!("G{c}a").as_str()),
                ftype: glue,
                peer: ComponentId::from(format!("X{}", c + 1).as_str()),
                peer_fiber: FiberId::from(format!("G{c}b").as_str()),
            });
        }
        elliptic.push(EllipticComponent {
            id: ComponentId::from(format!("X{c}").as_str()),
            genus: 0,
            deg_l: Rational::ONE,
            isotrivial_jinf: false,
            section_contracted: false,
            fibers,
            attach,
        });
    }
    let weights = WeightVector::new(vec![Rational::ONE; k * per]).expect("unit weights");
    BrokenEllipticSurface { elliptic, pseudo2: vec![], trees: vec![], weights }
}

/// Every weight set to `w`.
pub fn uniform(x: &BrokenEllipticSurface, w: Rational) -> WeightVector {
    WeightVector::new(vec![w; x.weights.len()]).expect("weight in range")
}
