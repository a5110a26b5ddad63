//! Ready-made models used by tests, benches and the command line examples.

use std::collections::BTreeSet;

use crate::curve::{MarkerIndex, WeightVector};
use crate::fiber::{FiberError, FiberModelState, KodairaFiberType};
use crate::rational::{q, Rational};
use crate::surface::{
    AttachFiber, BrokenEllipticSurface, ComponentId, EllipticComponent, FiberId, MarkedFiber, PseudoComponent,
    PseudoTreeAttachment,
};

/// Rational elliptic surface degenerated into `X1 u X2`, glued along a twisted
/// II fiber of `X1` and a twisted II* fiber of `X2`. `X1` carries ten `I1`
/// fibers of weight one (markers 1..=10), `X2` two `I1` fibers of weight
/// `alpha` (markers 11 and 12).
///
/// The model returned is the one stable at `alpha`: for `alpha <= 1/2` the
/// component `X2` has flipped into a pseudoelliptic tree on `X1`, and for
/// `alpha <= 5/12` the tree has collapsed onto a type II Weierstrass fiber.
pub fn two_component_degeneration(alpha: Rational) -> Result<BrokenEllipticSurface, FiberError> {
    if !alpha.in_unit_interval() {
        return Err(FiberError::CoefficientOutOfRange(alpha));
    }
    let mut w = vec![Rational::ONE; 10];
    w.extend([alpha, alpha]);
    let weights = WeightVector::new(w).expect("weights in range");
    let i1 = KodairaFiberType::I(1);
    let x1_fibers: Vec<MarkedFiber> =
        (1..=10).map(|i| MarkedFiber::marked(&format!("F{i}"), i1, i, Rational::ONE)).collect::<Result<_, _>>()?;
    let x2_fibers: Vec<MarkedFiber> =
        [11, 12].iter().map(|&i| MarkedFiber::marked(&format!("F{i}"), i1, i, alpha)).collect::<Result<_, _>>()?;
    let x1 = ComponentId::from("X1");
    let x2 = ComponentId::from("X2");
    let g1 = FiberId::from("G1");
    let g2 = FiberId::from("G2");

    let mut model = if alpha > q(1, 2) {
        let c1 = EllipticComponent {
            id: x1.clone(),
            genus: 0,
            deg_l: Rational::ONE,
            isotrivial_jinf: false,
            section_contracted: false,
            fibers: x1_fibers,
            attach: vec![AttachFiber {
                id: g1.clone(),
                ftype: KodairaFiberType::II,
                peer: x2.clone(),
                peer_fiber: g2.clone(),
            }],
        };
        let c2 = EllipticComponent {
            id: x2,
            genus: 0,
            deg_l: Rational::ONE,
            isotrivial_jinf: false,
            section_contracted: false,
            fibers: x2_fibers,
            attach: vec![AttachFiber { id: g2, ftype: KodairaFiberType::IIStar, peer: x1, peer_fiber: g1 }],
        };
        BrokenEllipticSurface { elliptic: vec![c1, c2], pseudo2: vec![], trees: vec![], weights }
    } else if alpha > q(5, 12) {
        let mut fibers = x1_fibers;
        fibers.push(MarkedFiber {
            id: g1.clone(),
            ftype: KodairaFiberType::II,
            coeff: Rational::ZERO,
            state: FiberModelState::Intermediate,
            markers: BTreeSet::new(),
            non_minimal_cusp: false,
        });
        let c1 = EllipticComponent {
            id: x1.clone(),
            genus: 0,
            deg_l: Rational::ONE,
            isotrivial_jinf: false,
            section_contracted: false,
            fibers,
            attach: vec![],
        };
        let root = PseudoComponent {
            id: x2,
            deg_l: Rational::ONE,
            isotrivial_jinf: false,
            fibers: x2_fibers,
            children: vec![],
        };
        BrokenEllipticSurface {
            elliptic: vec![c1],
            pseudo2: vec![],
            trees: vec![PseudoTreeAttachment { host: x1, host_fiber: g1, root }],
            weights,
        }
    } else {
        let mut fibers = x1_fibers;
        fibers.push(MarkedFiber {
            id: g1,
            ftype: KodairaFiberType::II,
            coeff: Rational::ZERO,
            state: FiberModelState::Weierstrass,
            markers: BTreeSet::from([MarkerIndex(11), MarkerIndex(12)]),
            non_minimal_cusp: false,
        });
        let c1 = EllipticComponent {
            id: x1,
            genus: 0,
            deg_l: Rational::ONE,
            isotrivial_jinf: false,
            section_contracted: false,
            fibers,
            attach: vec![],
        };
        BrokenEllipticSurface { elliptic: vec![c1], pseudo2: vec![], trees: vec![], weights }
    };
    model.refresh_coefficients();
    Ok(model)
}

/// One elliptic component over a curve of genus `genus` with one marker per
/// entry of `fibers`, each fiber in the model its weight dictates.
pub fn single_component(
    genus: u32,
    deg_l: Rational,
    fibers: &[(KodairaFiberType, Rational)],
) -> Result<BrokenEllipticSurface, FiberError> {
    let marked = fibers
        .iter()
        .enumerate()
        .map(|(i, &(t, a))| MarkedFiber::marked(&format!("F{}", i + 1), t, i + 1, a))
        .collect::<Result<Vec<_>, _>>()?;
    let weights = WeightVector::new(fibers.iter().map(|f| f.1).collect()).map_err(|_| {
        FiberError::CoefficientOutOfRange(
            fibers.iter().map(|f| f.1).find(|a| !a.in_unit_interval()).unwrap_or_default(),
        )
    })?;
    Ok(BrokenEllipticSurface {
        elliptic: vec![EllipticComponent {
            id: ComponentId::from("X1"),
            genus,
            deg_l,
            isotrivial_jinf: false,
            section_contracted: false,
            fibers: marked,
            attach: vec![],
        }],
        pseudo2: vec![],
        trees: vec![],
        weights,
    })
}
