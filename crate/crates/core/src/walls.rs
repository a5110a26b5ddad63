//! Walls in weight space across which the stable model changes, chambers as
//! sign patterns, and crossings along a segment of weight vectors.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::curve::{MarkerIndex, WeightVector};
use crate::fiber::{lct_threshold, FiberError, KodairaFiberType};
use crate::rational::{q, Rational};
use crate::surface::BrokenEllipticSurface;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum WallKind {
    /// A single coefficient meets a threshold or 1.
    WI,
    /// The section of a component becomes contractible.
    WII,
    /// A pseudoelliptic tree contracts.
    WIII,
}

/// The hyperplane `sum_{i in subset} a_i = constant`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Wall {
    pub kind: WallKind,
    pub subset: BTreeSet<MarkerIndex>,
    pub constant: Rational,
    pub boundary: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Below,
    On,
    Above,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Chamber {
    pub signs: BTreeMap<Wall, Side>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SegmentCrossing {
    pub t: Rational,
    pub walls: Vec<Wall>,
}

/// Interior crossings sorted by decreasing `t`, and the walls containing
/// each endpoint (`t = 1` is the start `B`, `t = 0` the end `A`).
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SegmentScan {
    pub crossings: Vec<SegmentCrossing>,
    pub at_start: Vec<Wall>,
    pub at_end: Vec<Wall>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WallError {
    #[error("{types} fiber types given for {r} markers")]
    TypeCount { r: usize, types: usize },
    #[error("weight vectors have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Fiber(#[from] FiberError),
}

/// Thresholds of the twisted types: the constants of `W_III` walls.
pub fn wall_constants() -> [Rational; 7] {
    [q(1, 6), q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4), q(5, 6)]
}

impl Wall {
    pub fn new(kind: WallKind, subset: BTreeSet<MarkerIndex>, constant: Rational) -> Self {
        let boundary = constant.is_zero() || (subset.len() == 1 && constant == Rational::ONE);
        Wall { kind, subset, constant, boundary }
    }

    pub fn value(&self, w: &WeightVector) -> Rational {
        w.sum_over(&self.subset)
    }

    pub fn side(&self, w: &WeightVector) -> Side {
        match self.value(w).cmp(&self.constant) {
            std::cmp::Ordering::Less => Side::Below,
            std::cmp::Ordering::Equal => Side::On,
            std::cmp::Ordering::Greater => Side::Above,
        }
    }

    pub fn contains(&self, w: &WeightVector) -> bool {
        self.side(w) == Side::On
    }

    fn key(&self) -> (WallKind, &BTreeSet<MarkerIndex>, Rational) {
        (self.kind, &self.subset, self.constant)
    }
}

fn subsets(r: usize) -> impl Iterator<Item = BTreeSet<MarkerIndex>> {
    (1u64..(1u64 << r)).map(move |mask| (0..r).filter(|i| mask >> i & 1 == 1).map(|i| MarkerIndex(i + 1)).collect())
}

/// The full candidate arrangement for `r` markers whose fibers have the given
/// types, sorted and deduplicated.
pub fn enumerate_walls(
    r: usize,
    fiber_types: &[KodairaFiberType],
    rational_base: bool,
) -> Result<Vec<Wall>, WallError> {
    if fiber_types.len() != r {
        return Err(WallError::TypeCount { r, types: fiber_types.len() });
    }
    let mut walls = BTreeSet::new();
    for (i, &t) in fiber_types.iter().enumerate() {
        if let Some(a0) = lct_threshold(t)? {
            let s = BTreeSet::from([MarkerIndex(i + 1)]);
            walls.insert(Wall::new(WallKind::WI, s.clone(), a0));
            walls.insert(Wall::new(WallKind::WI, s, Rational::ONE));
        }
    }
    for s in subsets(r) {
        walls.insert(Wall::new(WallKind::WII, s.clone(), Rational::ONE));
        for c in wall_constants() {
            walls.insert(Wall::new(WallKind::WIII, s.clone(), c));
        }
    }
    if rational_base && r > 0 {
        walls.insert(Wall::new(WallKind::WII, (1..=r).map(MarkerIndex).collect(), Rational::int(2)));
    }
    Ok(walls.into_iter().collect())
}

pub fn locate(a: &WeightVector, walls: &[Wall]) -> Chamber {
    Chamber { signs: walls.iter().map(|w| (w.clone(), w.side(a))).collect() }
}

/// Walls met by `A(t) = (1 - t) A + t B` for `t` in `[0, 1]`. A wall that
/// contains the whole segment is reported at both endpoints.
pub fn segment_walls(a: &WeightVector, b: &WeightVector, walls: &[Wall]) -> Result<SegmentScan, WallError> {
    if a.len() != b.len() {
        return Err(WallError::LengthMismatch(a.len(), b.len()));
    }
    let mut scan = SegmentScan::default();
    let mut interior: BTreeMap<Rational, Vec<Wall>> = BTreeMap::new();
    for w in walls {
        let (fa, fb) = (w.value(a), w.value(b));
        if fa == fb {
            if fa == w.constant {
                scan.at_start.push(w.clone());
                scan.at_end.push(w.clone());
            }
            continue;
        }
        let t = (w.constant - fa) / (fb - fa);
        if t == Rational::ZERO {
            scan.at_end.push(w.clone());
        } else if t == Rational::ONE {
            scan.at_start.push(w.clone());
        } else if t > Rational::ZERO && t < Rational::ONE {
            interior.entry(t).or_default().push(w.clone());
        }
    }
    scan.crossings = interior.into_iter().rev().map(|(t, walls)| SegmentCrossing { t, walls }).collect();
    Ok(scan)
}

/// Fiber type carrying each marker, in marker order. Markers of collapsed
/// fibers report the fiber's type.
pub fn marker_types(x: &BrokenEllipticSurface) -> Vec<Option<KodairaFiberType>> {
    let mut out = vec![None; x.weights.len()];
    for (_, f) in x.all_fibers() {
        for m in &f.markers {
            if let Some(slot) = m.0.checked_sub(1).and_then(|k| out.get_mut(k)) {
                *slot = Some(f.ftype);
            }
        }
    }
    out
}

/// True when the base curve is a tree of rational curves.
pub fn base_is_rational(x: &BrokenEllipticSurface) -> bool {
    match x.base_curve() {
        Ok(c) => {
            let genus: u32 = c.vertices().iter().map(|v| v.genus).sum();
            genus == 0 && c.edges().len() + 1 == c.vertices().len()
        }
        Err(_) => false,
    }
}

/// Walls that can change the current model of `x`: thresholds of its single
/// marker fibers, sections of rational leaves and isolated rational
/// components, and contractions of existing or prospective trees.
pub fn model_walls(x: &BrokenEllipticSurface) -> Vec<Wall> {
    let mut out = BTreeSet::new();
    for (_, f) in x.all_fibers() {
        if f.markers.len() == 1 {
            if let Ok(Some(a0)) = lct_threshold(f.ftype) {
                out.insert(Wall::new(WallKind::WI, f.markers.clone(), a0));
                out.insert(Wall::new(WallKind::WI, f.markers.clone(), Rational::ONE));
            }
        }
    }
    for c in x.elliptic.iter().filter(|c| !c.section_contracted && c.genus == 0) {
        let markers = x.markers_at_component(&c.id);
        if markers.is_empty() {
            continue;
        }
        match c.attach.len() {
            0 => {
                out.insert(Wall::new(WallKind::WII, markers, Rational::int(2)));
            }
            1 => {
                out.insert(Wall::new(WallKind::WII, markers.clone(), Rational::ONE));
                let a = &c.attach[0];
                let peer_type =
                    x.attach_of(&a.peer).and_then(|fs| fs.iter().find(|f| f.id == a.peer_fiber)).map(|f| f.ftype);
                if let Some(Ok(Some(c0))) = peer_type.map(lct_threshold) {
                    out.insert(Wall::new(WallKind::WIII, markers, c0));
                }
            }
            _ => {}
        }
    }
    for (owner, f) in x.all_fibers() {
        if !f.is_host() {
            continue;
        }
        let hosted = match x.elliptic_component(owner).is_some() || x.pseudo2_component(owner).is_some() {
            true => x.tree_markers_at(owner, &f.id),
            false => {
                let mut found = BTreeSet::new();
                for t in &x.trees {
                    t.root.walk(&mut |n| {
                        if &n.id == owner {
                            found = n.hosted_markers(&f.id);
                        }
                    });
                }
                found
            }
        };
        if let (Ok(Some(c0)), false) = (lct_threshold(f.ftype), hosted.is_empty()) {
            out.insert(Wall::new(WallKind::WIII, hosted, c0));
        }
    }
    out.into_iter().collect()
}

/// The members of `walls` that can change the current model of `x`.
pub fn active_walls(x: &BrokenEllipticSurface, walls: &[Wall]) -> Vec<Wall> {
    let relevant: BTreeSet<_> = model_walls(x).into_iter().map(|w| (w.kind, w.subset, w.constant)).collect();
    walls
        .iter()
        .filter(|w| {
            let (k, s, c) = w.key();
            relevant.contains(&(k, s.clone(), c))
        })
        .cloned()
        .collect()
}
