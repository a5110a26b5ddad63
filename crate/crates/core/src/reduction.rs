//! Wall crossings and the reduction morphism between weight vectors.
//!
//! [`reduce`] walks `A(t) = (1 - t) A + t B` from `t = 1` (the current
//! weights `B`) down to `t = 0` (the target `A`), stopping at every value of
//! `t` where a condition of the current model becomes tight and applying the
//! corresponding transformation. Walls met at the same `t` form one batch,
//! processed W_I first, then W_II, then W_III.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::curve::{hassett_reduce, CurveError, MarkedNodalCurve, MarkerIndex, WeightVector};
use crate::fiber::{lct_threshold, FiberModelState};
use crate::rational::Rational;
use crate::surface::{
    validate, AttachFiber, BrokenEllipticSurface, ComponentId, FiberId, MarkedFiber, PseudoComponent,
    PseudoTreeAttachment, SurfaceError, TreeChild, TypeIIPseudo, Violation,
};
use crate::walls::{Wall, WallKind};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum TransformationKind {
    FiberToIntermediate,
    FiberToWeierstrass,
    FiberToTwisted,
    LaNaveFlip,
    TypeIIPseudoFormation,
    WholeSectionContraction,
    TreeCollapseToPoint,
    TreeCollapseToCurve,
}

impl TransformationKind {
    pub const ALL: [TransformationKind; 8] = [
        TransformationKind::FiberToIntermediate,
        TransformationKind::FiberToWeierstrass,
        TransformationKind::FiberToTwisted,
        TransformationKind::LaNaveFlip,
        TransformationKind::TypeIIPseudoFormation,
        TransformationKind::WholeSectionContraction,
        TransformationKind::TreeCollapseToPoint,
        TransformationKind::TreeCollapseToCurve,
    ];
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Decreasing,
    Increasing,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransformationRecord {
    pub kind: TransformationKind,
    pub wall: Wall,
    /// Segment parameter of the crossing. [`cross_wall`] leaves it at zero.
    pub t: Rational,
    pub affected: Vec<String>,
    pub snapshot_after: BrokenEllipticSurface,
    pub note: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionTrace {
    pub start: BrokenEllipticSurface,
    pub target: WeightVector,
    pub records: Vec<TransformationRecord>,
    pub final_model: BrokenEllipticSurface,
    /// Set when the walk stopped early at a transformation that needs review.
    pub review: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ReduceOptions {
    /// Compare the base curve with Hassett's reduction after every step.
    pub check_hassett: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("invalid model: {}", join(.0))]
    InvalidModel(Vec<Violation>),
    #[error("weights do not lie on the wall {0:?}")]
    WallNotSatisfied(Wall),
    #[error("rule not applicable: {0}")]
    RuleNotApplicable(String),
    #[error("inconsistent target: {0}")]
    InconsistentTarget(String),
    #[error("component {0} has negative section degree at the start weights")]
    UnstableStart(ComponentId),
    #[error("base curve differs from the Hassett reduction at t = {0}")]
    HassettMismatch(Rational),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

fn not_applicable<T>(why: impl Into<String>) -> Result<T, ReductionError> {
    Err(ReductionError::RuleNotApplicable(why.into()))
}

fn check_valid(x: &BrokenEllipticSurface) -> Result<(), ReductionError> {
    let v = validate(x);
    if v.is_empty() {
        Ok(())
    } else {
        Err(ReductionError::InvalidModel(v))
    }
}

fn find_node_mut<'a>(n: &'a mut PseudoComponent, id: &ComponentId) -> Option<&'a mut PseudoComponent> {
    if &n.id == id {
        return Some(n);
    }
    for c in &mut n.children {
        if let Some(found) = find_node_mut(&mut c.node, id) {
            return Some(found);
        }
    }
    None
}

fn fibers_mut<'a>(x: &'a mut BrokenEllipticSurface, owner: &ComponentId) -> Option<&'a mut Vec<MarkedFiber>> {
    if let Some(c) = x.elliptic.iter_mut().find(|c| &c.id == owner) {
        return Some(&mut c.fibers);
    }
    if let Some(p) = x.pseudo2.iter_mut().find(|p| &p.id == owner) {
        return Some(&mut p.fibers);
    }
    for t in &mut x.trees {
        if let Some(n) = find_node_mut(&mut t.root, owner) {
            return Some(&mut n.fibers);
        }
    }
    None
}

fn fiber_mut<'a>(x: &'a mut BrokenEllipticSurface, owner: &ComponentId, id: &FiberId) -> Option<&'a mut MarkedFiber> {
    fibers_mut(x, owner)?.iter_mut().find(|f| &f.id == id)
}

/// A host fiber together with the marker set of the trees glued to it.
struct Host {
    owner: ComponentId,
    fiber: FiberId,
    nested: bool,
    hosted: BTreeSet<MarkerIndex>,
    threshold: Option<Rational>,
}

/// Top-level hosts first, then nested ones in preorder.
fn hosts(x: &BrokenEllipticSurface) -> Vec<Host> {
    let mut out = Vec::new();
    let mut top: Vec<(&ComponentId, &MarkedFiber)> = Vec::new();
    for c in &x.elliptic {
        top.extend(c.fibers.iter().map(|f| (&c.id, f)));
    }
    for p in &x.pseudo2 {
        top.extend(p.fibers.iter().map(|f| (&p.id, f)));
    }
    top.sort_by(|a, b| (a.0, &a.1.id).cmp(&(b.0, &b.1.id)));
    for (owner, f) in top.into_iter().filter(|(_, f)| f.is_host()) {
        out.push(Host {
            owner: owner.clone(),
            fiber: f.id.clone(),
            nested: false,
            hosted: x.tree_markers_at(owner, &f.id),
            threshold: lct_threshold(f.ftype).ok().flatten(),
        });
    }
    let mut trees: Vec<&PseudoTreeAttachment> = x.trees.iter().collect();
    trees.sort_by(|a, b| (&a.host, &a.host_fiber).cmp(&(&b.host, &b.host_fiber)));
    for t in trees {
        t.root.walk(&mut |n| {
            for f in n.fibers.iter().filter(|f| f.is_host()) {
                out.push(Host {
                    owner: n.id.clone(),
                    fiber: f.id.clone(),
                    nested: true,
                    hosted: n.hosted_markers(&f.id),
                    threshold: lct_threshold(f.ftype).ok().flatten(),
                });
            }
        });
    }
    out
}

fn sorted_elliptic(x: &BrokenEllipticSurface) -> Vec<&crate::surface::EllipticComponent> {
    let mut v: Vec<_> = x.elliptic.iter().filter(|c| !c.section_contracted).collect();
    v.sort_by(|a, b| a.id.cmp(&b.id));
    v
}

/// Value of `2 - 2g - valence`: the weight at which the section degree vanishes.
fn section_wall_constant(c: &crate::surface::EllipticComponent) -> Rational {
    Rational::int(2 - 2 * c.genus as i128 - c.attach.len() as i128)
}

type Applied = (BrokenEllipticSurface, TransformationKind, Vec<String>, Option<String>);

fn cross_wi(x: &BrokenEllipticSurface, wall: &Wall, dir: Direction) -> Result<Applied, ReductionError> {
    let Some((owner, f)) = x.all_fibers().into_iter().find(|(_, f)| !f.is_host() && f.markers == wall.subset) else {
        return not_applicable("no fiber carries exactly the markers of the wall");
    };
    let (owner, id, state, ftype) = (owner.clone(), f.id.clone(), f.state, f.ftype);
    let threshold = lct_threshold(ftype).ok().flatten();
    let (kind, new_state) = match dir {
        Direction::Decreasing if wall.constant == Rational::ONE && state == FiberModelState::Twisted => {
            (TransformationKind::FiberToIntermediate, FiberModelState::Intermediate)
        }
        Direction::Decreasing if state == FiberModelState::Intermediate && threshold == Some(wall.constant) => {
            (TransformationKind::FiberToWeierstrass, FiberModelState::Weierstrass)
        }
        Direction::Increasing if wall.constant == Rational::ONE && state == FiberModelState::Intermediate => {
            (TransformationKind::FiberToTwisted, FiberModelState::Twisted)
        }
        _ => return not_applicable(format!("{ftype} fiber in {state:?} form does not change across this wall")),
    };
    let mut y = x.clone();
    fiber_mut(&mut y, &owner, &id).expect("fiber located above").state = new_state;
    Ok((y, kind, vec![format!("{owner}/{id}")], None))
}

/// Glues `root` along the peer fiber of `a`, which becomes a host fiber. The
/// trees hosted by `root` move beneath it. If the peer is a type II component
/// left with a single attach fiber, it is returned as the next root to hang.
fn hang_tree(
    y: &mut BrokenEllipticSurface,
    mut root: PseudoComponent,
    a: &AttachFiber,
) -> Result<Option<(PseudoComponent, AttachFiber)>, ReductionError> {
    let host_type = match y.attach_of(&a.peer).and_then(|fs| fs.iter().find(|f| f.id == a.peer_fiber)) {
        Some(f) => f.ftype,
        None => return not_applicable("peer attach fiber missing"),
    };
    if !matches!(lct_threshold(host_type), Ok(Some(_))) {
        return not_applicable(format!("attach fiber of type {host_type} cannot host a pseudoelliptic tree"));
    }
    let peer_attach = match y.elliptic.iter_mut().find(|e| e.id == a.peer) {
        Some(e) => &mut e.attach,
        None => &mut y.pseudo2.iter_mut().find(|p| p.id == a.peer).expect("peer exists").attach,
    };
    let pos = peer_attach.iter().position(|f| f.id == a.peer_fiber).expect("peer fiber exists");
    let pa = peer_attach.remove(pos);
    fibers_mut(y, &a.peer).expect("peer exists").push(MarkedFiber {
        id: pa.id,
        ftype: pa.ftype,
        coeff: Rational::ZERO,
        state: FiberModelState::Intermediate,
        markers: BTreeSet::new(),
        non_minimal_cusp: false,
    });
    let (hosted, rest): (Vec<_>, Vec<_>) = std::mem::take(&mut y.trees).into_iter().partition(|t| t.host == root.id);
    y.trees = rest;
    root.children.extend(hosted.into_iter().map(|t| TreeChild { via: t.host_fiber, node: t.root }));
    y.trees.push(PseudoTreeAttachment { host: a.peer.clone(), host_fiber: a.peer_fiber.clone(), root });
    let Some(i) = y.pseudo2.iter().position(|p| p.id == a.peer && p.attach.len() == 1) else {
        return Ok(None);
    };
    let p = y.pseudo2.remove(i);
    let next = p.attach[0].clone();
    let root = PseudoComponent {
        id: p.id,
        deg_l: p.deg_l,
        isotrivial_jinf: p.isotrivial_jinf,
        fibers: p.fibers,
        children: Vec::new(),
    };
    Ok(Some((root, next)))
}

fn cross_wii(x: &BrokenEllipticSurface, wall: &Wall) -> Result<Applied, ReductionError> {
    let matches: Vec<_> = sorted_elliptic(x)
        .into_iter()
        .filter(|c| section_wall_constant(c) == wall.constant && x.markers_at_component(&c.id) == wall.subset)
        .collect();
    let Some(c) = matches.first() else {
        return not_applicable("no component has its section on this wall");
    };
    let note = (matches.len() > 1)
        .then(|| format!("{} components lie on this wall; processed {} first (lowest id)", matches.len(), c.id));
    let cid = c.id.clone();
    let self_loop = c.attach.iter().any(|a| a.peer == cid);
    let mut y = x.clone();
    let idx = y.elliptic.iter().position(|e| e.id == cid).expect("component located above");
    if x.elliptic.len() == 1 {
        y.elliptic[idx].section_contracted = true;
        return Ok((y, TransformationKind::WholeSectionContraction, vec![cid.to_string()], note));
    }
    if c.genus != 0 || self_loop {
        return not_applicable(format!("section of {cid} cannot be contracted on a reducible base"));
    }
    match c.attach.len() {
        1 => {
            let comp = y.elliptic.remove(idx);
            let a = comp.attach[0].clone();
            let root = PseudoComponent {
                id: comp.id,
                deg_l: comp.deg_l,
                isotrivial_jinf: comp.isotrivial_jinf,
                fibers: comp.fibers,
                children: Vec::new(),
            };
            let mut affected = vec![cid.to_string(), format!("{}/{}", a.peer, a.peer_fiber)];
            let mut note = note;
            let mut pending = Some((root, a));
            while let Some((root, a)) = pending.take() {
                pending = hang_tree(&mut y, root, &a)?;
                if let Some((p, next)) = &pending {
                    // A type II component that loses one neighbour becomes part of the tree.
                    affected.push(format!("{}/{}", next.peer, next.peer_fiber));
                    let msg = format!("type II component {} joins the tree", p.id);
                    note = Some(note.map_or(msg.clone(), |n| format!("{n}; {msg}")));
                }
            }
            Ok((y, TransformationKind::LaNaveFlip, affected, note))
        }
        2 => {
            let comp = y.elliptic.remove(idx);
            y.pseudo2.push(TypeIIPseudo {
                id: comp.id,
                deg_l: comp.deg_l,
                isotrivial_jinf: comp.isotrivial_jinf,
                fibers: comp.fibers,
                attach: comp.attach,
            });
            Ok((y, TransformationKind::TypeIIPseudoFormation, vec![cid.to_string()], note))
        }
        n => not_applicable(format!("section of {cid} with valence {n} cannot reach degree zero")),
    }
}

fn cross_wiii(x: &BrokenEllipticSurface, wall: &Wall) -> Result<Applied, ReductionError> {
    let Some(h) = hosts(x).into_iter().find(|h| h.hosted == wall.subset && h.threshold == Some(wall.constant)) else {
        return not_applicable("no pseudoelliptic tree matches this wall");
    };
    let mut y = x.clone();
    let removed: Vec<PseudoComponent> = if h.nested {
        let node = y.trees.iter_mut().find_map(|t| find_node_mut(&mut t.root, &h.owner)).expect("nested host exists");
        let (gone, kept): (Vec<_>, Vec<_>) =
            std::mem::take(&mut node.children).into_iter().partition(|c| c.via == h.fiber);
        node.children = kept;
        gone.into_iter().map(|c| c.node).collect()
    } else {
        let (gone, kept): (Vec<_>, Vec<_>) =
            std::mem::take(&mut y.trees).into_iter().partition(|t| t.host == h.owner && t.host_fiber == h.fiber);
        y.trees = kept;
        gone.into_iter().map(|t| t.root).collect()
    };
    let to_curve = removed.iter().any(|r| r.isotrivial_jinf && r.deg_l.is_zero());
    let on_boundary = h.hosted.iter().any(|&m| {
        let w = x.weights.at(m);
        w.is_zero() || w == Rational::ONE
    });
    let f = fiber_mut(&mut y, &h.owner, &h.fiber).expect("host fiber exists");
    f.markers = h.hosted.clone();
    f.state = FiberModelState::Weierstrass;
    f.non_minimal_cusp = on_boundary;
    let mut affected: Vec<String> = removed.iter().map(|r| r.id.to_string()).collect();
    affected.push(format!("{}/{}", h.owner, h.fiber));
    if to_curve {
        let note = "requires-manual-review: tree contracts to a curve; base bookkeeping not modelled".to_string();
        Ok((y, TransformationKind::TreeCollapseToCurve, affected, Some(note)))
    } else {
        Ok((y, TransformationKind::TreeCollapseToPoint, affected, None))
    }
}

/// Applies the transformation across `wall`. The weights of `x` must lie on
/// the wall; only W_I walls at 1 can be crossed in the increasing direction.
pub fn cross_wall(
    x: &BrokenEllipticSurface,
    wall: &Wall,
    direction: Direction,
) -> Result<(BrokenEllipticSurface, TransformationRecord), ReductionError> {
    check_valid(x)?;
    if wall.subset.iter().any(|m| x.weights.get(*m).is_none()) {
        return Err(ReductionError::InconsistentTarget("wall refers to an unknown marker".into()));
    }
    if !wall.contains(&x.weights) {
        return Err(ReductionError::WallNotSatisfied(wall.clone()));
    }
    let (mut y, kind, affected, note) = match (wall.kind, direction) {
        (WallKind::WI, d) => cross_wi(x, wall, d)?,
        (WallKind::WII, Direction::Decreasing) => cross_wii(x, wall)?,
        (WallKind::WIII, Direction::Decreasing) => cross_wiii(x, wall)?,
        (_, Direction::Increasing) => return not_applicable("only W_I walls at 1 are crossed upwards"),
    };
    y.refresh_coefficients();
    check_valid(&y)?;
    let record =
        TransformationRecord { kind, wall: wall.clone(), t: Rational::ZERO, affected, snapshot_after: y.clone(), note };
    Ok((y, record))
}

/// Walls whose condition holds at the current weights, in processing order.
fn pending_walls(x: &BrokenEllipticSurface, target: &WeightVector) -> Vec<Wall> {
    let w = &x.weights;
    let mut out = Vec::new();
    let mut fibers = x.all_fibers();
    fibers.sort_by(|a, b| (a.0, &a.1.id).cmp(&(b.0, &b.1.id)));
    for (_, f) in fibers.into_iter().filter(|(_, f)| !f.is_host()) {
        match f.state {
            FiberModelState::Twisted if target.sum_over(&f.markers) < w.sum_over(&f.markers) => {
                out.push(Wall::new(WallKind::WI, f.markers.clone(), Rational::ONE));
            }
            FiberModelState::Intermediate => {
                if let Ok(Some(a0)) = lct_threshold(f.ftype) {
                    if w.sum_over(&f.markers) <= a0 {
                        out.push(Wall::new(WallKind::WI, f.markers.clone(), a0));
                    }
                }
            }
            _ => {}
        }
    }
    for c in sorted_elliptic(x) {
        let markers = x.markers_at_component(&c.id);
        let constant = section_wall_constant(c);
        if w.sum_over(&markers) <= constant {
            out.push(Wall::new(WallKind::WII, markers, constant));
        }
    }
    for h in hosts(x) {
        if let Some(c) = h.threshold {
            if w.sum_over(&h.hosted) <= c {
                out.push(Wall::new(WallKind::WIII, h.hosted, c));
            }
        }
    }
    out
}

/// Largest `s < t` at which a condition of `x` becomes tight on the segment.
fn next_event(x: &BrokenEllipticSurface, start: &WeightVector, target: &WeightVector, t: Rational) -> Option<Rational> {
    let mut conditions: Vec<(BTreeSet<MarkerIndex>, Rational)> = Vec::new();
    for (_, f) in x.all_fibers() {
        if !f.is_host() && f.state == FiberModelState::Intermediate {
            if let Ok(Some(a0)) = lct_threshold(f.ftype) {
                conditions.push((f.markers.clone(), a0));
            }
        }
    }
    for c in sorted_elliptic(x) {
        conditions.push((x.markers_at_component(&c.id), section_wall_constant(c)));
    }
    for h in hosts(x) {
        if let Some(c) = h.threshold {
            conditions.push((h.hosted, c));
        }
    }
    conditions
        .into_iter()
        .filter_map(|(s, c)| {
            let (fa, fb) = (target.sum_over(&s), start.sum_over(&s));
            if fa == fb {
                return None;
            }
            let hit = (c - fa) / (fb - fa);
            (hit >= Rational::ZERO && hit < t).then_some(hit)
        })
        .max()
}

fn check_against_hassett(
    base: &MarkedNodalCurve,
    snapshot: &BrokenEllipticSurface,
    t: Rational,
) -> Result<(), ReductionError> {
    let expected = hassett_reduce(base, &snapshot.weights)?;
    if snapshot.base_curve()?.is_isomorphic(&expected) {
        Ok(())
    } else {
        Err(ReductionError::HassettMismatch(t))
    }
}

pub fn reduce(x: &BrokenEllipticSurface, target: &WeightVector) -> Result<ReductionTrace, ReductionError> {
    reduce_with(x, target, ReduceOptions::default())
}

/// The reduction morphism from the weights of `x` down to `target`.
pub fn reduce_with(
    x: &BrokenEllipticSurface,
    target: &WeightVector,
    options: ReduceOptions,
) -> Result<ReductionTrace, ReductionError> {
    check_valid(x)?;
    let start_w = x.weights.clone();
    if target.len() != start_w.len() {
        return Err(ReductionError::InconsistentTarget(format!(
            "target has {} weights, model has {}",
            target.len(),
            start_w.len()
        )));
    }
    if let Some(i) = target.indices().find(|&i| target.at(i) > start_w.at(i)) {
        return Err(ReductionError::InconsistentTarget(format!("target weight of marker {i} exceeds the current one")));
    }
    let mut trace = ReductionTrace {
        start: x.clone(),
        target: target.clone(),
        records: Vec::new(),
        final_model: x.clone(),
        review: None,
    };
    if target == &start_w {
        return Ok(trace);
    }
    for c in sorted_elliptic(x) {
        if x.section_degree(&c.id)? < Rational::ZERO {
            return Err(ReductionError::UnstableStart(c.id.clone()));
        }
    }
    let base = if options.check_hassett { Some(x.base_curve()?) } else { None };
    let mut cur = x.clone();
    let mut t = Rational::ONE;
    loop {
        let batch_start = trace.records.len();
        loop {
            let pending = pending_walls(&cur, target);
            let Some(wall) = pending.first() else { break };
            let simultaneous = pending.iter().filter(|w| w.kind == WallKind::WII).count() > 1;
            let (next, mut record) = cross_wall(&cur, wall, Direction::Decreasing)?;
            record.t = t;
            if simultaneous && wall.kind == WallKind::WII && record.note.is_none() {
                record.note = Some("several W_II walls at this t; processed in lowest-component-id order".into());
            }
            cur = next;
            let halt = record.kind == TransformationKind::TreeCollapseToCurve;
            if halt {
                trace.review = record.note.clone();
            }
            trace.records.push(record);
            if halt {
                trace.final_model = cur;
                return Ok(trace);
            }
        }
        // Several walls can meet at one t; the base curve is compared once
        // all of them have been crossed.
        if let Some(b) = base.as_ref().filter(|_| trace.records.len() > batch_start) {
            check_against_hassett(b, &cur, t)?;
        }
        match next_event(&cur, &start_w, target, t) {
            Some(s) => {
                t = s;
                cur = cur.reweighted(WeightVector::interpolate(target, &start_w, t));
            }
            None => break,
        }
    }
    if t != Rational::ZERO {
        cur = cur.reweighted(target.clone());
    }
    if let Some(b) = &base {
        check_against_hassett(b, &cur, Rational::ZERO)?;
    }
    trace.final_model = cur;
    Ok(trace)
}

/// Raises the weight of `marker` to one. An intermediate fiber carrying it
/// becomes twisted; stable fibers are unchanged and yield no record.
pub fn increase_to_one(
    x: &BrokenEllipticSurface,
    marker: MarkerIndex,
) -> Result<(BrokenEllipticSurface, Option<TransformationRecord>), ReductionError> {
    check_valid(x)?;
    let Some(w) = x.weights.get(marker) else {
        return Err(ReductionError::InconsistentTarget(format!("marker {marker} does not exist")));
    };
    if w == Rational::ONE {
        return not_applicable(format!("marker {marker} already has weight one"));
    }
    let Some((_, f)) = x.all_fibers().into_iter().find(|(_, f)| f.markers.contains(&marker)) else {
        return not_applicable(format!("marker {marker} is not carried by any fiber"));
    };
    let stable = matches!(lct_threshold(f.ftype), Ok(None));
    if !stable && (f.state != FiberModelState::Intermediate || f.markers.len() != 1) {
        return not_applicable(format!("{} fiber in {:?} form cannot be raised to weight one", f.ftype, f.state));
    }
    let mut raised = x.weights.clone();
    raised.set(marker, Rational::ONE)?;
    let y = x.reweighted(raised);
    if stable {
        check_valid(&y)?;
        return Ok((y, None));
    }
    let wall = Wall::new(WallKind::WI, BTreeSet::from([marker]), Rational::ONE);
    let (z, mut record) = cross_wall(&y, &wall, Direction::Increasing)?;
    record.t = Rational::ONE;
    Ok((z, Some(record)))
}
