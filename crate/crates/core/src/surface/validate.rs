use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{BrokenEllipticSurface, ComponentId, FiberId, MarkedFiber, PseudoComponent};
use crate::curve::MarkerIndex;
use crate::fiber::{fiber_model_at, lct_threshold, FiberModelState, KodairaFiberType};
use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum ViolationKind {
    WeightRange,
    MarkerAssignment,
    DuplicateId,
    Attachment,
    Connectivity,
    UnsupportedType,
    FiberState,
    Coefficient,
    TreeCoefficient,
    HostFiber,
    TypeIIComponent,
    LineBundleDegree,
    ContractedSection,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {}: {}", self.kind, self.location, self.message)
    }
}

struct Checker<'a> {
    x: &'a BrokenEllipticSurface,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn push(&mut self, kind: ViolationKind, location: impl fmt::Display, message: impl Into<String>) {
        self.out.push(Violation { kind, location: location.to_string(), message: message.into() });
    }

    fn ids(&mut self) {
        let x = self.x;
        let mut components: Vec<&ComponentId> = Vec::new();
        let mut fibers: Vec<&FiberId> = Vec::new();
        for c in &x.elliptic {
            components.push(&c.id);
            fibers.extend(c.fibers.iter().map(|f| &f.id).chain(c.attach.iter().map(|a| &a.id)));
        }
        for p in &x.pseudo2 {
            components.push(&p.id);
            fibers.extend(p.fibers.iter().map(|f| &f.id).chain(p.attach.iter().map(|a| &a.id)));
        }
        for t in &x.trees {
            t.root.walk(&mut |n| {
                components.push(&n.id);
                fibers.extend(n.fibers.iter().map(|f| &f.id));
            });
        }
        let mut seen = BTreeSet::new();
        for c in components {
            if !seen.insert(c.0.as_str()) {
                self.push(ViolationKind::DuplicateId, c, "component id used more than once");
            }
        }
        let mut seen = BTreeSet::new();
        for f in fibers {
            if !seen.insert(f.0.as_str()) {
                self.push(ViolationKind::DuplicateId, f, "fiber id used more than once");
            }
        }
    }

    fn markers(&mut self) {
        let r = self.x.weights.len();
        for (i, w) in self.x.weights.entries().iter().enumerate() {
            if !w.in_unit_interval() {
                self.push(
                    ViolationKind::WeightRange,
                    format!("marker {}", i + 1),
                    format!("weight {w} outside [0, 1]"),
                );
            }
        }
        let mut count: BTreeMap<MarkerIndex, usize> = BTreeMap::new();
        for (_, f) in self.x.all_fibers() {
            for &m in &f.markers {
                *count.entry(m).or_default() += 1;
            }
        }
        for (&m, &n) in &count {
            if m.0 == 0 || m.0 > r {
                self.push(
                    ViolationKind::MarkerAssignment,
                    format!("marker {m}"),
                    format!("no weight for marker (r = {r})"),
                );
            } else if n > 1 {
                self.push(ViolationKind::MarkerAssignment, format!("marker {m}"), format!("carried by {n} fibers"));
            }
        }
        for i in 1..=r {
            if !count.contains_key(&MarkerIndex(i)) {
                self.push(ViolationKind::MarkerAssignment, format!("marker {i}"), "not carried by any fiber");
            }
        }
    }

    fn attachments(&mut self) {
        let x = self.x;
        let owners = x.elliptic.iter().map(|c| (&c.id, &c.attach)).chain(x.pseudo2.iter().map(|p| (&p.id, &p.attach)));
        for (id, attach) in owners {
            for a in attach {
                let at = format!("{id}/{}", a.id);
                if a.ftype == KodairaFiberType::N2 {
                    self.push(ViolationKind::UnsupportedType, &at, "attach fiber of type N2");
                }
                let Some(peer) = x.attach_of(&a.peer) else {
                    self.push(ViolationKind::Attachment, &at, format!("peer component {} does not exist", a.peer));
                    continue;
                };
                let back = peer.iter().find(|b| b.id == a.peer_fiber);
                match back {
                    Some(b) if &b.peer == id && b.peer_fiber == a.id => {}
                    Some(_) => self.push(ViolationKind::Attachment, &at, "peer fiber does not point back"),
                    None => self.push(ViolationKind::Attachment, &at, format!("peer fiber {} missing", a.peer_fiber)),
                }
            }
        }
    }

    fn connectivity(&mut self) {
        if self.x.elliptic.is_empty() {
            self.push(ViolationKind::Connectivity, "model", "no elliptic component");
            return;
        }
        let structural = [ViolationKind::DuplicateId, ViolationKind::MarkerAssignment, ViolationKind::Attachment];
        if !self.out.iter().any(|v| structural.contains(&v.kind)) {
            if let Err(e) = self.x.base_curve() {
                self.push(ViolationKind::Connectivity, "base curve", e.to_string());
            }
        }
        let contracted = self.x.elliptic.iter().filter(|c| c.section_contracted);
        for c in contracted {
            if self.x.elliptic.len() > 1 {
                self.push(ViolationKind::ContractedSection, &c.id, "section contracted on a reducible base");
            }
        }
    }

    fn line_bundles(&mut self) {
        let x = self.x;
        let mut degs: Vec<(&ComponentId, Rational)> = x.elliptic.iter().map(|c| (&c.id, c.deg_l)).collect();
        degs.extend(x.pseudo2.iter().map(|p| (&p.id, p.deg_l)));
        for t in &x.trees {
            t.root.walk(&mut |n| degs.push((&n.id, n.deg_l)));
        }
        for (id, d) in degs {
            if d < Rational::ZERO {
                self.push(ViolationKind::LineBundleDegree, id, format!("deg L = {d} is negative"));
            }
        }
    }

    fn type_ii(&mut self) {
        for p in &self.x.pseudo2 {
            if p.attach.len() != 2 {
                self.push(
                    ViolationKind::TypeIIComponent,
                    &p.id,
                    format!("{} attach fibers, expected 2", p.attach.len()),
                );
            }
            let mass: Rational = p.fibers.iter().map(|f| self.x.weights.sum_over(&f.markers)).sum();
            if !mass.is_zero() {
                self.push(
                    ViolationKind::TypeIIComponent,
                    &p.id,
                    format!("marker weight {mass} on a contracted section"),
                );
            }
        }
    }

    /// Checks one fiber. `hosted` is the marker set glued along it, if any.
    fn fiber(&mut self, owner: &ComponentId, f: &MarkedFiber, hosted: Option<BTreeSet<MarkerIndex>>) {
        let at = format!("{owner}/{}", f.id);
        let w = &self.x.weights;
        if f.markers.iter().any(|m| w.get(*m).is_none()) {
            return;
        }
        if f.ftype == KodairaFiberType::N2 {
            self.push(ViolationKind::UnsupportedType, &at, "fiber type N2 is not supported");
            return;
        }
        if f.is_host() {
            let Some(hosted) = hosted.filter(|h| !h.is_empty()) else {
                self.push(ViolationKind::HostFiber, &at, "fiber carries no markers and hosts no tree");
                return;
            };
            let sum = w.sum_over(&hosted);
            if f.coeff != sum {
                self.push(
                    ViolationKind::TreeCoefficient,
                    &at,
                    format!("coefficient {} differs from the tree weight {sum}", f.coeff),
                );
            }
            let Ok(Some(a0)) = lct_threshold(f.ftype) else {
                self.push(ViolationKind::HostFiber, &at, format!("type {} cannot host a tree", f.ftype));
                return;
            };
            if f.state != FiberModelState::Intermediate || sum < a0 || sum > Rational::ONE {
                self.push(
                    ViolationKind::FiberState,
                    &at,
                    format!("host fiber {:?} with tree weight {sum} (threshold {a0})", f.state),
                );
            }
            return;
        }
        let sum = w.sum_over(&f.markers);
        if f.coeff != sum {
            self.push(
                ViolationKind::Coefficient,
                &at,
                format!("coefficient {} differs from marker weight {sum}", f.coeff),
            );
        }
        match fiber_model_at(f.ftype, sum) {
            Err(e) => self.push(ViolationKind::FiberState, &at, e.to_string()),
            Ok(expected) => {
                // The intermediate model is also accepted at both ends of its
                // interval, as the limit of a crossing not yet applied.
                let at_threshold = lct_threshold(f.ftype).ok().flatten() == Some(sum);
                let limit =
                    f.state == FiberModelState::Intermediate && (expected == FiberModelState::Twisted || at_threshold);
                if f.state != expected && !limit {
                    self.push(
                        ViolationKind::FiberState,
                        &at,
                        format!("{:?} fiber of type {} at coefficient {sum}, expected {expected:?}", f.state, f.ftype),
                    );
                }
            }
        }
    }

    fn fibers(&mut self) {
        let x = self.x;
        let top = x.elliptic.iter().map(|c| (&c.id, &c.fibers)).chain(x.pseudo2.iter().map(|p| (&p.id, &p.fibers)));
        for (id, fibers) in top {
            for f in fibers {
                let hosted = f.is_host().then(|| x.tree_markers_at(id, &f.id));
                self.fiber(id, f, hosted);
            }
        }
        for t in &x.trees {
            match x.host_fiber_type(&t.host, &t.host_fiber) {
                None => self.push(
                    ViolationKind::HostFiber,
                    &t.root.id,
                    format!("host fiber {}/{} does not exist", t.host, t.host_fiber),
                ),
                Some(_) => {
                    let host_fibers = x
                        .elliptic_component(&t.host)
                        .map(|c| &c.fibers)
                        .or_else(|| x.pseudo2_component(&t.host).map(|p| &p.fibers));
                    let marked = host_fibers
                        .and_then(|fs| fs.iter().find(|f| f.id == t.host_fiber))
                        .is_some_and(|f| !f.is_host());
                    if marked {
                        self.push(ViolationKind::HostFiber, &t.root.id, "tree glued to a fiber that carries markers");
                    }
                }
            }
            self.tree_node(&t.root);
        }
    }

    fn tree_node(&mut self, n: &PseudoComponent) {
        for f in &n.fibers {
            let hosted = f.is_host().then(|| n.hosted_markers(&f.id));
            self.fiber(&n.id, f, hosted);
        }
        for c in &n.children {
            match n.fibers.iter().find(|f| f.id == c.via) {
                None => {
                    self.push(ViolationKind::HostFiber, &c.node.id, format!("parent fiber {} does not exist", c.via))
                }
                Some(f) if !f.is_host() => {
                    self.push(ViolationKind::HostFiber, &c.node.id, "subtree glued to a fiber that carries markers")
                }
                Some(_) => {}
            }
            self.tree_node(&c.node);
        }
    }
}

/// Every violated structural rule of the model, in a deterministic order.
/// An empty result means the model is valid.
pub fn validate(x: &BrokenEllipticSurface) -> Vec<Violation> {
    let mut c = Checker { x, out: Vec::new() };
    c.ids();
    c.markers();
    c.attachments();
    c.connectivity();
    c.line_bundles();
    c.type_ii();
    c.fibers();
    c.out
}
