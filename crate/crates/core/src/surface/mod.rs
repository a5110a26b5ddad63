//! Broken elliptic surfaces: elliptic components glued along twisted fibers,
//! type II pseudoelliptic components sitting over nodes of the base, and
//! trees of pseudoelliptic components attached to intermediate fibers.
//!
//! Fiber coefficients are cached on each [`MarkedFiber`] and recomputed from
//! the weight vector by [`BrokenEllipticSurface::refresh_coefficients`]. The
//! base curve is never stored; [`BrokenEllipticSurface::base_curve`] derives it.

mod validate;
mod volume;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::{
    component_degree, CurveError, CurveVertex, MarkedNodalCurve, Marker, MarkerIndex, VertexId, WeightVector,
};
use crate::fiber::{lct_threshold, FiberError, FiberModelState, KodairaFiberType};
use crate::rational::Rational;

pub use validate::{validate, Violation, ViolationKind};
pub use volume::volume;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComponentId(pub String);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiberId(pub String);

macro_rules! string_id {
    ($t:ident) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                $t(s.to_string())
            }
        }
    };
}

string_id!(ComponentId);
string_id!(FiberId);

impl From<&ComponentId> for VertexId {
    fn from(c: &ComponentId) -> Self {
        VertexId(c.0.clone())
    }
}

/// A fiber carrying markers, or (with no markers) an intermediate fiber that
/// hosts pseudoelliptic trees and whose coefficient is their total weight.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkedFiber {
    pub id: FiberId,
    pub ftype: KodairaFiberType,
    pub coeff: Rational,
    pub state: FiberModelState,
    pub markers: BTreeSet<MarkerIndex>,
    /// Set when a tree collapsed onto this fiber while on a boundary wall.
    pub non_minimal_cusp: bool,
}

impl MarkedFiber {
    /// A single-marker fiber in the model its coefficient dictates.
    pub fn marked(id: &str, ftype: KodairaFiberType, marker: usize, weight: Rational) -> Result<Self, FiberError> {
        Ok(MarkedFiber {
            id: FiberId::from(id),
            ftype,
            coeff: weight,
            state: crate::fiber::fiber_model_at(ftype, weight)?,
            markers: BTreeSet::from([MarkerIndex(marker)]),
            non_minimal_cusp: false,
        })
    }

    pub fn is_host(&self) -> bool {
        self.markers.is_empty()
    }
}

/// Coefficient-one fiber glued to `peer_fiber` on component `peer`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AttachFiber {
    pub id: FiberId,
    pub ftype: KodairaFiberType,
    pub peer: ComponentId,
    pub peer_fiber: FiberId,
}

impl AttachFiber {
    /// Twisted for types with a threshold, Weierstrass for stable types.
    pub fn state(&self) -> FiberModelState {
        match lct_threshold(self.ftype) {
            Ok(Some(_)) => FiberModelState::Twisted,
            _ => FiberModelState::Weierstrass,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EllipticComponent {
    pub id: ComponentId,
    pub genus: u32,
    pub deg_l: Rational,
    pub isotrivial_jinf: bool,
    pub section_contracted: bool,
    pub fibers: Vec<MarkedFiber>,
    pub attach: Vec<AttachFiber>,
}

/// Rational component whose section has been contracted to a point of the
/// double locus; it sits over a node of the base curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeIIPseudo {
    pub id: ComponentId,
    pub deg_l: Rational,
    pub isotrivial_jinf: bool,
    pub fibers: Vec<MarkedFiber>,
    pub attach: Vec<AttachFiber>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PseudoComponent {
    pub id: ComponentId,
    pub deg_l: Rational,
    pub isotrivial_jinf: bool,
    pub fibers: Vec<MarkedFiber>,
    pub children: Vec<TreeChild>,
}

/// Subtree glued to the host pseudofiber `via` of its parent node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeChild {
    pub via: FiberId,
    pub node: PseudoComponent,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PseudoTreeAttachment {
    pub host: ComponentId,
    pub host_fiber: FiberId,
    pub root: PseudoComponent,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BrokenEllipticSurface {
    pub elliptic: Vec<EllipticComponent>,
    pub pseudo2: Vec<TypeIIPseudo>,
    pub trees: Vec<PseudoTreeAttachment>,
    pub weights: WeightVector,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("{0} has no section")]
    NoSection(ComponentId),
    #[error("unknown component {0}")]
    UnknownComponent(ComponentId),
    #[error("no pseudoelliptic tree rooted at {0}")]
    UnknownTree(ComponentId),
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum PseudoFate {
    Big,
    ContractToPoint,
    ContractToCurve,
}

impl PseudoComponent {
    /// Every marker in this node and its descendants.
    pub fn markers(&self) -> BTreeSet<MarkerIndex> {
        let mut out = BTreeSet::new();
        self.collect_markers(&mut out);
        out
    }

    fn collect_markers(&self, out: &mut BTreeSet<MarkerIndex>) {
        for f in &self.fibers {
            out.extend(f.markers.iter().copied());
        }
        for c in &self.children {
            c.node.collect_markers(out);
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node.node_count()).sum::<usize>()
    }

    /// Markers of the children glued along `via`.
    pub fn hosted_markers(&self, via: &FiberId) -> BTreeSet<MarkerIndex> {
        self.children.iter().filter(|c| &c.via == via).flat_map(|c| c.node.markers()).collect()
    }

    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a PseudoComponent)) {
        f(self);
        for c in &self.children {
            c.node.walk(f);
        }
    }

    pub fn walk_mut(&mut self, f: &mut dyn FnMut(&mut PseudoComponent)) {
        f(self);
        for c in &mut self.children {
            c.node.walk_mut(f);
        }
    }

    fn refresh(&mut self, w: &WeightVector) {
        for c in &mut self.children {
            c.node.refresh(w);
        }
        for i in 0..self.fibers.len() {
            let coeff = if self.fibers[i].is_host() {
                let via = self.fibers[i].id.clone();
                self.children.iter().filter(|c| c.via == via).map(|c| w.sum_over(&c.node.markers())).sum()
            } else {
                w.sum_over(&self.fibers[i].markers)
            };
            self.fibers[i].coeff = coeff;
        }
    }

    fn normalize(&mut self) {
        self.fibers.sort_by(|a, b| a.id.cmp(&b.id));
        for c in &mut self.children {
            c.node.normalize();
        }
        self.children.sort_by(|a, b| (&a.via, &a.node.id).cmp(&(&b.via, &b.node.id)));
    }
}

impl BrokenEllipticSurface {
    pub fn elliptic_component(&self, id: &ComponentId) -> Option<&EllipticComponent> {
        self.elliptic.iter().find(|c| &c.id == id)
    }

    pub fn pseudo2_component(&self, id: &ComponentId) -> Option<&TypeIIPseudo> {
        self.pseudo2.iter().find(|c| &c.id == id)
    }

    /// Attach fibers of the elliptic or type II component `id`.
    pub fn attach_of(&self, id: &ComponentId) -> Option<&[AttachFiber]> {
        self.elliptic_component(id)
            .map(|c| c.attach.as_slice())
            .or_else(|| self.pseudo2_component(id).map(|p| p.attach.as_slice()))
    }

    /// Markers of the trees glued to `fiber` on the top-level component `host`.
    pub fn tree_markers_at(&self, host: &ComponentId, fiber: &FiberId) -> BTreeSet<MarkerIndex> {
        self.trees.iter().filter(|t| &t.host == host && &t.host_fiber == fiber).flat_map(|t| t.root.markers()).collect()
    }

    /// Markers carried by fibers of `id` and by the trees it hosts.
    pub fn markers_at_component(&self, id: &ComponentId) -> BTreeSet<MarkerIndex> {
        let fibers = self
            .elliptic_component(id)
            .map(|c| c.fibers.as_slice())
            .or_else(|| self.pseudo2_component(id).map(|p| p.fibers.as_slice()))
            .unwrap_or(&[]);
        let mut out: BTreeSet<MarkerIndex> = fibers.iter().flat_map(|f| f.markers.iter().copied()).collect();
        for t in self.trees.iter().filter(|t| &t.host == id) {
            out.extend(t.root.markers());
        }
        out
    }

    pub fn pseudo_node_count(&self) -> usize {
        self.trees.iter().map(|t| t.root.node_count()).sum()
    }

    /// Recomputes every cached coefficient from the current weights.
    pub fn refresh_coefficients(&mut self) {
        let w = self.weights.clone();
        for t in &mut self.trees {
            t.root.refresh(&w);
        }
        let hosted: Vec<(ComponentId, FiberId, Rational)> =
            self.trees.iter().map(|t| (t.host.clone(), t.host_fiber.clone(), w.sum_over(&t.root.markers()))).collect();
        let refresh = |owner: &ComponentId, fibers: &mut [MarkedFiber]| {
            for f in fibers {
                f.coeff = if f.is_host() {
                    hosted.iter().filter(|(h, hf, _)| h == owner && hf == &f.id).map(|x| x.2).sum()
                } else {
                    w.sum_over(&f.markers)
                };
            }
        };
        for c in &mut self.elliptic {
            refresh(&c.id, &mut c.fibers);
        }
        for p in &mut self.pseudo2 {
            refresh(&p.id, &mut p.fibers);
        }
    }

    /// Same model with weights replaced and coefficients refreshed; states untouched.
    pub fn reweighted(&self, w: WeightVector) -> Self {
        let mut x = self.clone();
        x.weights = w;
        x.refresh_coefficients();
        x
    }

    /// Canonical ordering of every list, so equal models compare equal.
    pub fn normalized(&self) -> Self {
        let mut x = self.clone();
        x.elliptic.sort_by(|a, b| a.id.cmp(&b.id));
        for c in &mut x.elliptic {
            c.fibers.sort_by(|a, b| a.id.cmp(&b.id));
            c.attach.sort_by(|a, b| a.id.cmp(&b.id));
        }
        x.pseudo2.sort_by(|a, b| a.id.cmp(&b.id));
        for p in &mut x.pseudo2 {
            p.fibers.sort_by(|a, b| a.id.cmp(&b.id));
            p.attach.sort_by(|a, b| a.id.cmp(&b.id));
        }
        for t in &mut x.trees {
            t.root.normalize();
        }
        x.trees.sort_by(|a, b| (&a.host, &a.host_fiber, &a.root.id).cmp(&(&b.host, &b.host_fiber, &b.root.id)));
        x
    }

    /// Equality of the combinatorial model: components, gluing, trees, fiber
    /// types and states. Coefficients and weights are ignored.
    pub fn same_shape(&self, other: &BrokenEllipticSurface) -> bool {
        let strip = |x: &BrokenEllipticSurface| {
            let mut n = x.normalized();
            let zero = |fs: &mut Vec<MarkedFiber>| fs.iter_mut().for_each(|f| f.coeff = Rational::ZERO);
            n.elliptic.iter_mut().for_each(|c| zero(&mut c.fibers));
            n.pseudo2.iter_mut().for_each(|p| zero(&mut p.fibers));
            n.trees.iter_mut().for_each(|t| t.root.walk_mut(&mut |node| zero(&mut node.fibers)));
            n.weights = WeightVector::new(Vec::new()).expect("empty weights");
            n
        };
        strip(self) == strip(other)
    }

    /// Dual graph of the base curve. Vertices are elliptic components; type II
    /// components are contracted into their lowest-id neighbour; tree markers
    /// sit on the host's vertex at one point.
    pub fn base_curve(&self) -> Result<MarkedNodalCurve, SurfaceError> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut markers = Vec::new();
        let mut coincident = Vec::new();
        let mut add = |id: &ComponentId, genus: u32, fibers: &[MarkedFiber], attach: &[AttachFiber]| {
            let v = VertexId::from(id);
            vertices.push(CurveVertex { id: v.clone(), genus });
            for a in attach {
                if (id, &a.id) <= (&a.peer, &a.peer_fiber) {
                    edges.push((v.clone(), VertexId::from(&a.peer)));
                }
            }
            for f in fibers {
                for &m in &f.markers {
                    markers.push(Marker { index: m, vertex: v.clone() });
                }
                if f.markers.len() >= 2 {
                    coincident.push(f.markers.clone());
                }
                if f.is_host() {
                    let tm = self.tree_markers_at(id, &f.id);
                    for &m in &tm {
                        markers.push(Marker { index: m, vertex: v.clone() });
                    }
                    coincident.push(tm);
                }
            }
        };
        for c in &self.elliptic {
            add(&c.id, c.genus, &c.fibers, &c.attach);
        }
        for p in &self.pseudo2 {
            add(&p.id, 0, &p.fibers, &p.attach);
        }
        let mut curve = MarkedNodalCurve::with_coincident(vertices, edges, markers, coincident)?;
        let mut order: Vec<&ComponentId> = self.pseudo2.iter().map(|p| &p.id).collect();
        order.sort();
        for p in order {
            let v = VertexId::from(p);
            let neighbour = curve
                .edges()
                .iter()
                .filter_map(|(a, b)| match (a == &v, b == &v) {
                    (true, false) => Some(b.clone()),
                    (false, true) => Some(a.clone()),
                    _ => None,
                })
                .min();
            match neighbour {
                Some(u) => {
                    let e = curve
                        .edges()
                        .iter()
                        .position(|(a, b)| (a == &v && b == &u) || (a == &u && b == &v))
                        .expect("edge to neighbour");
                    curve.contract_edge_into(e, &v, &u);
                }
                None => {
                    return Err(SurfaceError::UnsupportedConfiguration(format!(
                        "type II component {p} has no neighbour"
                    )))
                }
            }
        }
        Ok(curve)
    }

    /// Base-curve degree of the vertex of elliptic component `c`.
    pub fn section_degree(&self, c: &ComponentId) -> Result<Rational, SurfaceError> {
        if self.elliptic_component(c).is_none() {
            let known = self.pseudo2_component(c).is_some()
                || self.trees.iter().any(|t| {
                    let mut hit = false;
                    t.root.walk(&mut |n| hit |= &n.id == c);
                    hit
                });
            return Err(if known {
                SurfaceError::NoSection(c.clone())
            } else {
                SurfaceError::UnknownComponent(c.clone())
            });
        }
        let curve = self.base_curve()?;
        Ok(component_degree(&curve, &VertexId::from(c), &self.weights)?)
    }

    pub fn should_contract_section(&self, c: &ComponentId) -> Result<bool, SurfaceError> {
        Ok(self.section_degree(c)? <= Rational::ZERO)
    }

    /// Whether the tree rooted at `root` stays big, or contracts to a point or
    /// a curve, at the current weights.
    pub fn pseudo_fate(&self, root: &ComponentId) -> Result<PseudoFate, SurfaceError> {
        let t =
            self.trees.iter().find(|t| &t.root.id == root).ok_or_else(|| SurfaceError::UnknownTree(root.clone()))?;
        let sum = self.weights.sum_over(&self.tree_markers_at(&t.host, &t.host_fiber));
        let host_type = self
            .host_fiber_type(&t.host, &t.host_fiber)
            .ok_or_else(|| SurfaceError::UnknownComponent(t.host.clone()))?;
        let c = lct_threshold(host_type)?.ok_or_else(|| {
            SurfaceError::UnsupportedConfiguration(format!("host fiber of type {host_type} has no threshold"))
        })?;
        Ok(if sum > c {
            PseudoFate::Big
        } else if t.root.isotrivial_jinf && t.root.deg_l.is_zero() {
            PseudoFate::ContractToCurve
        } else {
            PseudoFate::ContractToPoint
        })
    }

    pub(crate) fn host_fiber_type(&self, host: &ComponentId, fiber: &FiberId) -> Option<KodairaFiberType> {
        let fibers = self
            .elliptic_component(host)
            .map(|c| c.fibers.as_slice())
            .or_else(|| self.pseudo2_component(host).map(|p| p.fibers.as_slice()))?;
        fibers.iter().find(|f| &f.id == fiber).map(|f| f.ftype)
    }

    /// Every marked fiber with the id of the component carrying it.
    pub fn all_fibers(&self) -> Vec<(&ComponentId, &MarkedFiber)> {
        let mut out = Vec::new();
        for c in &self.elliptic {
            out.extend(c.fibers.iter().map(|f| (&c.id, f)));
        }
        for p in &self.pseudo2 {
            out.extend(p.fibers.iter().map(|f| (&p.id, f)));
        }
        for t in &self.trees {
            collect_tree_fibers(&t.root, &mut out);
        }
        out
    }
}

impl BrokenEllipticSurface {
    /// Visits every marked fiber mutably, with the id of the component carrying it.
    pub fn for_each_fiber_mut(&mut self, f: &mut dyn FnMut(&ComponentId, &mut MarkedFiber)) {
        for c in &mut self.elliptic {
            c.fibers.iter_mut().for_each(|x| f(&c.id, x));
        }
        for p in &mut self.pseudo2 {
            p.fibers.iter_mut().for_each(|x| f(&p.id, x));
        }
        for t in &mut self.trees {
            t.root.walk_mut(&mut |n| {
                let id = n.id.clone();
                n.fibers.iter_mut().for_each(|x| f(&id, x));
            });
        }
    }
}

fn collect_tree_fibers<'a>(n: &'a PseudoComponent, out: &mut Vec<(&'a ComponentId, &'a MarkedFiber)>) {
    out.extend(n.fibers.iter().map(|f| (&n.id, f)));
    for c in &n.children {
        collect_tree_fibers(&c.node, out);
    }
}

#[cfg(test)]
mod tests;
