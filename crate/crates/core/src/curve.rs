//! Weighted marked nodal curves and Hassett's reduction morphism.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// 1-based marker label.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarkerIndex(pub usize);

impl fmt::Display for MarkerIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for MarkerIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub String);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("weight {weight} for marker {index} lies outside [0, 1]")]
    WeightOutOfRange { index: MarkerIndex, weight: Rational },
    #[error("marker {0} has no weight")]
    MarkerOutOfRange(MarkerIndex),
    #[error("marker {0} appears more than once")]
    DuplicateMarker(MarkerIndex),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("dual graph is disconnected")]
    Disconnected,
    #[error("curve has no vertices")]
    Empty,
}

/// Weights `a_1, ..., a_r` indexed by 1-based [`MarkerIndex`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self, CurveError> {
        for (i, w) in entries.iter().enumerate() {
            if !w.in_unit_interval() {
                return Err(CurveError::WeightOutOfRange { index: MarkerIndex(i + 1), weight: *w });
            }
        }
        Ok(WeightVector(entries))
    }

    pub fn uniform(r: usize, w: Rational) -> Result<Self, CurveError> {
        Self::new(vec![w; r])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: MarkerIndex) -> Option<Rational> {
        i.0.checked_sub(1).and_then(|k| self.0.get(k)).copied()
    }

    /// Panics when `i` is out of range.
    pub fn at(&self, i: MarkerIndex) -> Rational {
        self.get(i).unwrap_or_else(|| panic!("marker {i} out of range"))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn indices(&self) -> impl Iterator<Item = MarkerIndex> {
        (1..=self.0.len()).map(MarkerIndex)
    }

    pub fn sum_over<'a>(&self, set: impl IntoIterator<Item = &'a MarkerIndex>) -> Rational {
        set.into_iter().map(|&i| self.at(i)).sum()
    }

    /// Entrywise `self <= other`.
    pub fn le(&self, other: &WeightVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `(1 - t) * a + t * b`.
    pub fn interpolate(a: &WeightVector, b: &WeightVector, t: Rational) -> WeightVector {
        assert_eq!(a.len(), b.len());
        WeightVector(a.0.iter().zip(&b.0).map(|(x, y)| *x + t * (*y - *x)).collect())
    }

    pub fn set(&mut self, i: MarkerIndex, w: Rational) -> Result<(), CurveError> {
        if !w.in_unit_interval() {
            return Err(CurveError::WeightOutOfRange { index: i, weight: w });
        }
        let slot = i.0.checked_sub(1).and_then(|k| self.0.get_mut(k)).ok_or(CurveError::MarkerOutOfRange(i))?;
        *slot = w;
        Ok(())
    }
}

impl TryFrom<Vec<Rational>> for WeightVector {
    type Error = CurveError;
    fn try_from(v: Vec<Rational>) -> Result<Self, Self::Error> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<Rational> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CurveVertex {
    pub id: VertexId,
    pub genus: u32,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Marker {
    pub index: MarkerIndex,
    pub vertex: VertexId,
}

#[derive(Deserialize)]
struct RawCurve {
    vertices: Vec<CurveVertex>,
    #[serde(default)]
    edges: Vec<(VertexId, VertexId)>,
    #[serde(default)]
    markers: Vec<Marker>,
    #[serde(default)]
    coincident: Vec<BTreeSet<MarkerIndex>>,
}

/// Connected nodal curve recorded as its dual graph, with markers placed on
/// vertices. `coincident` lists groups of markers that sit at one point
/// because a component carrying them was contracted.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct MarkedNodalCurve {
    vertices: Vec<CurveVertex>,
    edges: Vec<(VertexId, VertexId)>,
    markers: Vec<Marker>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    coincident: Vec<BTreeSet<MarkerIndex>>,
}

impl TryFrom<RawCurve> for MarkedNodalCurve {
    type Error = CurveError;
    fn try_from(r: RawCurve) -> Result<Self, Self::Error> {
        MarkedNodalCurve::with_coincident(r.vertices, r.edges, r.markers, r.coincident)
    }
}

impl MarkedNodalCurve {
    pub fn new(
        vertices: Vec<CurveVertex>,
        edges: Vec<(VertexId, VertexId)>,
        markers: Vec<Marker>,
    ) -> Result<Self, CurveError> {
        Self::with_coincident(vertices, edges, markers, Vec::new())
    }

    pub fn with_coincident(
        vertices: Vec<CurveVertex>,
        edges: Vec<(VertexId, VertexId)>,
        mut markers: Vec<Marker>,
        coincident: Vec<BTreeSet<MarkerIndex>>,
    ) -> Result<Self, CurveError> {
        if vertices.is_empty() {
            return Err(CurveError::Empty);
        }
        let mut ids = BTreeSet::new();
        for v in &vertices {
            if !ids.insert(&v.id) {
                return Err(CurveError::DuplicateVertex(v.id.clone()));
            }
        }
        for (a, b) in &edges {
            for x in [a, b] {
                if !ids.contains(x) {
                    return Err(CurveError::UnknownVertex(x.clone()));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for m in &markers {
            if !ids.contains(&m.vertex) {
                return Err(CurveError::UnknownVertex(m.vertex.clone()));
            }
            if !seen.insert(m.index) {
                return Err(CurveError::DuplicateMarker(m.index));
            }
        }
        for g in &coincident {
            if let Some(i) = g.iter().find(|i| !seen.contains(i)) {
                return Err(CurveError::MarkerOutOfRange(*i));
            }
        }
        markers.sort_by_key(|m| m.index);
        let mut coincident: Vec<_> = coincident.into_iter().filter(|g| g.len() >= 2).collect();
        coincident.sort();
        coincident.dedup();
        let curve = MarkedNodalCurve { vertices, edges, markers, coincident };
        if !curve.is_connected() {
            return Err(CurveError::Disconnected);
        }
        Ok(curve)
    }

    pub fn vertices(&self) -> &[CurveVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn markers(&self) -> &[Marker] {
        &self.markers
    }

    pub fn coincident(&self) -> &[BTreeSet<MarkerIndex>] {
        &self.coincident
    }

    pub fn vertex(&self, id: &VertexId) -> Option<&CurveVertex> {
        self.vertices.iter().find(|v| &v.id == id)
    }

    pub fn markers_on<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = MarkerIndex> + 'a {
        self.markers.iter().filter(move |m| &m.vertex == v).map(|m| m.index)
    }

    /// Number of half-edges at `v`; a self-loop counts twice.
    pub fn valence(&self, v: &VertexId) -> usize {
        self.edges.iter().map(|(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    fn is_connected(&self) -> bool {
        let mut adj: BTreeMap<&VertexId, Vec<&VertexId>> = BTreeMap::new();
        for (a, b) in &self.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![&self.vertices[0].id];
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                stack.extend(adj.get(v).into_iter().flatten().copied());
            }
        }
        seen.len() == self.vertices.len()
    }

    fn check_weights(&self, w: &WeightVector) -> Result<(), CurveError> {
        match self.markers.iter().find(|m| w.get(m.index).is_none()) {
            Some(m) => Err(CurveError::MarkerOutOfRange(m.index)),
            None => Ok(()),
        }
    }

    /// Removes edge `edge` between `v` and `u`, then merges `v` into `u`.
    pub(crate) fn contract_edge_into(&mut self, edge: usize, v: &VertexId, u: &VertexId) {
        self.edges.remove(edge);
        self.merge_vertex(v, u);
    }

    /// Removes `v`, moving its edges, genus and markers onto `u`.
    pub(crate) fn merge_vertex(&mut self, v: &VertexId, u: &VertexId) {
        let genus = self.vertex(v).map_or(0, |x| x.genus);
        if let Some(x) = self.vertices.iter_mut().find(|x| &x.id == u) {
            x.genus += genus;
        }
        for (a, b) in &mut self.edges {
            if a == v {
                *a = u.clone();
            }
            if b == v {
                *b = u.clone();
            }
        }
        let moved: BTreeSet<MarkerIndex> = self.markers_on(v).collect();
        for m in &mut self.markers {
            if &m.vertex == v {
                m.vertex = u.clone();
            }
        }
        if moved.len() >= 2 {
            self.coincident.retain(|g| !g.is_subset(&moved));
            self.coincident.push(moved);
            self.coincident.sort();
        }
        self.vertices.retain(|x| &x.id != v);
    }

    /// Isomorphism of marked dual graphs: vertex ids may be relabelled,
    /// marker labels, genera, edges and coincident groups must agree.
    pub fn is_isomorphic(&self, other: &MarkedNodalCurve) -> bool {
        if self.vertices.len() != other.vertices.len()
            || self.edges.len() != other.edges.len()
            || self.coincident != other.coincident
        {
            return false;
        }
        let sig = |c: &MarkedNodalCurve, v: &VertexId| {
            let loops = c.edges.iter().filter(|(a, b)| a == v && b == v).count();
            (c.vertex(v).map(|x| x.genus), c.valence(v), loops, c.markers_on(v).collect::<Vec<_>>())
        };
        let left: Vec<&VertexId> = self.vertices.iter().map(|v| &v.id).collect();
        let right: Vec<&VertexId> = other.vertices.iter().map(|v| &v.id).collect();
        let left_sig: Vec<_> = left.iter().map(|v| sig(self, v)).collect();
        let right_sig: Vec<_> = right.iter().map(|v| sig(other, v)).collect();
        let mut image = vec![usize::MAX; left.len()];
        let mut used = vec![false; right.len()];
        let edges_of = |c: &MarkedNodalCurve, idx: &BTreeMap<&VertexId, usize>| {
            let mut e: Vec<(usize, usize)> = c
                .edges
                .iter()
                .map(|(a, b)| {
                    let (x, y) = (idx[a], idx[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            e.sort();
            e
        };
        let right_idx: BTreeMap<&VertexId, usize> = right.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let right_edges = edges_of(other, &right_idx);
        let left_edges: Vec<(usize, usize)> = {
            let idx: BTreeMap<&VertexId, usize> = left.iter().enumerate().map(|(i, v)| (*v, i)).collect();
            edges_of(self, &idx)
        };

        fn search(
            k: usize,
            image: &mut Vec<usize>,
            used: &mut Vec<bool>,
            compatible: &dyn Fn(usize, usize) -> bool,
            finish: &dyn Fn(&[usize]) -> bool,
        ) -> bool {
            if k == image.len() {
                return finish(image);
            }
            for j in 0..used.len() {
                if !used[j] && compatible(k, j) {
                    used[j] = true;
                    image[k] = j;
                    if search(k + 1, image, used, compatible, finish) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            false
        }
        let compatible = |i: usize, j: usize| left_sig[i] == right_sig[j];
        let finish = |img: &[usize]| {
            let mut mapped: Vec<(usize, usize)> = left_edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (img[a], img[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            mapped.sort();
            mapped == right_edges
        };
        search(0, &mut image, &mut used, &compatible, &finish)
    }
}

/// `2g - 2 + valence + sum of weights` at `v`.
pub fn component_degree(c: &MarkedNodalCurve, v: &VertexId, w: &WeightVector) -> Result<Rational, CurveError> {
    let vertex = c.vertex(v).ok_or_else(|| CurveError::UnknownVertex(v.clone()))?;
    c.check_weights(w)?;
    let sum: Rational = c.markers_on(v).map(|i| w.at(i)).sum();
    Ok(Rational::int(2 * vertex.genus as i128 - 2 + c.valence(v) as i128) + sum)
}

/// Positive degree everywhere, positive weights, and every coincident group
/// of total weight at most one.
pub fn is_hassett_stable(c: &MarkedNodalCurve, w: &WeightVector) -> Result<bool, CurveError> {
    c.check_weights(w)?;
    if c.markers.iter().any(|m| w.at(m.index) <= Rational::ZERO) {
        return Ok(false);
    }
    if c.coincident.iter().any(|g| w.sum_over(g) > Rational::ONE) {
        return Ok(false);
    }
    for v in &c.vertices {
        if component_degree(c, &v.id, w)? <= Rational::ZERO {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Repeatedly contracts the lowest-id vertex of non-positive degree into a
/// neighbour along its lowest-index non-loop edge. Stops when the curve is
/// stable or a single vertex remains.
pub fn hassett_reduce(c: &MarkedNodalCurve, w: &WeightVector) -> Result<MarkedNodalCurve, CurveError> {
    c.check_weights(w)?;
    let mut cur = c.clone();
    while cur.vertices.len() > 1 {
        let mut ids: Vec<VertexId> = cur.vertices.iter().map(|v| v.id.clone()).collect();
        ids.sort();
        let mut target = None;
        for v in ids {
            if component_degree(&cur, &v, w)? <= Rational::ZERO {
                if let Some(e) = cur.edges.iter().position(|(a, b)| (*a == v) != (*b == v)) {
                    target = Some((v, e));
                    break;
                }
            }
        }
        let Some((v, e)) = target else { break };
        let (a, b) = cur.edges.remove(e);
        let u = if a == v { b } else { a };
        cur.merge_vertex(&v, &u);
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn vid(s: &str) -> VertexId {
        VertexId(s.to_string())
    }

    fn chain(markers: &[(usize, &str)]) -> MarkedNodalCurve {
        MarkedNodalCurve::new(
            vec![CurveVertex { id: vid("a"), genus: 0 }, CurveVertex { id: vid("b"), genus: 0 }],
            vec![(vid("a"), vid("b"))],
            markers.iter().map(|&(i, v)| Marker { index: MarkerIndex(i), vertex: vid(v) }).collect(),
        )
        .unwrap()
    }

    fn twelve_point_chain() -> MarkedNodalCurve {
        let mut m: Vec<(usize, &str)> = (1..=10).map(|i| (i, "a")).collect();
        m.push((11, "b"));
        m.push((12, "b"));
        chain(&m)
    }

    fn twelve_weights(alpha: Rational) -> WeightVector {
        let mut v = vec![Rational::ONE; 10];
        v.extend([alpha, alpha]);
        WeightVector::new(v).unwrap()
    }

    #[test]
    fn degrees_on_chain() {
        let c = twelve_point_chain();
        let w = twelve_weights(q(1, 2));
        assert_eq!(component_degree(&c, &vid("a"), &w).unwrap(), Rational::int(9));
        assert_eq!(component_degree(&c, &vid("b"), &w).unwrap(), Rational::ZERO);
        assert!(!is_hassett_stable(&c, &w).unwrap());
        assert!(is_hassett_stable(&c, &twelve_weights(q(3, 5))).unwrap());
    }

    #[test]
    fn reduce_contracts_light_tail() {
        let c = twelve_point_chain();
        let r = hassett_reduce(&c, &twelve_weights(q(1, 2))).unwrap();
        assert_eq!(r.vertices().len(), 1);
        assert_eq!(r.markers().len(), 12);
        assert_eq!(r.coincident(), &[BTreeSet::from([MarkerIndex(11), MarkerIndex(12)])]);
        assert!(is_hassett_stable(&r, &twelve_weights(q(1, 2))).unwrap());
        let kept = hassett_reduce(&c, &twelve_weights(q(3, 4))).unwrap();
        assert_eq!(kept, c);
    }

    #[test]
    fn coincident_group_caps_weight() {
        let r = hassett_reduce(&twelve_point_chain(), &twelve_weights(q(1, 2))).unwrap();
        let mut w = twelve_weights(q(1, 2));
        w.set(MarkerIndex(11), q(2, 3)).unwrap();
        assert!(!is_hassett_stable(&r, &w).unwrap());
    }

    #[test]
    fn rejects_malformed() {
        let err = MarkedNodalCurve::new(
            vec![CurveVertex { id: vid("a"), genus: 0 }, CurveVertex { id: vid("b"), genus: 0 }],
            vec![],
            vec![],
        );
        assert_eq!(err, Err(CurveError::Disconnected));
        let c = chain(&[(1, "a"), (5, "b")]);
        let w = WeightVector::new(vec![Rational::ONE; 3]).unwrap();
        assert_eq!(component_degree(&c, &vid("a"), &w), Err(CurveError::MarkerOutOfRange(MarkerIndex(5))));
        assert!(WeightVector::new(vec![q(3, 2)]).is_err());
    }

    #[test]
    fn self_loop_counts_twice() {
        let c = MarkedNodalCurve::new(
            vec![CurveVertex { id: vid("a"), genus: 0 }],
            vec![(vid("a"), vid("a"))],
            vec![Marker { index: MarkerIndex(1), vertex: vid("a") }],
        )
        .unwrap();
        assert_eq!(c.valence(&vid("a")), 2);
        let w = WeightVector::new(vec![q(1, 3)]).unwrap();
        assert_eq!(component_degree(&c, &vid("a"), &w).unwrap(), q(1, 3));
    }

    #[test]
    fn json_shape() {
        let c = chain(&[(1, "a"), (2, "b")]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"vertices":[{"id":"a","genus":0},{"id":"b","genus":0}],"edges":[["a","b"]],"markers":[{"index":1,"vertex":"a"},{"index":2,"vertex":"b"}]}"#
        );
        let back: MarkedNodalCurve = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    /// A random tree-shaped curve with `n` vertices and markers spread over them.
    fn arb_curve() -> impl Strategy<Value = (MarkedNodalCurve, WeightVector)> {
        (1usize..6, 1usize..9).prop_flat_map(|(n, r)| {
            (
                Just(n),
                proptest::collection::vec(0usize..100, n),
                proptest::collection::vec(0u32..2, n),
                proptest::collection::vec(0usize..n, r),
                proptest::collection::vec(1i128..=12, r),
            )
                .prop_map(|(n, parents, genera, places, nums)| {
                    let ids: Vec<VertexId> = (0..n).map(|i| VertexId(format!("v{i}"))).collect();
                    let vertices =
                        ids.iter().zip(&genera).map(|(id, &g)| CurveVertex { id: id.clone(), genus: g }).collect();
                    let edges = (1..n).map(|i| (ids[parents[i] % i].clone(), ids[i].clone())).collect();
                    let markers = places
                        .iter()
                        .enumerate()
                        .map(|(k, &p)| Marker { index: MarkerIndex(k + 1), vertex: ids[p].clone() })
                        .collect();
                    let w = WeightVector::new(nums.iter().map(|&x| q(x, 12)).collect()).unwrap();
                    (MarkedNodalCurve::new(vertices, edges, markers).unwrap(), w)
                })
        })
    }

    proptest! {
        #[test]
        fn reduction_is_stable_or_irreducible((c, w) in arb_curve()) {
            let r = hassett_reduce(&c, &w).unwrap();
            prop_assert!(is_hassett_stable(&r, &w).unwrap() || r.vertices().len() == 1);
            prop_assert_eq!(r.markers().len(), c.markers().len());
            let genus = |x: &MarkedNodalCurve| {
                let g: u32 = x.vertices().iter().map(|v| v.genus).sum();
                g as i64 + x.edges().len() as i64 - x.vertices().len() as i64
            };
            prop_assert_eq!(genus(&r), genus(&c));
        }

        #[test]
        fn reduction_is_idempotent((c, w) in arb_curve()) {
            let r = hassett_reduce(&c, &w).unwrap();
            let rr = hassett_reduce(&r, &w).unwrap();
            prop_assert_eq!(rr, r);
        }

        #[test]
        fn stable_curves_are_fixed((c, w) in arb_curve()) {
            if is_hassett_stable(&c, &w).unwrap() {
                prop_assert_eq!(hassett_reduce(&c, &w).unwrap(), c);
            }
        }

        #[test]
        fn isomorphism_survives_relabelling((c, w) in arb_curve(), shift in 0usize..7) {
            // Rename vertices by rotating their ids; the result must be isomorphic.
            let n = c.vertices().len();
            let rename = |v: &VertexId| {
                let k: usize = v.0[1..].parse().unwrap();
                VertexId(format!("u{}", (k + shift) % n))
            };
            let d = MarkedNodalCurve::new(
                c.vertices().iter().rev().map(|v| CurveVertex { id: rename(&v.id), genus: v.genus }).collect(),
                c.edges().iter().rev().map(|(a, b)| (rename(b), rename(a))).collect(),
                c.markers().iter().map(|m| Marker { index: m.index, vertex: rename(&m.vertex) }).collect(),
            ).unwrap();
            prop_assert!(c.is_isomorphic(&d));
            let (rc, rd) = (hassett_reduce(&c, &w).unwrap(), hassett_reduce(&d, &w).unwrap());
            if is_hassett_stable(&rc, &w).unwrap() {
                prop_assert!(rc.is_isomorphic(&rd));
            }
        }
    }
}
