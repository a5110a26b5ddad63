//! JSON documents for models, curves, weights, walls and traces.
//!
//! Rationals are written as `"p/q"` strings in lowest terms, fiber types by
//! name (`"I3"`, `"I*0"`, `"II*"`, ...). On input, fiber `coeff` and `state`
//! may be omitted and are then derived from the weights.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curve::{CurveError, MarkedNodalCurve, MarkerIndex, WeightVector};
use crate::fiber::{fiber_model_at, FiberModelState, KodairaFiberType};
use crate::rational::Rational;
use crate::reduction::{ReductionTrace, TransformationRecord};
use crate::surface::{
    validate, AttachFiber, BrokenEllipticSurface, ComponentId, EllipticComponent, FiberId, MarkedFiber,
    PseudoComponent, PseudoTreeAttachment, TreeChild, TypeIIPseudo, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    MalformedJson { line: usize, column: usize, message: String },
    #[error("schema violation at {field}: {reason}")]
    SchemaViolation { field: String, reason: String },
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    ModelInvalid(Vec<Violation>),
}

fn json_error(e: serde_json::Error) -> ParseError {
    use serde_json::error::Category;
    match e.classify() {
        Category::Syntax | Category::Eof | Category::Io => {
            ParseError::MalformedJson { line: e.line(), column: e.column(), message: e.to_string() }
        }
        Category::Data => ParseError::SchemaViolation {
            field: format!("line {}, column {}", e.line(), e.column()),
            reason: e.to_string(),
        },
    }
}

fn schema(field: impl Into<String>, reason: impl Into<String>) -> ParseError {
    ParseError::SchemaViolation { field: field.into(), reason: reason.into() }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberDoc {
    id: String,
    #[serde(rename = "type")]
    ftype: KodairaFiberType,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    markers: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeff: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state: Option<FiberModelState>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    non_minimal_cusp: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttachDoc {
    id: String,
    #[serde(rename = "type")]
    ftype: KodairaFiberType,
    peer: String,
    peer_fiber: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    id: String,
    #[serde(default)]
    genus: u32,
    #[serde(rename = "degL")]
    deg_l: Rational,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    isotrivial_jinf: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    section_contracted: bool,
    #[serde(default)]
    fibers: Vec<FiberDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    attach: Vec<AttachDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Pseudo2Doc {
    id: String,
    #[serde(rename = "degL")]
    deg_l: Rational,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    isotrivial_jinf: bool,
    #[serde(default)]
    fibers: Vec<FiberDoc>,
    attach: Vec<AttachDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    #[serde(rename = "degL")]
    deg_l: Rational,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    isotrivial_jinf: bool,
    #[serde(default)]
    fibers: Vec<FiberDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<ChildDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChildDoc {
    via: String,
    node: NodeDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    host: String,
    host_fiber: String,
    root: NodeDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceDoc {
    weights: Vec<Rational>,
    components: Vec<ComponentDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pseudo2: Vec<Pseudo2Doc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    trees: Vec<TreeDoc>,
}

type Given = BTreeMap<(String, String), (Option<Rational>, Option<FiberModelState>)>;

fn fiber_from_doc(owner: &str, d: FiberDoc, given: &mut Given) -> Result<MarkedFiber, ParseError> {
    if let Some(c) = d.coeff {
        if !c.in_unit_interval() {
            return Err(schema(format!("{owner}/{}.coeff", d.id), format!("coefficient {c} outside [0, 1]")));
        }
    }
    let markers: BTreeSet<MarkerIndex> = d.markers.iter().map(|&m| MarkerIndex(m)).collect();
    if markers.len() != d.markers.len() {
        return Err(schema(format!("{owner}/{}.markers", d.id), "repeated marker"));
    }
    given.insert((owner.to_string(), d.id.clone()), (d.coeff, d.state));
    Ok(MarkedFiber {
        id: FiberId(d.id),
        ftype: d.ftype,
        coeff: Rational::ZERO,
        state: FiberModelState::Weierstrass,
        markers,
        non_minimal_cusp: d.non_minimal_cusp,
    })
}

fn attach_from_doc(d: AttachDoc) -> AttachFiber {
    AttachFiber { id: FiberId(d.id), ftype: d.ftype, peer: ComponentId(d.peer), peer_fiber: FiberId(d.peer_fiber) }
}

fn node_from_doc(d: NodeDoc, given: &mut Given) -> Result<PseudoComponent, ParseError> {
    let fibers = d.fibers.into_iter().map(|f| fiber_from_doc(&d.id, f, given)).collect::<Result<_, _>>()?;
    let children = d
        .children
        .into_iter()
        .map(|c| Ok(TreeChild { via: FiberId(c.via), node: node_from_doc(c.node, given)? }))
        .collect::<Result<_, ParseError>>()?;
    Ok(PseudoComponent { id: ComponentId(d.id), deg_l: d.deg_l, isotrivial_jinf: d.isotrivial_jinf, fibers, children })
}

/// Parses a model without validating it. Missing coefficients and states are derived.
pub fn parse_model_unchecked(text: &str) -> Result<BrokenEllipticSurface, ParseError> {
    let doc: SurfaceDoc = serde_json::from_str(text).map_err(json_error)?;
    for (i, w) in doc.weights.iter().enumerate() {
        if !w.in_unit_interval() {
            return Err(schema(format!("weights[{i}]"), format!("weight {w} outside [0, 1]")));
        }
    }
    let weights = WeightVector::new(doc.weights).expect("checked above");
    let mut given = Given::new();
    let mut elliptic = Vec::new();
    for c in doc.components {
        let fibers = c.fibers.into_iter().map(|f| fiber_from_doc(&c.id, f, &mut given)).collect::<Result<_, _>>()?;
        elliptic.push(EllipticComponent {
            id: ComponentId(c.id),
            genus: c.genus,
            deg_l: c.deg_l,
            isotrivial_jinf: c.isotrivial_jinf,
            section_contracted: c.section_contracted,
            fibers,
            attach: c.attach.into_iter().map(attach_from_doc).collect(),
        });
    }
    let mut pseudo2 = Vec::new();
    for p in doc.pseudo2 {
        let fibers = p.fibers.into_iter().map(|f| fiber_from_doc(&p.id, f, &mut given)).collect::<Result<_, _>>()?;
        pseudo2.push(TypeIIPseudo {
            id: ComponentId(p.id),
            deg_l: p.deg_l,
            isotrivial_jinf: p.isotrivial_jinf,
            fibers,
            attach: p.attach.into_iter().map(attach_from_doc).collect(),
        });
    }
    let mut trees = Vec::new();
    for t in doc.trees {
        trees.push(PseudoTreeAttachment {
            host: ComponentId(t.host),
            host_fiber: FiberId(t.host_fiber),
            root: node_from_doc(t.root, &mut given)?,
        });
    }
    let mut x = BrokenEllipticSurface { elliptic, pseudo2, trees, weights };
    let has_all_weights = x.all_fibers().iter().all(|(_, f)| f.markers.iter().all(|m| x.weights.get(*m).is_some()));
    if has_all_weights {
        x.refresh_coefficients();
    }
    x.for_each_fiber_mut(&mut |owner, f| {
        let (coeff, state) = given.get(&(owner.0.clone(), f.id.0.clone())).copied().unwrap_or((None, None));
        f.state = match state {
            Some(s) => s,
            None if f.is_host() => FiberModelState::Intermediate,
            None => fiber_model_at(f.ftype, f.coeff).unwrap_or(FiberModelState::Weierstrass),
        };
        if let Some(c) = coeff {
            f.coeff = c;
        }
    });
    Ok(x)
}

/// Parses and validates a model.
pub fn parse_model(text: &str) -> Result<BrokenEllipticSurface, ParseError> {
    let x = parse_model_unchecked(text)?;
    let v = validate(&x);
    if v.is_empty() {
        Ok(x)
    } else {
        Err(ParseError::ModelInvalid(v))
    }
}

fn fiber_doc(f: &MarkedFiber) -> FiberDoc {
    FiberDoc {
        id: f.id.0.clone(),
        ftype: f.ftype,
        markers: f.markers.iter().map(|m| m.0).collect(),
        coeff: Some(f.coeff),
        state: Some(f.state),
        non_minimal_cusp: f.non_minimal_cusp,
    }
}

fn attach_doc(a: &AttachFiber) -> AttachDoc {
    AttachDoc { id: a.id.0.clone(), ftype: a.ftype, peer: a.peer.0.clone(), peer_fiber: a.peer_fiber.0.clone() }
}

fn node_doc(n: &PseudoComponent) -> NodeDoc {
    NodeDoc {
        id: n.id.0.clone(),
        deg_l: n.deg_l,
        isotrivial_jinf: n.isotrivial_jinf,
        fibers: n.fibers.iter().map(fiber_doc).collect(),
        children: n.children.iter().map(|c| ChildDoc { via: c.via.0.clone(), node: node_doc(&c.node) }).collect(),
    }
}

pub fn model_to_value(x: &BrokenEllipticSurface) -> Value {
    let doc = SurfaceDoc {
        weights: x.weights.entries().to_vec(),
        components: x
            .elliptic
            .iter()
            .map(|c| ComponentDoc {
                id: c.id.0.clone(),
                genus: c.genus,
                deg_l: c.deg_l,
                isotrivial_jinf: c.isotrivial_jinf,
                section_contracted: c.section_contracted,
                fibers: c.fibers.iter().map(fiber_doc).collect(),
                attach: c.attach.iter().map(attach_doc).collect(),
            })
            .collect(),
        pseudo2: x
            .pseudo2
            .iter()
            .map(|p| Pseudo2Doc {
                id: p.id.0.clone(),
                deg_l: p.deg_l,
                isotrivial_jinf: p.isotrivial_jinf,
                fibers: p.fibers.iter().map(fiber_doc).collect(),
                attach: p.attach.iter().map(attach_doc).collect(),
            })
            .collect(),
        trees: x
            .trees
            .iter()
            .map(|t| TreeDoc { host: t.host.0.clone(), host_fiber: t.host_fiber.0.clone(), root: node_doc(&t.root) })
            .collect(),
    };
    serde_json::to_value(doc).expect("model serializes")
}

pub fn model_to_json(x: &BrokenEllipticSurface) -> String {
    serde_json::to_string_pretty(&model_to_value(x)).expect("value serializes")
}

/// Accepts `["1", "1/2", ...]` or `{"weights": [...]}`.
pub fn parse_weights(text: &str) -> Result<WeightVector, ParseError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Doc {
        Bare(Vec<Rational>),
        Wrapped { weights: Vec<Rational> },
    }
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let doc: Doc = serde_json::from_value(v).map_err(|e| schema("weights", e.to_string()))?;
    let entries = match doc {
        Doc::Bare(w) | Doc::Wrapped { weights: w } => w,
    };
    WeightVector::new(entries).map_err(|e| match e {
        CurveError::WeightOutOfRange { index, weight } => {
            schema(format!("weights[{}]", index.0 - 1), format!("weight {weight} outside [0, 1]"))
        }
        other => schema("weights", other.to_string()),
    })
}

/// Comma separated rationals, e.g. `1,1,1/2`.
pub fn parse_weight_list(text: &str) -> Result<WeightVector, ParseError> {
    let entries = text
        .split(',')
        .map(|s| s.trim().parse::<Rational>().map_err(|e| schema("weights", e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    WeightVector::new(entries).map_err(|e| schema("weights", e.to_string()))
}

pub fn parse_curve(text: &str) -> Result<MarkedNodalCurve, ParseError> {
    serde_json::from_str(text).map_err(json_error)
}

pub fn curve_to_json(c: &MarkedNodalCurve) -> String {
    serde_json::to_string_pretty(c).expect("curve serializes")
}

fn record_value(r: &TransformationRecord) -> Value {
    let mut v = json!({
        "kind": r.kind,
        "wall": r.wall,
        "t": r.t,
        "weights": r.snapshot_after.weights,
        "affected": r.affected,
        "snapshot": model_to_value(&r.snapshot_after),
    });
    if let Some(n) = &r.note {
        v["note"] = json!(n);
    }
    v
}

pub fn trace_to_value(t: &ReductionTrace) -> Value {
    let mut v = json!({
        "start": model_to_value(&t.start),
        "target": t.target,
        "records": t.records.iter().map(record_value).collect::<Vec<_>>(),
        "final": model_to_value(&t.final_model),
    });
    if let Some(r) = &t.review {
        v["review"] = json!(r);
    }
    v
}
