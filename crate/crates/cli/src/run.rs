//! Command dispatch. Every command renders to a string; batch inputs run in
//! parallel and are printed in path order.

use std::fs;
use std::path::{Path, PathBuf};

use mmp_elliptic_core::io::{curve_to_json, model_to_value, parse_curve, trace_to_value, ParseError};
use mmp_elliptic_core::walls::{base_is_rational, marker_types};
use mmp_elliptic_core::{
    curve_dot, emit_dot, enumerate_walls, hassett_reduce, parse_model, reduce_with, segment_walls, volume,
    BrokenEllipticSurface, ReduceOptions, ReductionError, SurfaceError, WeightVector,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Command, Format, RunConfig, WallSource};
use crate::report;

/// Process exit status and the text for each stream.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone)]
pub struct JobError {
    pub kind: &'static str,
    pub message: String,
    pub details: Value,
}

impl JobError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        JobError { kind, message: message.into(), details: Value::Null }
    }

    fn code(&self) -> i32 {
        if self.kind == "usage" {
            2
        } else {
            1
        }
    }

    fn to_value(&self) -> Value {
        let mut v = json!({"kind": self.kind, "message": self.message});
        if !self.details.is_null() {
            v["details"] = self.details.clone();
        }
        v
    }
}

impl From<ParseError> for JobError {
    fn from(e: ParseError) -> Self {
        let message = e.to_string();
        match e {
            ParseError::MalformedJson { line, column, .. } => {
                JobError { kind: "malformed-json", message, details: json!({"line": line, "column": column}) }
            }
            ParseError::SchemaViolation { field, reason } => {
                JobError { kind: "schema-violation", message, details: json!({"field": field, "reason": reason}) }
            }
            ParseError::ModelInvalid(v) => {
                JobError { kind: "model-invalid", message, details: serde_json::to_value(v).unwrap_or(Value::Null) }
            }
        }
    }
}

impl From<SurfaceError> for JobError {
    fn from(e: SurfaceError) -> Self {
        match e {
            SurfaceError::UnsupportedConfiguration(m) => JobError::new("unsupported-configuration", m),
            _ => JobError::new("surface", e.to_string()),
        }
    }
}

impl From<ReductionError> for JobError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::InvalidModel(v) => JobError {
                kind: "model-invalid",
                message: e_message(&v),
                details: serde_json::to_value(v).unwrap_or(Value::Null),
            },
            other => JobError::new("reduction-failed", other.to_string()),
        }
    }
}

fn e_message(v: &[mmp_elliptic_core::Violation]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("invalid model: {}", parts.join("; "))
}

fn read(path: &Path) -> Result<String, JobError> {
    fs::read_to_string(path).map_err(|e| JobError::new("io", format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<BrokenEllipticSurface, JobError> {
    Ok(parse_model(&read(path)?)?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

/// The model at lower weights, obtained by reduction.
fn at_weights(x: &BrokenEllipticSurface, w: &WeightVector) -> Result<BrokenEllipticSurface, JobError> {
    if w == &x.weights {
        return Ok(x.clone());
    }
    if w.len() == x.weights.len() && !w.le(&x.weights) {
        return Err(JobError::new(
            "unsupported-configuration",
            "report weights must not exceed the model weights; only decreasing reduction is general",
        ));
    }
    Ok(reduce_with(x, w, ReduceOptions::default())?.final_model)
}

fn model_value(x: &BrokenEllipticSurface) -> Value {
    let fibers: Vec<Value> = x
        .all_fibers()
        .into_iter()
        .map(|(c, f)| {
            json!({
                "component": c.0, "fiber": f.id.0, "type": f.ftype, "markers": f.markers,
                "coeff": f.coeff, "state": f.state,
            })
        })
        .collect();
    let mut degrees = serde_json::Map::new();
    let mut contract = serde_json::Map::new();
    for c in &x.elliptic {
        degrees.insert(c.id.0.clone(), x.section_degree(&c.id).map(|d| json!(d)).unwrap_or(Value::Null));
        contract.insert(c.id.0.clone(), x.should_contract_section(&c.id).map(|d| json!(d)).unwrap_or(Value::Null));
    }
    let mut fates = serde_json::Map::new();
    for t in &x.trees {
        fates.insert(t.root.id.0.clone(), x.pseudo_fate(&t.root.id).map(|f| json!(f)).unwrap_or(Value::Null));
    }
    json!({
        "weights": x.weights,
        "fibers": fibers,
        "section_degrees": degrees,
        "contract_section": contract,
        "pseudo_fates": fates,
        "model": model_to_value(x),
    })
}

fn model_job(path: &Path, weights: Option<&WeightVector>, cfg: &RunConfig) -> Result<String, JobError> {
    let mut x = load(path)?;
    if let Some(w) = weights {
        x = at_weights(&x, w)?;
    }
    Ok(match cfg.format {
        Format::Json => pretty(&model_value(&x)),
        Format::Md => report::model(&x, cfg.color),
        Format::Dot => emit_dot(&x),
    })
}

fn write_snapshots(dir: &Path, stem: &str, trace: &mmp_elliptic_core::ReductionTrace) -> Result<(), JobError> {
    let io = |e: std::io::Error| JobError::new("io", format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join(format!("{stem}-00-start.dot")), emit_dot(&trace.start)).map_err(io)?;
    for (i, r) in trace.records.iter().enumerate() {
        let name = format!("{stem}-{:02}-{:?}.dot", i + 1, r.kind);
        fs::write(dir.join(name), emit_dot(&r.snapshot_after)).map_err(io)?;
    }
    Ok(())
}

fn reduce_job(
    path: &Path,
    from: Option<&WeightVector>,
    to: &WeightVector,
    dot_dir: Option<&PathBuf>,
    check_hassett: bool,
    cfg: &RunConfig,
) -> Result<String, JobError> {
    let mut x = load(path)?;
    if let Some(w) = from {
        if w.len() != x.weights.len() {
            return Err(JobError::new(
                "usage",
                format!("--from has {} weights, the model has {}", w.len(), x.weights.len()),
            ));
        }
        x = x.reweighted(w.clone());
    }
    let trace = reduce_with(&x, to, ReduceOptions { check_hassett })?;
    if let Some(dir) = dot_dir {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "model".into());
        write_snapshots(dir, &stem, &trace)?;
    }
    Ok(match cfg.format {
        Format::Json => pretty(&trace_to_value(&trace)),
        Format::Md => report::trace(&trace),
        Format::Dot => emit_dot(&trace.final_model),
    })
}

fn volume_job(path: &Path, cfg: &RunConfig) -> Result<String, JobError> {
    let v = volume(&load(path)?)?;
    Ok(match cfg.format {
        Format::Md => format!("Volume: {v}\n"),
        _ => pretty(&json!({ "volume": v })),
    })
}

fn hassett_job(path: &Path, weights: Option<&WeightVector>, cfg: &RunConfig) -> Result<String, JobError> {
    let text = read(path)?;
    let is_curve = serde_json::from_str::<Value>(&text).map(|v| v.get("vertices").is_some()).unwrap_or(false);
    let (curve, w) = if is_curve {
        let w = weights.ok_or_else(|| JobError::new("usage", "curve input needs --weights"))?;
        (parse_curve(&text)?, w.clone())
    } else {
        let x = parse_model(&text)?;
        let w = weights.cloned().unwrap_or_else(|| x.weights.clone());
        (x.base_curve()?, w)
    };
    let reduced = hassett_reduce(&curve, &w).map_err(|e| JobError::new("curve", e.to_string()))?;
    Ok(match cfg.format {
        Format::Json => format!("{}\n", curve_to_json(&reduced)),
        Format::Md => report::curve(&reduced),
        Format::Dot => curve_dot(&reduced),
    })
}

fn walls_job(
    source: &WallSource,
    segment: Option<&(WeightVector, WeightVector)>,
    cfg: &RunConfig,
) -> Result<String, JobError> {
    let walls = match source {
        WallSource::Types { types, rational_base } => enumerate_walls(types.len(), types, *rational_base),
        WallSource::Model(p) => {
            let x = load(p)?;
            let types = marker_types(&x)
                .into_iter()
                .enumerate()
                .map(|(i, t)| t.ok_or_else(|| JobError::new("model-invalid", format!("marker {} has no fiber", i + 1))))
                .collect::<Result<Vec<_>, _>>()?;
            enumerate_walls(types.len(), &types, base_is_rational(&x))
        }
    }
    .map_err(|e| JobError::new("usage", e.to_string()))?;
    match segment {
        None => Ok(match cfg.format {
            Format::Md => report::walls(&walls),
            _ => pretty(&json!(walls)),
        }),
        Some((a, b)) => {
            if a.len() != walls_dimension(source) || b.len() != a.len() {
                return Err(JobError::new("usage", "segment endpoints must have one weight per marker"));
            }
            let scan = segment_walls(a, b, &walls).map_err(|e| JobError::new("usage", e.to_string()))?;
            Ok(match cfg.format {
                Format::Md => report::segment(&scan),
                _ => pretty(&json!(scan)),
            })
        }
    }
}

fn walls_dimension(source: &WallSource) -> usize {
    match source {
        WallSource::Types { types, .. } => types.len(),
        WallSource::Model(p) => load(p).map(|x| x.weights.len()).unwrap_or(0),
    }
}

fn single(result: Result<String, JobError>, format: Format) -> Outcome {
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome {
            code: e.code(),
            stdout: if format == Format::Json { pretty(&json!({ "error": e.to_value() })) } else { String::new() },
            stderr: format!("error: {}: {}\n", e.kind, e.message),
        },
    }
}

fn batch(inputs: &[PathBuf], format: Format, job: impl Fn(&Path) -> Result<String, JobError> + Sync) -> Outcome {
    let results: Vec<Result<String, JobError>> = inputs.par_iter().map(|p| job(p)).collect();
    let mut out = Outcome::default();
    let mut entries = Vec::new();
    for (p, r) in inputs.iter().zip(&results) {
        let name = p.display().to_string();
        if let Err(e) = r {
            out.code = out.code.max(e.code());
            out.stderr.push_str(&format!("error: {name}: {}: {}\n", e.kind, e.message));
        }
        match format {
            Format::Json => entries.push(match r {
                Ok(s) => {
                    json!({"path": name, "ok": true, "output": serde_json::from_str::<Value>(s).unwrap_or(json!(s))})
                }
                Err(e) => json!({"path": name, "ok": false, "error": e.to_value()}),
            }),
            Format::Md => {
                out.stdout.push_str(&format!("## {name}\n\n"));
                match r {
                    Ok(s) => out.stdout.push_str(s),
                    Err(e) => out.stdout.push_str(&format!("error: {}: {}\n", e.kind, e.message)),
                }
                out.stdout.push('\n');
            }
            Format::Dot => {
                out.stdout.push_str(&format!("// {name}\n"));
                if let Ok(s) = r {
                    out.stdout.push_str(s);
                }
            }
        }
    }
    if format == Format::Json {
        out.stdout = pretty(&Value::Array(entries));
    }
    out
}

/// Runs one command. Exit codes: 0 success, 1 validation or unsupported input, 2 usage.
pub fn run(cfg: &RunConfig) -> Outcome {
    let per_model = |inputs: &[PathBuf], job: &(dyn Fn(&Path) -> Result<String, JobError> + Sync)| {
        if cfg.batch {
            batch(inputs, cfg.format, job)
        } else {
            single(job(&inputs[0]), cfg.format)
        }
    };
    match &cfg.command {
        Command::Walls { source, segment } => single(walls_job(source, segment.as_ref(), cfg), cfg.format),
        Command::Model { inputs, weights } => per_model(inputs, &|p| model_job(p, weights.as_ref(), cfg)),
        Command::Reduce { inputs, from, to, dot_dir, check_hassett } => {
            per_model(inputs, &|p| reduce_job(p, from.as_ref(), to, dot_dir.as_ref(), *check_hassett, cfg))
        }
        Command::Hassett { input, weights } => single(hassett_job(input, weights.as_ref(), cfg), cfg.format),
        Command::Volume { inputs } => per_model(inputs, &|p| volume_job(p, cfg)),
    }
}
