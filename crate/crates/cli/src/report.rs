//! Markdown reports. States are coloured with ANSI codes when enabled.

use std::fmt::Write;

use mmp_elliptic_core::walls::SegmentScan;
use mmp_elliptic_core::{
    BrokenEllipticSurface, FiberModelState, MarkedNodalCurve, MarkerIndex, Rational, ReductionTrace, Wall,
};

fn paint(s: &str, code: &str, color: bool) -> String {
    if color {
        format!("\x1b[{code}m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn state(s: FiberModelState, color: bool) -> String {
    let code = match s {
        FiberModelState::Weierstrass => "32",
        FiberModelState::Intermediate => "33",
        FiberModelState::Twisted => "35",
    };
    paint(&format!("{s:?}"), code, color)
}

fn set(s: impl IntoIterator<Item = MarkerIndex>) -> String {
    let v: Vec<String> = s.into_iter().map(|m| m.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

pub fn wall(w: &Wall) -> String {
    format!(
        "{:?}: sum {} = {}{}",
        w.kind,
        set(w.subset.iter().copied()),
        w.constant,
        if w.boundary { " (boundary)" } else { "" }
    )
}

fn weights(w: &[Rational]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn walls(ws: &[Wall]) -> String {
    let mut out = format!("# Walls ({})\n\n| kind | subset | constant | boundary |\n|---|---|---|---|\n", ws.len());
    for w in ws {
        let _ = writeln!(out, "| {:?} | {} | {} | {} |", w.kind, set(w.subset.iter().copied()), w.constant, w.boundary);
    }
    out
}

pub fn segment(scan: &SegmentScan) -> String {
    let mut out = String::from("# Segment crossings\n\n| t | walls |\n|---|---|\n");
    for c in &scan.crossings {
        let names: Vec<String> = c.walls.iter().map(wall).collect();
        let _ = writeln!(out, "| {} | {} |", c.t, names.join("; "));
    }
    for (label, ws) in [("start", &scan.at_start), ("end", &scan.at_end)] {
        if !ws.is_empty() {
            let names: Vec<String> = ws.iter().map(wall).collect();
            let _ = writeln!(out, "\nOn walls at the {label}: {}", names.join("; "));
        }
    }
    out
}

pub fn model(x: &BrokenEllipticSurface, color: bool) -> String {
    let mut out = format!("# Model\n\nWeights: {}\n\n", weights(x.weights.entries()));
    out.push_str("| component | fiber | type | markers | coeff | state |\n|---|---|---|---|---|---|\n");
    for (c, f) in x.all_fibers() {
        let _ = writeln!(
            out,
            "| {c} | {} | {} | {} | {} | {} |",
            f.id,
            f.ftype,
            set(f.markers.iter().copied()),
            f.coeff,
            state(f.state, color)
        );
    }
    out.push_str("\n| component | section degree | contract section |\n|---|---|---|\n");
    for c in &x.elliptic {
        let deg = x.section_degree(&c.id).map(|d| d.to_string()).unwrap_or_else(|_| "-".into());
        let contract = x.should_contract_section(&c.id).map(|b| b.to_string()).unwrap_or_else(|_| "-".into());
        let _ = writeln!(out, "| {} | {deg} | {contract} |", c.id);
    }
    if !x.trees.is_empty() {
        out.push_str("\n| tree root | host | fate |\n|---|---|---|\n");
        for t in &x.trees {
            let fate = x.pseudo_fate(&t.root.id).map(|f| format!("{f:?}")).unwrap_or_else(|e| e.to_string());
            let _ = writeln!(out, "| {} | {}/{} | {fate} |", t.root.id, t.host, t.host_fiber);
        }
    }
    out
}

pub fn trace(t: &ReductionTrace) -> String {
    let mut out = format!(
        "# Reduction\n\nFrom: {}\n\nTo: {}\n\n| # | t | kind | wall | affected | weights |\n|---|---|---|---|---|---|\n",
        weights(t.start.weights.entries()),
        weights(t.target.entries())
    );
    for (i, r) in t.records.iter().enumerate() {
        let _ = writeln!(
            out,
            "| {} | {} | {:?} | {} | {} | {} |",
            i + 1,
            r.t,
            r.kind,
            wall(&r.wall),
            r.affected.join(", "),
            weights(r.snapshot_after.weights.entries())
        );
    }
    for (i, r) in t.records.iter().enumerate() {
        if let Some(n) = &r.note {
            let _ = writeln!(out, "\nNote on step {}: {n}", i + 1);
        }
    }
    if let Some(r) = &t.review {
        let _ = writeln!(out, "\n**requires-manual-review**: {r}");
    }
    out
}

pub fn curve(c: &MarkedNodalCurve) -> String {
    let mut out = String::from("# Curve\n\n| vertex | genus | markers |\n|---|---|---|\n");
    for v in c.vertices() {
        let _ = writeln!(out, "| {} | {} | {} |", v.id, v.genus, set(c.markers_on(&v.id)));
    }
    out.push_str("\nEdges: ");
    let edges: Vec<String> = c.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    out.push_str(if edges.is_empty() { "none" } else { "" });
    out.push_str(&edges.join(", "));
    out.push('\n');
    if !c.coincident().is_empty() {
        let groups: Vec<String> = c.coincident().iter().map(|g| set(g.iter().copied())).collect();
        let _ = writeln!(out, "\nCoincident markers: {}", groups.join(", "));
    }
    out
}
