//! Graphviz output. Node and cluster order follows model order, so equal
//! inputs give byte-identical text.

use std::fmt::Write;

use crate::curve::MarkedNodalCurve;
use crate::surface::{BrokenEllipticSurface, ComponentId, MarkedFiber, PseudoComponent};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn fiber_node(out: &mut String, indent: &str, owner: &ComponentId, f: &MarkedFiber) {
    let markers: Vec<String> = f.markers.iter().map(|m| m.to_string()).collect();
    let mut label = format!("{}\\n{} {:?}, {}", f.id, f.ftype, f.state, f.coeff);
    if !markers.is_empty() {
        let _ = write!(label, "\\n[{}]", markers.join(","));
    }
    let _ = writeln!(out, "{indent}{} [shape=ellipse, label={}];", quote(&format!("{owner}/{}", f.id)), quote(&label));
    let _ = writeln!(out, "{indent}{} -- {};", quote(&owner.0), quote(&format!("{owner}/{}", f.id)));
}

fn tree_cluster(out: &mut String, depth: usize, n: &PseudoComponent, edges: &mut Vec<String>) {
    let indent = "  ".repeat(depth);
    let _ = writeln!(out, "{indent}subgraph {} {{", quote(&format!("cluster_{}", n.id)));
    let _ = writeln!(out, "{indent}  label={};", quote(&format!("{} pseudoelliptic, degL={}", n.id, n.deg_l)));
    let _ = writeln!(out, "{indent}  style=dashed;");
    let _ = writeln!(out, "{indent}  {} [shape=box];", quote(&n.id.0));
    for f in &n.fibers {
        fiber_node(out, &format!("{indent}  "), &n.id, f);
    }
    for c in &n.children {
        let via = n.fibers.iter().find(|f| f.id == c.via);
        let label = via.map(|f| format!("{}, {}", f.ftype, f.coeff)).unwrap_or_default();
        edges.push(format!(
            "  {} -- {} [style=bold, label={}];",
            quote(&format!("{}/{}", n.id, c.via)),
            quote(&c.node.id.0),
            quote(&label)
        ));
        tree_cluster(out, depth + 1, &c.node, edges);
    }
    let _ = writeln!(out, "{indent}}}");
}

/// Renders the surface: one cluster per component, nested clusters for trees,
/// bold edges for attachments labelled with fiber type and coefficient.
pub fn emit_dot(x: &BrokenEllipticSurface) -> String {
    let mut out = String::from("graph surface {\n  compound=true;\n  node [fontsize=10];\n");
    let mut edges = Vec::new();
    for c in &x.elliptic {
        let _ = writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{}", c.id)));
        let mut label = format!("{} g={}, degL={}", c.id, c.genus, c.deg_l);
        if c.section_contracted {
            label.push_str(", section contracted");
        }
        let _ = writeln!(out, "    label={};", quote(&label));
        let _ = writeln!(out, "    {} [shape=box];", quote(&c.id.0));
        for f in &c.fibers {
            fiber_node(&mut out, "    ", &c.id, f);
        }
        for a in &c.attach {
            let node = format!("{}/{}", c.id, a.id);
            let _ = writeln!(
                out,
                "    {} [shape=diamond, label={}];",
                quote(&node),
                quote(&format!("{}\\n{}", a.id, a.ftype))
            );
            let _ = writeln!(out, "    {} -- {};", quote(&c.id.0), quote(&node));
        }
        let _ = writeln!(out, "  }}");
    }
    for p in &x.pseudo2 {
        let _ = writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{}", p.id)));
        let _ = writeln!(out, "    label={};", quote(&format!("{} type II, degL={}", p.id, p.deg_l)));
        let _ = writeln!(out, "    style=dotted;");
        let _ = writeln!(out, "    {} [shape=box];", quote(&p.id.0));
        for f in &p.fibers {
            fiber_node(&mut out, "    ", &p.id, f);
        }
        for a in &p.attach {
            let node = format!("{}/{}", p.id, a.id);
            let _ = writeln!(
                out,
                "    {} [shape=diamond, label={}];",
                quote(&node),
                quote(&format!("{}\\n{}", a.id, a.ftype))
            );
            let _ = writeln!(out, "    {} -- {};", quote(&p.id.0), quote(&node));
        }
        let _ = writeln!(out, "  }}");
    }
    // Each attachment pair is drawn once, from the side with the smaller id.
    let owners = x.elliptic.iter().map(|c| (&c.id, &c.attach)).chain(x.pseudo2.iter().map(|p| (&p.id, &p.attach)));
    for (id, attach) in owners {
        for a in attach.iter().filter(|a| (&id.0, &a.id.0) < (&a.peer.0, &a.peer_fiber.0)) {
            let peer_type = x
                .attach_of(&a.peer)
                .and_then(|fs| fs.iter().find(|b| b.id == a.peer_fiber))
                .map(|b| format!(" / {}", b.ftype))
                .unwrap_or_default();
            edges.push(format!(
                "  {} -- {} [style=bold, label={}];",
                quote(&format!("{id}/{}", a.id)),
                quote(&format!("{}/{}", a.peer, a.peer_fiber)),
                quote(&format!("{}{peer_type}, 1", a.ftype))
            ));
        }
    }
    for t in &x.trees {
        let host = x
            .all_fibers()
            .into_iter()
            .find(|(c, f)| **c == t.host && f.id == t.host_fiber)
            .map(|(_, f)| format!("{}, {}", f.ftype, f.coeff))
            .unwrap_or_default();
        edges.push(format!(
            "  {} -- {} [style=bold, label={}];",
            quote(&format!("{}/{}", t.host, t.host_fiber)),
            quote(&t.root.id.0),
            quote(&host)
        ));
        tree_cluster(&mut out, 1, &t.root, &mut edges);
    }
    for e in edges {
        out.push_str(&e);
        out.push('\n');
    }
    out.push_str("}\n");
    out
}

/// Dual graph of a marked nodal curve; markers are drawn as points.
pub fn curve_dot(c: &MarkedNodalCurve) -> String {
    let mut out = String::from("graph curve {\n  node [fontsize=10];\n");
    for v in c.vertices() {
        let _ = writeln!(
            out,
            "  {} [shape=circle, label={}];",
            quote(&v.id.0),
            quote(&format!("{}\\ng={}", v.id, v.genus))
        );
    }
    for (a, b) in c.edges() {
        let _ = writeln!(out, "  {} -- {};", quote(&a.0), quote(&b.0));
    }
    for m in c.markers() {
        let name = format!("p{}", m.index);
        let _ = writeln!(out, "  {} [shape=plaintext, label={}];", quote(&name), quote(&m.index.to_string()));
        let _ = writeln!(out, "  {} -- {} [style=dotted];", quote(&m.vertex.0), quote(&name));
    }
    for (i, g) in c.coincident().iter().enumerate() {
        let members: Vec<String> = g.iter().map(|m| quote(&format!("p{m}"))).collect();
        let _ =
            writeln!(out, "  subgraph {} {{ rank=same; {} }}", quote(&format!("coincident_{i}")), members.join("; "));
    }
    out.push_str("}\n");
    out
}
