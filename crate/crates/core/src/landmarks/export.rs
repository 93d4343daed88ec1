//! DOT and JSON renderings of a landmark graph.

use serde::Serialize;

use super::graph::{LandmarkGraph, OrderingKind};
use crate::model::GroundTask;

#[derive(Serialize)]
struct JsonLandmark {
    id: usize,
    kind: &'static str,
    atoms: Vec<String>,
}

#[derive(Serialize)]
struct JsonOrdering {
    from: usize,
    to: usize,
    kind: OrderingKind,
}

#[derive(Serialize)]
struct JsonGraph {
    landmarks: Vec<JsonLandmark>,
    orderings: Vec<JsonOrdering>,
}

pub fn to_json(lg: &LandmarkGraph, task: &GroundTask) -> serde_json::Value {
    let g = JsonGraph {
        landmarks: lg
            .landmarks()
            .map(|(id, l)| JsonLandmark {
                id,
                kind: if l.is_fact() { "fact" } else { "disjunctive" },
                atoms: l
                    .atoms()
                    .iter()
                    .map(|&f| task.fact_name(f).to_string())
                    .collect(),
            })
            .collect(),
        orderings: lg
            .orderings()
            .map(|(from, to, kind)| JsonOrdering { from, to, kind })
            .collect(),
    };
    serde_json::to_value(g).expect("landmark graph serializes")
}

pub fn to_dot(lg: &LandmarkGraph, task: &GroundTask) -> String {
    let mut out = String::from("digraph landmarks {\n  node [shape=box];\n");
    for (id, l) in lg.landmarks() {
        let label: Vec<&str> = l.atoms().iter().map(|&f| task.fact_name(f)).collect();
        let shape = if l.is_fact() { "" } else { ", style=dashed" };
        out.push_str(&format!(
            "  n{id} [label=\"{}\"{shape}];\n",
            label.join(" | ")
        ));
    }
    for (a, b, k) in lg.orderings() {
        let style = match k {
            OrderingKind::Natural => " [style=dotted, label=\"nat\"]",
            OrderingKind::GreedyNecessary => " [label=\"gn\"]",
        };
        out.push_str(&format!("  n{a} -> n{b}{style};\n"));
    }
    out.push_str("}\n");
    out
}
