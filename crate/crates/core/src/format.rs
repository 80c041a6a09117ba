//! The on-disk diagram document.
//!
//! ```json
//! {
//!   "variables": [
//!     {"name": "C", "outcomes": ["c1", "c2"]}
//!   ],
//!   "nodes": [
//!     {
//!       "name": "C",
//!       "kind": "chance",
//!       "parents": [],
//!       "table": [
//!         [0.5, 0.3]
//!       ]
//!     },
//!     {
//!       "name": "V",
//!       "kind": "value",
//!       "parents": ["C"],
//!       "table": [
//!         [10.0, 10.0],
//!         [0.0, 0.0]
//!       ]
//!     }
//!   ]
//! }
//! ```
//!
//! `variables` lists the outcomes of every chance node. Chance tables hold
//! one row of lower bounds per parent configuration, value tables one
//! `[lo, hi]` pair; rows follow mixed-radix order with the last parent
//! varying fastest. Decision nodes carry `alternatives` and list their
//! observations as parents.
//!
//! [`serialize_diagram`] writes the canonical form: fixed key order, two-space
//! indentation, one table row per line, numbers in shortest round-trip form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{build_diagram, DiagramSpec, InfluenceDiagram, Interval, NodeSpec, NodeSpecKind};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    variables: Vec<Variable>,
    nodes: Vec<NodeEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Variable {
    name: String,
    outcomes: Vec<String>,
}

#[derive(Deserialize, Clone, Copy, PartialEq)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Chance,
    Decision,
    Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeEntry {
    name: String,
    kind: Kind,
    #[serde(default)]
    parents: Vec<String>,
    alternatives: Option<Vec<String>>,
    table: Option<Vec<Vec<f64>>>,
}

fn syntax(e: serde_json::Error) -> Error {
    let text = e.to_string();
    let message = match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    };
    Error::Syntax { line: e.line(), column: e.column(), message }
}

fn at(path: String, source: Error) -> Error {
    Error::Field { path, source: Box::new(source) }
}

/// Reads a diagram document. Syntax errors carry a line and column; semantic
/// errors carry the path of the offending field.
pub fn parse_diagram(text: &str) -> Result<InfluenceDiagram> {
    let spec = parse_spec(text)?;
    build_diagram(&spec).map_err(|e| match locate(&spec, &e) {
        Some(path) => at(path, e),
        None => e,
    })
}

/// Reads a document into an unvalidated description.
pub fn parse_spec(text: &str) -> Result<DiagramSpec> {
    let doc: Document = serde_json::from_str(text).map_err(syntax)?;
    let mut outcomes: BTreeMap<&str, (usize, &Vec<String>)> = BTreeMap::new();
    for (k, v) in doc.variables.iter().enumerate() {
        if outcomes.insert(&v.name, (k, &v.outcomes)).is_some() {
            return Err(at(format!("variables[{}].name", k), Error::DuplicateName(v.name.clone())));
        }
    }
    let mut used = vec![false; doc.variables.len()];
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for (i, n) in doc.nodes.iter().enumerate() {
        let path = |field: &str| format!("nodes[{}].{}", i, field);
        let missing = |field: &str| at(path(field), Error::MissingEntry(format!("field `{}`", field)));
        let unexpected = |field: &str| {
            at(path(field), Error::MissingEntry(format!("nothing: `{}` is not allowed on this node kind", field)))
        };
        let kind = match n.kind {
            Kind::Chance => {
                let Some(&(k, o)) = outcomes.get(n.name.as_str()) else {
                    return Err(at(path("name"), Error::MissingEntry(format!("variable entry for `{}`", n.name))));
                };
                used[k] = true;
                if n.alternatives.is_some() {
                    return Err(unexpected("alternatives"));
                }
                let rows = n.table.clone().ok_or_else(|| missing("table"))?;
                NodeSpecKind::Chance { outcomes: o.clone(), rows }
            }
            Kind::Decision => {
                if n.table.is_some() {
                    return Err(unexpected("table"));
                }
                NodeSpecKind::Decision { alternatives: n.alternatives.clone().ok_or_else(|| missing("alternatives"))? }
            }
            Kind::Value => {
                if n.alternatives.is_some() {
                    return Err(unexpected("alternatives"));
                }
                let table = n.table.as_ref().ok_or_else(|| missing("table"))?;
                let rows = table
                    .iter()
                    .enumerate()
                    .map(|(r, pair)| match pair[..] {
                        [lo, hi] => Ok(Interval::new(lo, hi)),
                        _ => Err(at(
                            format!("nodes[{}].table[{}]", i, r),
                            Error::ParentMismatch {
                                node: n.name.clone(),
                                detail: format!("value row {} needs [lo, hi], found {} numbers", r, pair.len()),
                            },
                        )),
                    })
                    .collect::<Result<Vec<_>>>()?;
                NodeSpecKind::Value { rows }
            }
        };
        nodes.push(NodeSpec { name: n.name.clone(), parents: n.parents.clone(), kind });
    }
    if let Some(k) = used.iter().position(|u| !u) {
        let name = &doc.variables[k].name;
        return Err(at(format!("variables[{}].name", k), Error::MissingEntry(format!("chance node `{}`", name))));
    }
    Ok(DiagramSpec { nodes })
}

/// Field path of the node a build error refers to.
fn locate(spec: &DiagramSpec, e: &Error) -> Option<String> {
    let index = |name: &str| spec.nodes.iter().position(|n| n.name == name);
    let last_index = |name: &str| spec.nodes.iter().rposition(|n| n.name == name);
    let parent_of = |name: &str| spec.nodes.iter().position(|n| n.parents.iter().any(|p| p == name));
    let outcomes_path = |name: &str| {
        let i = index(name)?;
        Some(match spec.nodes[i].kind {
            NodeSpecKind::Decision { .. } => format!("nodes[{}].alternatives", i),
            _ => format!("nodes[{}].name", i),
        })
    };
    match e {
        Error::DuplicateName(n) => last_index(n).map(|i| format!("nodes[{}].name", i)),
        Error::DuplicateOutcome { node, .. } => outcomes_path(node),
        Error::TooFewOutcomes(node) => outcomes_path(node),
        Error::UnknownNode(n) | Error::ValueHasSuccessors(n) => parent_of(n).map(|i| format!("nodes[{}].parents", i)),
        Error::CycleDetected(n) => index(n).map(|i| format!("nodes[{}].parents", i)),
        Error::MultipleValueNodes(_, second) => last_index(second).map(|i| format!("nodes[{}].kind", i)),
        Error::RowSumExceedsOne { node, row, .. }
        | Error::NegativeBound { node, row, .. }
        | Error::IntervalInverted { node, row, .. } => index(node).map(|i| format!("nodes[{}].table[{}]", i, row)),
        Error::ParentMismatch { node, .. } => index(node).map(|i| format!("nodes[{}].table", i)),
        Error::UnorderedDecisions(_, b) => index(b).map(|i| format!("nodes[{}].parents", i)),
        Error::NoValueNode => Some("nodes".to_string()),
        _ => None,
    }
}

fn string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn number(x: f64) -> String {
    serde_json::to_string(&x).expect("finite numbers serialize")
}

fn list(items: impl IntoIterator<Item = String>) -> String {
    format!("[{}]", items.into_iter().collect::<Vec<_>>().join(", "))
}

fn strings(xs: &[String]) -> String {
    list(xs.iter().map(|s| string(s)))
}

/// Canonical text of a diagram. Implicit no-forgetting arcs are left out, so
/// `parse_diagram(serialize_diagram(d)) == d`.
pub fn serialize_diagram(diagram: &InfluenceDiagram) -> String {
    serialize_spec(&diagram.to_spec())
}

pub fn serialize_spec(spec: &DiagramSpec) -> String {
    let mut out = String::from("{\n  \"variables\": [");
    let variables: Vec<String> = spec
        .nodes
        .iter()
        .filter_map(|n| match &n.kind {
            NodeSpecKind::Chance { outcomes, .. } => {
                Some(format!("    {{\"name\": {}, \"outcomes\": {}}}", string(&n.name), strings(outcomes)))
            }
            _ => None,
        })
        .collect();
    if !variables.is_empty() {
        write!(out, "\n{}\n  ", variables.join(",\n")).unwrap();
    }
    out.push_str("],\n  \"nodes\": [");
    let nodes: Vec<String> = spec.nodes.iter().map(node_text).collect();
    if !nodes.is_empty() {
        write!(out, "\n{}\n  ", nodes.join(",\n")).unwrap();
    }
    out.push_str("]\n}\n");
    out
}

fn node_text(n: &NodeSpec) -> String {
    let (kind, tail) = match &n.kind {
        NodeSpecKind::Chance { rows, .. } => ("chance", table(rows.iter().map(|r| list(r.iter().map(|&x| number(x)))))),
        NodeSpecKind::Decision { alternatives } => ("decision", format!("\"alternatives\": {}", strings(alternatives))),
        NodeSpecKind::Value { rows } => ("value", table(rows.iter().map(|i| list([number(i.lo), number(i.hi)])))),
    };
    format!(
        "    {{\n      \"name\": {},\n      \"kind\": \"{}\",\n      \"parents\": {},\n      {}\n    }}",
        string(&n.name),
        kind,
        strings(&n.parents),
        tail
    )
}

fn table(rows: impl Iterator<Item = String>) -> String {
    let rows: Vec<String> = rows.map(|r| format!("        {}", r)).collect();
    if rows.is_empty() {
        return "\"table\": []".to_string();
    }
    format!("\"table\": [\n{}\n      ]", rows.join(",\n"))
}
