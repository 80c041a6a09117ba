use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{InfluenceDiagram, Interval, IntervalTable, LowerCpt, Node, NodeId, NodeKind};

/// Name-addressed description of a diagram, as read from a file or assembled
/// in code. [`build_diagram`] turns it into a validated [`InfluenceDiagram`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagramSpec {
    pub nodes: Vec<NodeSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub name: String,
    pub parents: Vec<String>,
    pub kind: NodeSpecKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeSpecKind {
    Chance { outcomes: Vec<String>, rows: Vec<Vec<f64>> },
    Decision { alternatives: Vec<String> },
    Value { rows: Vec<Interval> },
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

impl DiagramSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn chance(mut self, name: &str, outcomes: &[&str], parents: &[&str], rows: Vec<Vec<f64>>) -> Self {
        self.nodes.push(NodeSpec {
            name: name.to_string(),
            parents: labels(parents),
            kind: NodeSpecKind::Chance { outcomes: labels(outcomes), rows },
        });
        self
    }

    pub fn decision(mut self, name: &str, alternatives: &[&str], parents: &[&str]) -> Self {
        self.nodes.push(NodeSpec {
            name: name.to_string(),
            parents: labels(parents),
            kind: NodeSpecKind::Decision { alternatives: labels(alternatives) },
        });
        self
    }

    /// Value node with one `(lo, hi)` pair per parent configuration.
    pub fn value(mut self, name: &str, parents: &[&str], rows: Vec<(f64, f64)>) -> Self {
        self.nodes.push(NodeSpec {
            name: name.to_string(),
            parents: labels(parents),
            kind: NodeSpecKind::Value { rows: rows.into_iter().map(|(lo, hi)| Interval::new(lo, hi)).collect() },
        });
        self
    }

    pub fn build(&self) -> Result<InfluenceDiagram> {
        build_diagram(self)
    }
}

/// Validates a description and builds the diagram, adding no-forgetting
/// information arcs. Either every invariant holds or an error is returned.
pub fn build_diagram(spec: &DiagramSpec) -> Result<InfluenceDiagram> {
    let mut ids = BTreeMap::new();
    for (i, n) in spec.nodes.iter().enumerate() {
        if ids.insert(n.name.as_str(), NodeId(i)).is_some() {
            return Err(Error::DuplicateName(n.name.clone()));
        }
    }
    let mut value = None;
    for (i, n) in spec.nodes.iter().enumerate() {
        if let NodeSpecKind::Value { .. } = n.kind {
            if let Some(NodeId(first)) = value {
                return Err(Error::MultipleValueNodes(spec.nodes[first].name.clone(), n.name.clone()));
            }
            value = Some(NodeId(i));
        }
    }
    let value = value.ok_or(Error::NoValueNode)?;

    let mut nodes = Vec::with_capacity(spec.nodes.len());
    for n in &spec.nodes {
        let parents = n
            .parents
            .iter()
            .map(|p| ids.get(p.as_str()).copied().ok_or_else(|| Error::UnknownNode(p.clone())))
            .collect::<Result<Vec<_>>>()?;
        let (outcomes, kind) = match &n.kind {
            NodeSpecKind::Chance { outcomes, rows } => (outcomes.clone(), NodeKind::Chance(LowerCpt::new(rows.clone()))),
            NodeSpecKind::Decision { alternatives } => (alternatives.clone(), NodeKind::Decision),
            NodeSpecKind::Value { rows } => (Vec::new(), NodeKind::Value(IntervalTable::new(rows.clone()))),
        };
        nodes.push(Some(Node { name: n.name.clone(), outcomes, parents, kind }));
    }

    let mut diagram = InfluenceDiagram::from_parts(nodes, value, Vec::new(), Vec::new());
    diagram.validate_structure()?;
    diagram.complete_information()?;
    diagram.validate()?;
    Ok(diagram)
}

impl InfluenceDiagram {
    /// The name-addressed description of this diagram, without the
    /// no-forgetting arcs added at build time.
    pub fn to_spec(&self) -> DiagramSpec {
        let nodes = self
            .ids()
            .map(|id| {
                let node = self.node(id);
                let parents = node
                    .parents
                    .iter()
                    .filter(|&&p| !self.implicit_arcs().contains(&(p, id)))
                    .map(|&p| self.name(p).to_string())
                    .collect();
                let kind = match &node.kind {
                    NodeKind::Chance(t) => NodeSpecKind::Chance { outcomes: node.outcomes.clone(), rows: t.rows().to_vec() },
                    NodeKind::Decision => NodeSpecKind::Decision { alternatives: node.outcomes.clone() },
                    NodeKind::Value(t) => NodeSpecKind::Value { rows: t.rows().to_vec() },
                };
                NodeSpec { name: node.name.clone(), parents, kind }
            })
            .collect();
        DiagramSpec { nodes }
    }
}
