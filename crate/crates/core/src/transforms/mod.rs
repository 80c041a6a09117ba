//! Value-preserving graph transformations over interval diagrams.
//!
//! Each operation reads a diagram and returns a fresh one together with a
//! [`TransformStep`] describing what happened. Output bounds contain the exact
//! transform of every admitted distribution and value function, and every
//! bound except the lower end after a decision removal is attained by some
//! admitted point.

pub mod bounds;
mod chance;
mod value;

use std::fmt;

use serde::Serialize;

pub use chance::{marginalize_chance, reverse_arc};
pub use value::{admissible_set, remove_chance_into_value, remove_decision};

use crate::error::{Error, Result};
use crate::model::{ConfigSpace, InfluenceDiagram, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StepKind {
    RemoveChanceIntoValue(String),
    RemoveDecision(String),
    ReverseArc { from: String, to: String },
    MarginalizeChance(String),
    RemoveBarren(String),
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::RemoveChanceIntoValue(n) => write!(f, "remove chance node {} into value", n),
            StepKind::RemoveDecision(n) => write!(f, "remove decision {}", n),
            StepKind::ReverseArc { from, to } => write!(f, "reverse arc {} -> {}", from, to),
            StepKind::MarginalizeChance(n) => write!(f, "marginalize chance node {}", n),
            StepKind::RemoveBarren(n) => write!(f, "remove barren node {}", n),
        }
    }
}

/// Conventions and diagnostics recorded while applying a step.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "note", rename_all = "snake_case")]
pub enum StepNote {
    /// A reversed entry fell under the zero-by-convention rule.
    ConventionZero { node: String, row: usize, outcome: usize },
    /// A reversed row conditions on an outcome no admitted distribution can
    /// explain; it was stored as the vacuous all-zero row.
    Indeterminate { node: String, row: usize },
    /// After a decision removal, the lower end `min_S lo` sits `gap` below the
    /// largest attainable lower value `max_d lo`.
    AttainmentGap { decision: String, row: usize, gap: f64 },
    /// A decision without successors was dropped; every alternative is
    /// admissible.
    BarrenDecision { node: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformStep {
    pub kind: StepKind,
    pub notes: Vec<StepNote>,
}

impl TransformStep {
    fn new(kind: StepKind) -> Self {
        TransformStep { kind, notes: Vec::new() }
    }
}

/// Admissible alternatives of one decision for every information state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibleSet {
    pub decision: String,
    pub alternatives: Vec<String>,
    /// Variables the admissible sets are conditioned on, in index order.
    pub info: Vec<String>,
    #[serde(skip)]
    pub info_ids: Vec<NodeId>,
    #[serde(skip)]
    pub info_outcomes: Vec<Vec<String>>,
    /// One set of alternative indices per information configuration.
    pub sets: Vec<Vec<usize>>,
}

impl AdmissibleSet {
    pub(crate) fn new(diagram: &InfluenceDiagram, decision: NodeId, info_ids: Vec<NodeId>, sets: Vec<Vec<usize>>) -> Self {
        AdmissibleSet {
            decision: diagram.name(decision).to_string(),
            alternatives: diagram.node(decision).outcomes.clone(),
            info: info_ids.iter().map(|&i| diagram.name(i).to_string()).collect(),
            info_outcomes: info_ids.iter().map(|&i| diagram.node(i).outcomes.clone()).collect(),
            info_ids,
            sets,
        }
    }

    pub fn space(&self) -> ConfigSpace {
        ConfigSpace::new(self.info_ids.clone(), self.info_outcomes.iter().map(Vec::len).collect())
    }

    /// The admissible set for an information state read off `outcome_of`.
    /// Variables the set does not depend on are ignored.
    pub fn lookup(&self, outcome_of: impl FnMut(NodeId) -> usize) -> &[usize] {
        &self.sets[self.space().index_with(outcome_of)]
    }

    /// `"TEST=cheap, RESULT=NS"`, or `"(any)"` for the empty state.
    pub fn state_label(&self, index: usize) -> String {
        let assignment = self.space().assignment(index).expect("index within range");
        describe_state(&self.info, &self.info_outcomes, &assignment)
    }

    /// `"{yes, no}"`.
    pub fn set_label(&self, index: usize) -> String {
        format_set(&self.alternatives, &self.sets[index])
    }
}

pub(crate) fn describe_state(names: &[String], outcomes: &[Vec<String>], assignment: &[usize]) -> String {
    if assignment.is_empty() {
        return "(any)".to_string();
    }
    assignment
        .iter()
        .enumerate()
        .map(|(k, &o)| format!("{}={}", names[k], outcomes[k][o]))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn format_set(labels: &[String], members: &[usize]) -> String {
    let names: Vec<&str> = members.iter().map(|&i| labels[i].as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

/// Result of applying one transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct Transformed {
    pub diagram: InfluenceDiagram,
    pub step: TransformStep,
    /// Present for decision removals (including barren decisions).
    pub admissible: Option<AdmissibleSet>,
}

/// Deletes a chance or decision node without successors. Other tables are
/// untouched. A barren decision yields a single all-admissible state.
pub fn remove_barren(diagram: &InfluenceDiagram, node: NodeId) -> Result<Transformed> {
    let n = diagram.get(node).ok_or_else(|| Error::UnknownNode(format!("#{}", node.0)))?;
    if n.is_value() || !diagram.children(node).is_empty() {
        return Err(Error::NotBarren(n.name.clone()));
    }
    let mut step = TransformStep::new(StepKind::RemoveBarren(n.name.clone()));
    let admissible = if n.is_decision() {
        step.notes.push(StepNote::BarrenDecision { node: n.name.clone() });
        Some(AdmissibleSet::new(diagram, node, Vec::new(), vec![(0..n.card()).collect()]))
    } else {
        None
    };
    let mut out = diagram.clone();
    out.remove(node);
    Ok(Transformed { diagram: out, step, admissible })
}

/// Applies a step by name.
pub fn apply(diagram: &InfluenceDiagram, kind: &StepKind) -> Result<Transformed> {
    match kind {
        StepKind::RemoveChanceIntoValue(n) => remove_chance_into_value(diagram, diagram.id(n)?),
        StepKind::RemoveDecision(n) => remove_decision(diagram, diagram.id(n)?),
        StepKind::ReverseArc { from, to } => reverse_arc(diagram, diagram.id(from)?, diagram.id(to)?),
        StepKind::MarginalizeChance(n) => marginalize_chance(diagram, diagram.id(n)?),
        StepKind::RemoveBarren(n) => remove_barren(diagram, diagram.id(n)?),
    }
}

/// Scratch outcome vector indexed by node id, used to translate between the
/// configuration spaces of different tables.
pub(crate) struct Scratch(Vec<usize>);

impl Scratch {
    pub(crate) fn new(diagram: &InfluenceDiagram) -> Self {
        Scratch(vec![0; diagram.capacity()])
    }

    pub(crate) fn load(&mut self, space: &ConfigSpace, index: usize) {
        let assignment = space.assignment(index).expect("index within space");
        for (&p, &o) in space.parents().iter().zip(&assignment) {
            self.0[p.0] = o;
        }
    }

    pub(crate) fn set(&mut self, node: NodeId, outcome: usize) {
        self.0[node.0] = outcome;
    }

    pub(crate) fn index(&self, space: &ConfigSpace) -> usize {
        space.index_with(|p| self.0[p.0])
    }
}
