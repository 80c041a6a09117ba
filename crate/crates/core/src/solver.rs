//! Reduction of a diagram to its bare value node.
//!
//! Rules, tried in order, ties broken by declaration order:
//!
//! 1. remove any barren node;
//! 2. remove the last decision once every other parent of the value node is
//!    observed by it;
//! 3. remove a chance node whose only successor is the value node;
//! 4. fold a chance node into its single chance successor;
//! 5. take the first unobserved chance parent of the value node that has
//!    chance successors and reverse the arc to the topologically first one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{InfluenceDiagram, Interval, NodeId};
use crate::transforms::{apply, AdmissibleSet, StepKind, StepNote, TransformStep};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    /// Expected-value interval of the whole diagram.
    pub final_interval: Interval,
    /// One entry per decision of the input, first decision first.
    pub policies: Vec<AdmissibleSet>,
    pub steps: Vec<TransformStep>,
    /// Notes of all steps, in step order.
    pub notes: Vec<StepNote>,
}

impl SolveReport {
    pub fn policy(&self, decision: &str) -> Option<&AdmissibleSet> {
        self.policies.iter().find(|p| p.decision == decision)
    }

    pub fn reversals(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s.kind, StepKind::ReverseArc { .. })).count()
    }

    pub fn removals(&self) -> usize {
        self.steps.len() - self.reversals()
    }
}

/// The step [`solve`] would apply next.
pub fn next_step(diagram: &InfluenceDiagram) -> Result<TransformStep> {
    next_kind(diagram).map(|kind| TransformStep { kind, notes: Vec::new() })
}

fn next_kind(diagram: &InfluenceDiagram) -> Result<StepKind> {
    let v = diagram.value_id();
    let ids: Vec<NodeId> = diagram.ids().filter(|&id| id != v).collect();
    if ids.is_empty() {
        return Err(Error::Unsolvable("only the value node remains".into()));
    }
    let name = |id: NodeId| diagram.name(id).to_string();

    if let Some(&b) = ids.iter().find(|&&id| diagram.is_barren(id)) {
        return Ok(StepKind::RemoveBarren(name(b)));
    }

    let value_parents = &diagram.node(v).parents;
    if let Some(&last) = diagram.decision_order().last() {
        let observed = &diagram.node(last).parents;
        if value_parents.contains(&last) && value_parents.iter().all(|p| *p == last || observed.contains(p)) {
            return Ok(StepKind::RemoveDecision(name(last)));
        }
    }

    let chance: Vec<NodeId> = ids.iter().copied().filter(|&id| diagram.node(id).is_chance()).collect();
    if let Some(&c) = chance.iter().find(|&&c| diagram.children(c) == [v]) {
        return Ok(StepKind::RemoveChanceIntoValue(name(c)));
    }

    for &c in &chance {
        if let [x] = diagram.children(c)[..] {
            if diagram.node(x).is_chance() {
                return Ok(StepKind::MarginalizeChance(name(c)));
            }
        }
    }

    let order = diagram.topological_order()?;
    for &y in &chance {
        if !value_parents.contains(&y) {
            continue;
        }
        let children = diagram.children(y);
        if children.iter().any(|&c| diagram.node(c).is_decision()) {
            continue;
        }
        let target = order
            .iter()
            .copied()
            .find(|&c| children.contains(&c) && diagram.node(c).is_chance());
        if let Some(x) = target {
            return Ok(StepKind::ReverseArc { from: name(y), to: name(x) });
        }
    }

    Err(Error::Unsolvable(format!("{} nodes remain and no rule applies", ids.len())))
}

/// Reduces the diagram to its value node, returning the expected-value
/// interval, admissible sets for every decision, and the step log.
pub fn solve(diagram: &InfluenceDiagram) -> Result<SolveReport> {
    let decision_order: Vec<String> =
        diagram.decision_order().iter().map(|&d| diagram.name(d).to_string()).collect();
    let limit = 4 * (diagram.node_count() + diagram.arc_count()).pow(2) + 16;
    let mut current = diagram.clone();
    let mut steps = Vec::new();
    let mut policies = Vec::new();
    while current.node_count() > 1 {
        if steps.len() > limit {
            return Err(Error::Unsolvable(format!("no progress after {} steps", steps.len())));
        }
        let kind = next_kind(&current)?;
        let t = apply(&current, &kind)?;
        if let Some(a) = t.admissible {
            policies.push(a);
        }
        steps.push(t.step);
        current = t.diagram;
    }
    let table = current.value_table();
    debug_assert_eq!(table.rows().len(), 1);
    policies.sort_by_key(|p| decision_order.iter().position(|d| *d == p.decision));
    let notes = steps.iter().flat_map(|s| s.notes.iter().cloned()).collect();
    Ok(SolveReport { final_interval: table.row(0), policies, steps, notes })
}
