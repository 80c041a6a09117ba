use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{scale, ConfigSpace, IntervalTable, LowerCpt, Node, NodeId, NodeKind, TOLERANCE};

/// A validated interval influence diagram.
///
/// Diagrams are immutable once built; every transformation returns a new
/// diagram. Node ids are stable, so ids taken from an input diagram remain
/// meaningful for any diagram derived from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceDiagram {
    nodes: Vec<Option<Node>>,
    value: NodeId,
    decision_order: Vec<NodeId>,
    implicit_arcs: Vec<(NodeId, NodeId)>,
}

impl InfluenceDiagram {
    pub(crate) fn from_parts(
        nodes: Vec<Option<Node>>,
        value: NodeId,
        decision_order: Vec<NodeId>,
        implicit_arcs: Vec<(NodeId, NodeId)>,
    ) -> Self {
        InfluenceDiagram { nodes, value, decision_order, implicit_arcs }
    }

    pub fn get(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id.0).and_then(Option::as_ref)
    }

    /// Panics if `id` was removed; ids come from this diagram or an ancestor.
    pub fn node(&self, id: NodeId) -> &Node {
        self.get(id).unwrap_or_else(|| panic!("node {:?} is not present", id))
    }

    pub fn name(&self, id: NodeId) -> &str {
        &self.node(id).name
    }

    pub fn id(&self, name: &str) -> Result<NodeId> {
        self.ids()
            .find(|&id| self.node(id).name == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// Present node ids in declaration order.
    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_some())
            .map(|(i, _)| NodeId(i))
    }

    pub fn node_count(&self) -> usize {
        self.ids().count()
    }

    pub fn arc_count(&self) -> usize {
        self.ids().map(|id| self.node(id).parents.len()).sum()
    }

    /// Size of the id space, including removed slots.
    pub fn capacity(&self) -> usize {
        self.nodes.len()
    }

    pub fn value_id(&self) -> NodeId {
        self.value
    }

    pub fn value_table(&self) -> &IntervalTable {
        self.node(self.value).value_table().expect("value node carries a value table")
    }

    pub fn cpt(&self, id: NodeId) -> Option<&LowerCpt> {
        self.get(id).and_then(Node::cpt)
    }

    /// Remaining decisions, first to last.
    pub fn decision_order(&self) -> &[NodeId] {
        &self.decision_order
    }

    /// Information arcs added during validation so that every decision sees
    /// all earlier decisions and what they observed.
    pub fn implicit_arcs(&self) -> &[(NodeId, NodeId)] {
        &self.implicit_arcs
    }

    pub fn card(&self, id: NodeId) -> usize {
        self.node(id).card()
    }

    pub fn space(&self, parents: &[NodeId]) -> ConfigSpace {
        ConfigSpace::new(parents.to_vec(), parents.iter().map(|&p| self.card(p)).collect())
    }

    pub fn parent_space(&self, id: NodeId) -> ConfigSpace {
        self.space(&self.node(id).parents)
    }

    pub fn children(&self, id: NodeId) -> Vec<NodeId> {
        self.ids().filter(|&c| self.node(c).parents.contains(&id)).collect()
    }

    pub fn has_arc(&self, from: NodeId, to: NodeId) -> bool {
        self.get(to).is_some_and(|n| n.parents.contains(&from))
    }

    /// A non-value node without successors.
    pub fn is_barren(&self, id: NodeId) -> bool {
        !self.node(id).is_value() && self.children(id).is_empty()
    }

    pub fn has_path(&self, from: NodeId, to: NodeId) -> bool {
        self.reaches(from, to, false)
    }

    /// A directed path `from ~> to` other than the direct arc.
    pub fn has_indirect_path(&self, from: NodeId, to: NodeId) -> bool {
        self.reaches(from, to, true)
    }

    fn reaches(&self, from: NodeId, to: NodeId, skip_direct: bool) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![from];
        while let Some(n) = stack.pop() {
            for c in self.children(n) {
                if skip_direct && n == from && c == to {
                    continue;
                }
                if c == to {
                    return true;
                }
                if !seen[c.0] {
                    seen[c.0] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    /// Topological order; ties broken by declaration order. Errors on a cycle.
    pub fn topological_order(&self) -> Result<Vec<NodeId>> {
        topological_order(&self.nodes)
    }

    /// All chance rows are point distributions and all value intervals are
    /// degenerate.
    pub fn is_point(&self) -> bool {
        self.ids().all(|id| match &self.node(id).kind {
            NodeKind::Chance(t) => t.is_point(),
            NodeKind::Value(t) => t.is_point(),
            NodeKind::Decision => true,
        })
    }

    /// Checks every structural and numeric invariant of a diagram.
    pub fn validate(&self) -> Result<()> {
        self.validate_structure()?;
        self.check_decision_order()
    }

    pub(crate) fn validate_structure(&self) -> Result<()> {
        let value = self.get(self.value).ok_or(Error::NoValueNode)?;
        if !value.is_value() {
            return Err(Error::NoValueNode);
        }
        for id in self.ids() {
            let node = self.node(id);
            if node.is_value() && id != self.value {
                return Err(Error::MultipleValueNodes(value.name.clone(), node.name.clone()));
            }
            let mut seen = BTreeSet::new();
            for &p in &node.parents {
                let parent = self
                    .get(p)
                    .ok_or_else(|| Error::UnknownNode(format!("#{} (parent of `{}`)", p.0, node.name)))?;
                if parent.is_value() {
                    return Err(Error::ValueHasSuccessors(parent.name.clone()));
                }
                if p == id || !seen.insert(p) {
                    return Err(Error::ParentMismatch {
                        node: node.name.clone(),
                        detail: format!("parent `{}` listed twice or is the node itself", parent.name),
                    });
                }
            }
            if !node.is_value() {
                check_outcomes(node)?;
            }
        }
        self.topological_order()?;
        for id in self.ids() {
            check_table(self, id)?;
        }
        Ok(())
    }

    fn check_decision_order(&self) -> Result<()> {
        let mut present: Vec<NodeId> =
            self.ids().filter(|&id| self.node(id).is_decision()).collect();
        let mut listed = self.decision_order.clone();
        present.sort();
        listed.sort();
        if present != listed {
            return Err(Error::Unsolvable("decision order out of sync with the nodes".into()));
        }
        for w in self.decision_order.windows(2) {
            if !self.has_path(w[0], w[1]) {
                return Err(Error::UnorderedDecisions(
                    self.name(w[0]).to_string(),
                    self.name(w[1]).to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Orders the decisions along directed paths and adds the no-forgetting
    /// arcs: every decision observes all earlier decisions and everything they
    /// observed. Added arcs are recorded in [`Self::implicit_arcs`].
    pub(crate) fn complete_information(&mut self) -> Result<()> {
        let order: Vec<NodeId> = self
            .topological_order()?
            .into_iter()
            .filter(|&id| self.node(id).is_decision())
            .collect();
        for w in order.windows(2) {
            if !self.has_path(w[0], w[1]) {
                return Err(Error::UnorderedDecisions(
                    self.name(w[0]).to_string(),
                    self.name(w[1]).to_string(),
                ));
            }
        }
        for k in 1..order.len() {
            let prev = self.node(order[k - 1]);
            let mut required: BTreeSet<NodeId> = prev.parents.iter().copied().collect();
            required.insert(order[k - 1]);
            for r in required {
                if !self.node(order[k]).parents.contains(&r) {
                    self.node_mut(order[k]).parents.push(r);
                    self.implicit_arcs.push((r, order[k]));
                }
            }
        }
        self.decision_order = order;
        Ok(())
    }

    pub(crate) fn node_mut(&mut self, id: NodeId) -> &mut Node {
        self.nodes[id.0].as_mut().expect("node present")
    }

    pub(crate) fn remove(&mut self, id: NodeId) -> Node {
        let node = self.nodes[id.0].take().expect("node present");
        for slot in self.nodes.iter_mut().flatten() {
            slot.parents.retain(|&p| p != id);
        }
        self.decision_order.retain(|&d| d != id);
        self.implicit_arcs.retain(|&(a, b)| a != id && b != id);
        node
    }
}

pub(crate) fn topological_order(nodes: &[Option<Node>]) -> Result<Vec<NodeId>> {
    let mut indegree: Vec<usize> =
        nodes.iter().map(|n| n.as_ref().map_or(0, |n| n.parents.len())).collect();
    let mut done = vec![false; nodes.len()];
    let mut order = Vec::new();
    loop {
        let next = (0..nodes.len()).find(|&i| nodes[i].is_some() && !done[i] && indegree[i] == 0);
        let Some(i) = next else { break };
        done[i] = true;
        order.push(NodeId(i));
        for (j, n) in nodes.iter().enumerate() {
            if let Some(n) = n {
                indegree[j] -= n.parents.iter().filter(|p| p.0 == i).count();
            }
        }
    }
    if let Some(i) = (0..nodes.len()).find(|&i| nodes[i].is_some() && !done[i]) {
        return Err(Error::CycleDetected(nodes[i].as_ref().unwrap().name.clone()));
    }
    Ok(order)
}

fn check_outcomes(node: &Node) -> Result<()> {
    if node.outcomes.len() < 2 {
        return Err(Error::TooFewOutcomes(node.name.clone()));
    }
    let mut seen = BTreeSet::new();
    for o in &node.outcomes {
        if !seen.insert(o) {
            return Err(Error::DuplicateOutcome { node: node.name.clone(), outcome: o.clone() });
        }
    }
    Ok(())
}

fn check_table(diagram: &InfluenceDiagram, id: NodeId) -> Result<()> {
    let node = diagram.node(id);
    let expected_rows = diagram.parent_space(id).size();
    let mismatch = |detail: String| Error::ParentMismatch { node: node.name.clone(), detail };
    match &node.kind {
        NodeKind::Decision => Ok(()),
        NodeKind::Chance(cpt) => {
            if cpt.rows().len() != expected_rows {
                return Err(mismatch(format!(
                    "table has {} rows, parents require {}",
                    cpt.rows().len(),
                    expected_rows
                )));
            }
            for (r, row) in cpt.rows().iter().enumerate() {
                if row.len() != node.card() {
                    return Err(mismatch(format!(
                        "row {} has {} entries, expected {}",
                        r,
                        row.len(),
                        node.card()
                    )));
                }
                if let Some(&value) = row.iter().find(|b| !b.is_finite() || **b < 0.0) {
                    return Err(Error::NegativeBound { node: node.name.clone(), row: r, value });
                }
                let sum: f64 = row.iter().sum();
                if sum > 1.0 + TOLERANCE * row.len() as f64 {
                    return Err(Error::RowSumExceedsOne { node: node.name.clone(), row: r, sum });
                }
            }
            Ok(())
        }
        NodeKind::Value(table) => {
            if table.rows().len() != expected_rows {
                return Err(mismatch(format!(
                    "table has {} rows, parents require {}",
                    table.rows().len(),
                    expected_rows
                )));
            }
            for (r, i) in table.rows().iter().enumerate() {
                let ok = i.lo.is_finite() && i.hi.is_finite() && i.lo <= i.hi + TOLERANCE * scale(i.lo, i.hi);
                if !ok {
                    return Err(Error::IntervalInverted { node: node.name.clone(), row: r, lo: i.lo, hi: i.hi });
                }
            }
            Ok(())
        }
    }
}
