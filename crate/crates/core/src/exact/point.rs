use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ConfigSpace, InfluenceDiagram, NodeId, NodeKind, TOLERANCE};
use crate::transforms::bounds::strictly_below;

/// One admitted member of a diagram's constraint sets: a point distribution
/// per chance row and a single value per value row.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRealization {
    pub chance: BTreeMap<NodeId, Vec<Vec<f64>>>,
    pub value: Vec<f64>,
}

impl PointRealization {
    /// The lower bounds and interval low ends, read as a point. Only a member
    /// when the diagram is point-valued.
    pub fn from_lower(diagram: &InfluenceDiagram) -> Self {
        let chance = diagram
            .ids()
            .filter_map(|id| diagram.cpt(id).map(|t| (id, t.rows().to_vec())))
            .collect();
        let value = diagram.value_table().rows().iter().map(|i| i.lo).collect();
        PointRealization { chance, value }
    }

    /// Checks shape and membership (`p >= b`, `sum p = 1`, value inside its
    /// interval) within `1e-12`.
    pub fn check(&self, diagram: &InfluenceDiagram) -> Result<()> {
        let mismatch = |m: String| Err(Error::ShapeMismatch(m));
        for id in diagram.ids() {
            let node = diagram.node(id);
            match &node.kind {
                NodeKind::Chance(cpt) => {
                    let Some(rows) = self.chance.get(&id) else {
                        return mismatch(format!("no rows for `{}`", node.name));
                    };
                    if rows.len() != cpt.rows().len() {
                        return mismatch(format!("`{}` has {} rows, expected {}", node.name, rows.len(), cpt.rows().len()));
                    }
                    for (r, (p, b)) in rows.iter().zip(cpt.rows()).enumerate() {
                        let member = p.len() == b.len()
                            && p.iter().zip(b).all(|(p, b)| *p >= b - TOLERANCE)
                            && (p.iter().sum::<f64>() - 1.0).abs() <= TOLERANCE * p.len() as f64;
                        if !member {
                            return mismatch(format!("`{}` row {} is not an admitted distribution", node.name, r));
                        }
                    }
                }
                NodeKind::Value(table) => {
                    if self.value.len() != table.rows().len() {
                        return mismatch(format!("{} values for {} value rows", self.value.len(), table.rows().len()));
                    }
                    for (r, (v, i)) in self.value.iter().zip(table.rows()).enumerate() {
                        if !i.contains(*v, TOLERANCE * crate::model::scale(i.lo, i.hi)) {
                            return mismatch(format!("value row {} is outside its interval", r));
                        }
                    }
                }
                NodeKind::Decision => {}
            }
        }
        if let Some(id) = self.chance.keys().find(|&&id| diagram.cpt(id).is_none()) {
            return mismatch(format!("rows for unknown chance node #{}", id.0));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyEntry {
    /// All alternatives within the tie tolerance of the best.
    pub optimal: Vec<usize>,
    /// Lowest-index optimal alternative.
    pub chosen: usize,
    /// Probability of reaching this information state given the decisions it
    /// records. Zero-weight states have every alternative optimal.
    pub weight: f64,
}

/// Optimal choices of one decision for every configuration of its full
/// information set (its parents, including no-forgetting arcs).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointPolicy {
    pub decision: String,
    #[serde(skip)]
    pub decision_id: NodeId,
    pub info: Vec<String>,
    #[serde(skip)]
    pub info_ids: Vec<NodeId>,
    #[serde(skip)]
    pub info_cards: Vec<usize>,
    #[serde(skip)]
    pub info_outcomes: Vec<Vec<String>>,
    pub entries: Vec<PolicyEntry>,
}

impl PointPolicy {
    pub fn space(&self) -> ConfigSpace {
        ConfigSpace::new(self.info_ids.clone(), self.info_cards.clone())
    }

    pub fn state_label(&self, index: usize) -> String {
        let assignment = self.space().assignment(index).expect("index within range");
        crate::transforms::describe_state(&self.info, &self.info_outcomes, &assignment)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSolution {
    pub expected_value: f64,
    /// One policy per decision, first decision first.
    pub policies: Vec<PointPolicy>,
}

impl PointSolution {
    pub fn policy(&self, decision: &str) -> Option<&PointPolicy> {
        self.policies.iter().find(|p| p.decision == decision)
    }
}

/// Variable of the sum-max elimination sequence.
enum Slot {
    Chance(NodeId),
    Decision(usize),
}

struct Rollout<'a> {
    diagram: &'a InfluenceDiagram,
    realization: &'a PointRealization,
    sequence: Vec<Slot>,
    chance: Vec<(NodeId, ConfigSpace)>,
    value_space: ConfigSpace,
    policies: Vec<PointPolicy>,
    spaces: Vec<ConfigSpace>,
    outcome: Vec<usize>,
}

impl Rollout<'_> {
    /// Returns (sum of probability-weighted value, probability mass) of the
    /// remaining sequence under the current partial assignment.
    fn eval(&mut self, pos: usize) -> (f64, f64) {
        if pos == self.sequence.len() {
            return self.leaf();
        }
        match self.sequence[pos] {
            Slot::Chance(id) => {
                let (mut value, mut mass) = (0.0, 0.0);
                for o in 0..self.diagram.card(id) {
                    self.outcome[id.0] = o;
                    let (v, m) = self.eval(pos + 1);
                    value += v;
                    mass += m;
                }
                (value, mass)
            }
            Slot::Decision(k) => {
                let id = self.policies[k].decision_id;
                let results: Vec<(f64, f64)> = (0..self.diagram.card(id))
                    .map(|a| {
                        self.outcome[id.0] = a;
                        self.eval(pos + 1)
                    })
                    .collect();
                let mass = results[0].1;
                let state = self.spaces[k].index_with(|p| self.outcome[p.0]);
                let entry = if mass > 0.0 {
                    let eu: Vec<f64> = results.iter().map(|(v, m)| v / m).collect();
                    let best = eu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let optimal: Vec<usize> = (0..eu.len()).filter(|&a| !strictly_below(eu[a], best)).collect();
                    PolicyEntry { chosen: optimal[0], optimal, weight: mass }
                } else {
                    PolicyEntry { optimal: (0..results.len()).collect(), chosen: 0, weight: 0.0 }
                };
                let result = results[entry.chosen];
                self.policies[k].entries[state] = entry;
                result
            }
        }
    }

    fn leaf(&self) -> (f64, f64) {
        let mut weight = 1.0;
        for (id, space) in &self.chance {
            let row = space.index_with(|p| self.outcome[p.0]);
            weight *= self.realization.chance[id][row][self.outcome[id.0]];
            if weight == 0.0 {
                return (0.0, 0.0);
            }
        }
        let v = self.realization.value[self.value_space.index_with(|p| self.outcome[p.0])];
        (weight * v, weight)
    }
}

/// Classical maximum expected value of a point realization and the optimal
/// policy of every decision, by sum-max elimination over the joint
/// distribution in information order.
pub fn point_solve(diagram: &InfluenceDiagram, realization: &PointRealization) -> Result<PointSolution> {
    realization.check(diagram)?;
    Ok(solve_member(diagram, realization))
}

/// [`point_solve`] for realizations already known to be members.
pub(crate) fn solve_member(diagram: &InfluenceDiagram, realization: &PointRealization) -> PointSolution {
    let decisions = diagram.decision_order().to_vec();
    let chance_ids: Vec<NodeId> = diagram.ids().filter(|&id| diagram.node(id).is_chance()).collect();
    let mut placed = vec![false; diagram.capacity()];
    let mut sequence = Vec::new();
    for (k, &d) in decisions.iter().enumerate() {
        for &p in &diagram.node(d).parents {
            if diagram.node(p).is_chance() && !placed[p.0] {
                placed[p.0] = true;
                sequence.push(Slot::Chance(p));
            }
        }
        sequence.push(Slot::Decision(k));
    }
    for &c in &chance_ids {
        if !placed[c.0] {
            sequence.push(Slot::Chance(c));
        }
    }

    let spaces: Vec<ConfigSpace> = decisions.iter().map(|&d| diagram.parent_space(d)).collect();
    let policies = decisions
        .iter()
        .zip(&spaces)
        .map(|(&d, space)| PointPolicy {
            decision: diagram.name(d).to_string(),
            decision_id: d,
            info: space.parents().iter().map(|&p| diagram.name(p).to_string()).collect(),
            info_ids: space.parents().to_vec(),
            info_cards: space.cards().to_vec(),
            info_outcomes: space.parents().iter().map(|&p| diagram.node(p).outcomes.clone()).collect(),
            entries: vec![PolicyEntry { optimal: Vec::new(), chosen: 0, weight: 0.0 }; space.size()],
        })
        .collect();
    let mut rollout = Rollout {
        diagram,
        realization,
        sequence,
        chance: chance_ids.iter().map(|&c| (c, diagram.parent_space(c))).collect(),
        value_space: diagram.parent_space(diagram.value_id()),
        policies,
        spaces,
        outcome: vec![0; diagram.capacity()],
    };
    let (expected_value, _) = rollout.eval(0);
    PointSolution { expected_value, policies: rollout.policies }
}
