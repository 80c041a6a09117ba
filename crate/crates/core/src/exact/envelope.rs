use rayon::prelude::*;
use serde::Serialize;

use super::point::{solve_member, PointRealization, PointSolution};
use crate::error::{Error, Result};
use crate::model::{free_mass, is_point_row, InfluenceDiagram, Interval, NodeId};

pub const DEFAULT_CAP: u128 = 10_000_000;

/// Stated in every envelope report: the envelope is a vertex search, not a
/// global optimization over the credal sets.
pub const ENVELOPE_CAVEAT: &str =
    "vertex enumeration can miss interior extrema of the optimal expected value";

/// The vertices `b + (1 - sum b) e_j` of `{p >= b, sum p = 1}`, one per
/// outcome, collapsed to `b` itself when the row has no free mass.
pub fn vertex_realizations(row: &[f64]) -> Vec<Vec<f64>> {
    let free = free_mass(row);
    if is_point_row(row) || free == 0.0 {
        return vec![row.to_vec()];
    }
    (0..row.len())
        .map(|j| {
            let mut p = row.to_vec();
            p[j] += free;
            p
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeOptions {
    pub include_value_box: bool,
    pub cap: u128,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        EnvelopeOptions { include_value_box: false, cap: DEFAULT_CAP, jobs: None }
    }
}

/// Union of the optimal alternatives found across all configurations, per
/// information state of one decision. `None` marks states that no
/// configuration reaches with positive probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyUnion {
    pub decision: String,
    pub alternatives: Vec<String>,
    pub info: Vec<String>,
    #[serde(skip)]
    pub info_ids: Vec<NodeId>,
    #[serde(skip)]
    pub info_cards: Vec<usize>,
    #[serde(skip)]
    pub info_outcomes: Vec<Vec<String>>,
    pub sets: Vec<Option<Vec<usize>>>,
}

impl PolicyUnion {
    pub fn state_label(&self, index: usize) -> String {
        let space = crate::model::ConfigSpace::new(self.info_ids.clone(), self.info_cards.clone());
        let assignment = space.assignment(index).expect("index within range");
        crate::transforms::describe_state(&self.info, &self.info_outcomes, &assignment)
    }
}

/// Vertex count of one enumerated row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariedRow {
    pub node: String,
    pub row: usize,
    pub vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub envelope: Interval,
    pub admissible_union: Vec<PolicyUnion>,
    pub configurations_evaluated: u64,
    pub rows: Vec<VariedRow>,
    pub caveat: &'static str,
}

impl EnvelopeReport {
    pub fn union(&self, decision: &str) -> Option<&PolicyUnion> {
        self.admissible_union.iter().find(|u| u.decision == decision)
    }
}

enum Dimension {
    Chance { node: NodeId, row: usize, vertices: Vec<Vec<f64>> },
    Value { row: usize, corners: Vec<f64> },
}

impl Dimension {
    fn len(&self) -> usize {
        match self {
            Dimension::Chance { vertices, .. } => vertices.len(),
            Dimension::Value { corners, .. } => corners.len(),
        }
    }

    fn apply(&self, choice: usize, r: &mut PointRealization) {
        match self {
            Dimension::Chance { node, row, vertices } => {
                r.chance.get_mut(node).expect("varied node has rows")[*row].clone_from(&vertices[choice]);
            }
            Dimension::Value { row, corners } => r.value[*row] = corners[choice],
        }
    }
}

/// Running min, max and policy union over a batch of configurations.
#[derive(Clone)]
struct Accumulator {
    min: f64,
    max: f64,
    /// Per decision, per information state: membership flags, or `None`
    /// while unreached.
    union: Vec<Vec<Option<Vec<bool>>>>,
    cards: Vec<usize>,
}

impl Accumulator {
    fn new(shape: &[(usize, usize)]) -> Self {
        Accumulator {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            union: shape.iter().map(|&(states, _)| vec![None; states]).collect(),
            cards: shape.iter().map(|&(_, card)| card).collect(),
        }
    }

    fn add(mut self, solution: &PointSolution) -> Self {
        self.min = self.min.min(solution.expected_value);
        self.max = self.max.max(solution.expected_value);
        for ((sets, policy), &card) in self.union.iter_mut().zip(&solution.policies).zip(&self.cards) {
            for (slot, entry) in sets.iter_mut().zip(&policy.entries) {
                if entry.weight > 0.0 {
                    let flags = slot.get_or_insert_with(|| vec![false; card]);
                    for &a in &entry.optimal {
                        flags[a] = true;
                    }
                }
            }
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
        for (mine, theirs) in self.union.iter_mut().zip(other.union) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                match (a.as_mut(), b) {
                    (_, None) => {}
                    (None, Some(b)) => *a = Some(b),
                    (Some(a), Some(b)) => {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x |= y;
                        }
                    }
                }
            }
        }
        self
    }
}

/// Enumerates every combination of row vertices of the varied chance nodes
/// (and value-box corners when requested), solves each point diagram, and
/// returns the envelope of optimal expected values and the union of optimal
/// policies.
pub fn exact_envelope(diagram: &InfluenceDiagram, varied: &[NodeId], options: &EnvelopeOptions) -> Result<EnvelopeReport> {
    for &id in varied {
        let node = diagram.get(id).ok_or_else(|| Error::UnknownNode(format!("#{}", id.0)))?;
        if !node.is_chance() {
            return Err(Error::WrongKind { node: node.name.clone(), expected: "chance" });
        }
    }
    let mut dims = Vec::new();
    let mut rows = Vec::new();
    for id in diagram.ids() {
        let Some(cpt) = diagram.cpt(id) else { continue };
        let name = diagram.name(id);
        if varied.contains(&id) {
            for (r, row) in cpt.rows().iter().enumerate() {
                let vertices = vertex_realizations(row);
                rows.push(VariedRow { node: name.to_string(), row: r, vertices: vertices.len() });
                dims.push(Dimension::Chance { node: id, row: r, vertices });
            }
        } else if !cpt.is_point() {
            return Err(Error::NonPointResidual(name.to_string()));
        }
    }
    let values = diagram.value_table();
    if options.include_value_box {
        for (r, i) in values.rows().iter().enumerate() {
            let corners = if i.is_degenerate() { vec![i.lo] } else { vec![i.lo, i.hi] };
            if corners.len() > 1 {
                rows.push(VariedRow { node: diagram.name(diagram.value_id()).to_string(), row: r, vertices: 2 });
            }
            dims.push(Dimension::Value { row: r, corners });
        }
    } else if !values.is_point() {
        return Err(Error::NonPointResidual(diagram.name(diagram.value_id()).to_string()));
    }

    let count = dims.iter().try_fold(1u128, |acc, d| acc.checked_mul(d.len() as u128)).unwrap_or(u128::MAX);
    if count > options.cap {
        return Err(Error::CombinatorialLimitExceeded { count, cap: options.cap });
    }
    let count = u64::try_from(count).map_err(|_| Error::CombinatorialLimitExceeded { count, cap: options.cap })?;

    let base = PointRealization::from_lower(diagram);
    let template = solve_member(diagram, &base);
    let shape: Vec<(usize, usize)> =
        template.policies.iter().map(|p| (p.entries.len(), diagram.card(p.decision_id))).collect();

    let evaluate = |index: u64| {
        let mut r = base.clone();
        let mut rest = index;
        for d in dims.iter().rev() {
            let n = d.len() as u64;
            d.apply((rest % n) as usize, &mut r);
            rest /= n;
        }
        solve_member(diagram, &r)
    };
    let run = || {
        (0..count)
            .into_par_iter()
            .fold(|| Accumulator::new(&shape), |acc, i| acc.add(&evaluate(i)))
            .reduce(|| Accumulator::new(&shape), Accumulator::merge)
    };
    let acc = match options.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Unsolvable(format!("thread pool: {}", e)))?
            .install(run),
        None => run(),
    };

    let admissible_union = template
        .policies
        .iter()
        .zip(acc.union)
        .map(|(p, sets)| PolicyUnion {
            decision: p.decision.clone(),
            alternatives: diagram.node(p.decision_id).outcomes.clone(),
            info: p.info.clone(),
            info_ids: p.info_ids.clone(),
            info_cards: p.info_cards.clone(),
            info_outcomes: p.info_outcomes.clone(),
            sets: sets
                .into_iter()
                .map(|s| s.map(|flags| flags.iter().enumerate().filter(|(_, &f)| f).map(|(a, _)| a).collect()))
                .collect(),
        })
        .collect();
    Ok(EnvelopeReport {
        envelope: Interval::new(acc.min, acc.max),
        admissible_union,
        configurations_evaluated: count,
        rows,
        caveat: ENVELOPE_CAVEAT,
    })
}
