//! Interval influence diagram data model.
//!
//! Chance nodes carry *lower bounds* `b(x | parents)` on their conditional
//! probabilities. A distribution `p` is admitted iff `p(x | pi) >= b(x | pi)`
//! for every node, outcome and parent configuration. Upper bounds are never
//! stored: `u(x | pi) = 1 - sum_{x' != x} b(x' | pi)` is always derived from
//! the row, so the two cannot disagree.
//!
//! The value node carries an interval `[lo, hi]` per parent configuration; any
//! value function lying inside every interval is admitted.

mod config;
mod diagram;
mod spec;

pub use config::{ConfigSpace, ParentConfig};
pub use diagram::InfluenceDiagram;
pub use spec::{build_diagram, DiagramSpec, NodeSpec, NodeSpecKind};

use serde::Serialize;

/// Absolute tolerance for row-sum and interval-order checks.
pub const TOLERANCE: f64 = 1e-12;

/// Stable handle of a node. Ids follow declaration order and survive
/// transformations (removed nodes leave a hole).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.width().abs() <= TOLERANCE * scale(self.lo, self.hi)
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lo - tol && v <= self.hi + tol
    }

    /// `self` lies inside `outer`, up to `tol`.
    pub fn within(&self, outer: &Interval, tol: f64) -> bool {
        self.lo >= outer.lo - tol && self.hi <= outer.hi + tol
    }
}

/// Magnitude used to make interval comparisons relative for large values.
pub(crate) fn scale(a: f64, b: f64) -> f64 {
    1f64.max(a.abs()).max(b.abs())
}

/// Lower-bound table of a chance node: one row per parent configuration,
/// one entry per outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerCpt {
    rows: Vec<Vec<f64>>,
}

impl LowerCpt {
    pub fn new(rows: Vec<Vec<f64>>) -> Self {
        LowerCpt { rows }
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.rows[index]
    }

    pub fn into_rows(self) -> Vec<Vec<f64>> {
        self.rows
    }

    pub fn upper(&self, row: usize, outcome: usize) -> f64 {
        implied_upper(&self.rows[row], outcome)
    }

    /// Every row is a point distribution.
    pub fn is_point(&self) -> bool {
        self.rows.iter().all(|r| is_point_row(r))
    }
}

/// Interval table of the value node, one interval per parent configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalTable {
    rows: Vec<Interval>,
}

impl IntervalTable {
    pub fn new(rows: Vec<Interval>) -> Self {
        IntervalTable { rows }
    }

    pub fn rows(&self) -> &[Interval] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> Interval {
        self.rows[index]
    }

    pub fn is_point(&self) -> bool {
        self.rows.iter().all(Interval::is_degenerate)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum NodeKind {
    Chance(LowerCpt),
    Decision,
    Value(IntervalTable),
}

impl NodeKind {
    pub fn label(&self) -> &'static str {
        match self {
            NodeKind::Chance(_) => "chance",
            NodeKind::Decision => "decision",
            NodeKind::Value(_) => "value",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Node {
    pub name: String,
    /// Outcome labels (alternatives for a decision); empty for the value node.
    pub outcomes: Vec<String>,
    pub parents: Vec<NodeId>,
    pub kind: NodeKind,
}

impl Node {
    pub fn is_chance(&self) -> bool {
        matches!(self.kind, NodeKind::Chance(_))
    }

    pub fn is_decision(&self) -> bool {
        matches!(self.kind, NodeKind::Decision)
    }

    pub fn is_value(&self) -> bool {
        matches!(self.kind, NodeKind::Value(_))
    }

    pub fn cpt(&self) -> Option<&LowerCpt> {
        match &self.kind {
            NodeKind::Chance(t) => Some(t),
            _ => None,
        }
    }

    pub fn value_table(&self) -> Option<&IntervalTable> {
        match &self.kind {
            NodeKind::Value(t) => Some(t),
            _ => None,
        }
    }

    pub fn card(&self) -> usize {
        self.outcomes.len()
    }
}

/// `u(x) = 1 - sum_{x' != x} b(x')`, never below `b(x)`.
pub fn implied_upper(row: &[f64], outcome: usize) -> f64 {
    let others: f64 = row
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != outcome)
        .map(|(_, &b)| b)
        .sum();
    (1.0 - others).max(row[outcome])
}

/// Probability mass left unassigned by a row's lower bounds, `1 - sum b`.
pub fn free_mass(row: &[f64]) -> f64 {
    (1.0 - row.iter().sum::<f64>()).max(0.0)
}

pub fn is_point_row(row: &[f64]) -> bool {
    (row.iter().sum::<f64>() - 1.0).abs() <= TOLERANCE * row.len() as f64
}
