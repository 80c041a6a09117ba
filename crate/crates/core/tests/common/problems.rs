//! One transformation, split into independent per-row problems.
//!
//! Each output row of a transformed diagram is the answer to a small problem
//! over input rows. Extraction maps configurations by node id, so it does not
//! share indexing code paths with the transforms beyond `index_with`.

use iid::exact::PointRealization;
use iid::model::{InfluenceDiagram, Interval, NodeId};
use iid::transforms::{StepKind, StepNote, Transformed};

/// Where input rows come from: the diagram's bounds or a point member.
pub trait Source {
    fn row(&self, node: NodeId, index: usize) -> Vec<f64>;
    fn value(&self, index: usize) -> (f64, f64);
}

impl Source for InfluenceDiagram {
    fn row(&self, node: NodeId, index: usize) -> Vec<f64> {
        self.cpt(node).expect("chance").row(index).to_vec()
    }

    fn value(&self, index: usize) -> (f64, f64) {
        let i = self.value_table().row(index);
        (i.lo, i.hi)
    }
}

impl Source for PointRealization {
    fn row(&self, node: NodeId, index: usize) -> Vec<f64> {
        self.chance[&node][index].clone()
    }

    fn value(&self, index: usize) -> (f64, f64) {
        (self.value[index], self.value[index])
    }
}

#[derive(Debug, Clone)]
pub enum Problem {
    /// Expected value of the value node over `Y`'s row `lower`.
    Expectation { row: usize, lower: Vec<f64>, values: Vec<(f64, f64)>, out: Interval },
    /// Lower bounds of `X` after mixing out `Y`: `cond[i]` is `X`'s row given
    /// `y_i`.
    Marginal { row: usize, prior: Vec<f64>, cond: Vec<Vec<f64>>, out: Vec<f64> },
    /// Lower bounds of `Y` given `X = x` after reversal.
    Posterior { row: usize, prior: Vec<f64>, cond: Vec<Vec<f64>>, x: usize, out: Vec<f64>, indeterminate: bool },
    /// The optimized value over the decision's alternatives.
    Decision { row: usize, values: Vec<(f64, f64)>, out: Interval, set: Vec<usize> },
}

struct Assignment(Vec<usize>);

impl Assignment {
    fn load(capacity: usize, diagram: &InfluenceDiagram, node: NodeId, index: usize) -> Self {
        let space = diagram.parent_space(node);
        let values = space.assignment(index).expect("index in range");
        let mut a = vec![usize::MAX; capacity];
        for (&p, v) in space.parents().iter().zip(values) {
            a[p.0] = v;
        }
        Assignment(a)
    }

    fn index(&self, diagram: &InfluenceDiagram, node: NodeId) -> usize {
        diagram.parent_space(node).index_with(|p| {
            let v = self.0[p.0];
            assert!(v != usize::MAX, "unassigned parent {}", diagram.name(p));
            v
        })
    }
}

fn rows(diagram: &InfluenceDiagram, node: NodeId) -> usize {
    diagram.parent_space(node).size()
}

/// Every output row of `out` as a problem over `src`, which supplies the
/// rows of `input`.
pub fn problems(input: &InfluenceDiagram, out: &Transformed, src: &impl Source) -> Vec<Problem> {
    let t = &out.diagram;
    let cap = input.capacity();
    let v = input.value_id();
    let mut list = Vec::new();
    match &out.step.kind {
        StepKind::RemoveChanceIntoValue(name) => {
            let y = input.id(name).unwrap();
            for j in 0..rows(t, v) {
                let mut a = Assignment::load(cap, t, v, j);
                let lower = src.row(y, a.index(input, y));
                let values = (0..input.card(y))
                    .map(|o| {
                        a.0[y.0] = o;
                        src.value(a.index(input, v))
                    })
                    .collect();
                list.push(Problem::Expectation { row: j, lower, values, out: t.value_table().row(j) });
            }
        }
        StepKind::RemoveDecision(name) => {
            let d = input.id(name).unwrap();
            let sets = &out.admissible.as_ref().expect("admissible sets").sets;
            for (j, set) in sets.iter().enumerate() {
                let mut a = Assignment::load(cap, t, v, j);
                let values = (0..input.card(d))
                    .map(|o| {
                        a.0[d.0] = o;
                        src.value(a.index(input, v))
                    })
                    .collect();
                list.push(Problem::Decision { row: j, values, out: t.value_table().row(j), set: set.clone() });
            }
        }
        StepKind::MarginalizeChance(name) => {
            let y = input.id(name).unwrap();
            let x = input.children(y)[0];
            marginal_problems(input, t, src, y, x, &mut list);
        }
        StepKind::ReverseArc { from, to } => {
            let (y, x) = (input.id(from).unwrap(), input.id(to).unwrap());
            marginal_problems(input, t, src, y, x, &mut list);
            let indeterminate: Vec<usize> = out
                .step
                .notes
                .iter()
                .filter_map(|n| match n {
                    StepNote::Indeterminate { row, .. } => Some(*row),
                    _ => None,
                })
                .collect();
            for j in 0..rows(t, y) {
                let mut a = Assignment::load(cap, t, y, j);
                let prior = src.row(y, a.index(input, y));
                let xo = a.0[x.0];
                let cond = (0..input.card(y))
                    .map(|o| {
                        a.0[y.0] = o;
                        src.row(x, a.index(input, x))
                    })
                    .collect();
                let out_row = t.cpt(y).unwrap().row(j).to_vec();
                list.push(Problem::Posterior {
                    row: j,
                    prior,
                    cond,
                    x: xo,
                    out: out_row,
                    indeterminate: indeterminate.contains(&j),
                });
            }
        }
        StepKind::RemoveBarren(_) => {}
    }
    list
}

fn marginal_problems(
    input: &InfluenceDiagram,
    t: &InfluenceDiagram,
    src: &impl Source,
    y: NodeId,
    x: NodeId,
    list: &mut Vec<Problem>,
) {
    for j in 0..rows(t, x) {
        let mut a = Assignment::load(input.capacity(), t, x, j);
        let prior = src.row(y, a.index(input, y));
        let cond = (0..input.card(y))
            .map(|o| {
                a.0[y.0] = o;
                src.row(x, a.index(input, x))
            })
            .collect();
        list.push(Problem::Marginal { row: j, prior, cond, out: t.cpt(x).unwrap().row(j).to_vec() });
    }
}
