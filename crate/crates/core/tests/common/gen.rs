//! Seeded random diagrams.

use std::collections::HashMap;

use iid::model::{DiagramSpec, InfluenceDiagram, NodeId, NodeSpecKind};
use iid::sensitivity::widen_nodes;
use iid::transforms::StepKind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// How table entries are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Style {
    /// Lower-bound rows of random range (some point rows, some zero
    /// entries) and value intervals (some degenerate).
    Imprecise,
    /// Like `Imprecise` on a coarse grid, so maximizers and minimizers tie.
    ImpreciseTies,
    /// Point rows and degenerate values.
    Point,
    /// Point rows on a quarter grid and small integer values, so expected
    /// utilities tie exactly.
    PointTies,
}

impl Style {
    fn is_point(self) -> bool {
        matches!(self, Style::Point | Style::PointTies)
    }

    fn coarse(self) -> bool {
        matches!(self, Style::ImpreciseTies | Style::PointTies)
    }
}

/// Uniform draw from the probability simplex.
pub fn simplex(rng: &mut TestRng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Point distribution with entries in multiples of 1/4.
pub fn quarter_row(rng: &mut TestRng, k: usize) -> Vec<f64> {
    let mut row = vec![0.0; k];
    for _ in 0..4 {
        row[rng.gen_range(0..k)] += 0.25;
    }
    row
}

pub fn point_row(rng: &mut TestRng, k: usize, style: Style) -> Vec<f64> {
    if style.coarse() {
        return quarter_row(rng, k);
    }
    let mut p = simplex(rng, k);
    if rng.gen_bool(0.15) {
        p[rng.gen_range(0..k)] = 0.0;
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
    }
    p
}

pub fn lower_row(rng: &mut TestRng, k: usize, style: Style) -> Vec<f64> {
    let p = point_row(rng, k, style);
    if style.is_point() {
        return p;
    }
    let range = if style.coarse() {
        *[0.0, 0.25, 0.5].choose(rng).unwrap()
    } else if rng.gen_bool(0.15) {
        0.0
    } else {
        rng.gen_range(0.02..0.5)
    };
    p.iter().map(|x| (1.0 - range) * x).collect()
}

pub fn value_interval(rng: &mut TestRng, style: Style) -> (f64, f64) {
    match style {
        Style::Point => {
            let v = rng.gen_range(-10.0..10.0);
            (v, v)
        }
        Style::PointTies => {
            let v = rng.gen_range(0..=4) as f64;
            (v, v)
        }
        Style::ImpreciseTies => {
            let a = rng.gen_range(0..=4) as f64;
            let b = rng.gen_range(0..=4) as f64;
            (a.min(b), a.max(b))
        }
        Style::Imprecise => {
            let lo = rng.gen_range(-10.0..10.0);
            let width = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..6.0) };
            (lo, lo + width)
        }
    }
}

/// Incremental diagram assembly with random tables.
pub struct Builder<'r> {
    rng: &'r mut TestRng,
    style: Style,
    spec: DiagramSpec,
    cards: HashMap<String, usize>,
}

impl<'r> Builder<'r> {
    pub fn new(rng: &'r mut TestRng, style: Style) -> Self {
        Builder { rng, style, spec: DiagramSpec::new(), cards: HashMap::new() }
    }

    fn rows(&self, parents: &[&str]) -> usize {
        parents.iter().map(|p| self.cards[*p]).product()
    }

    fn labels(prefix: &str, card: usize) -> Vec<String> {
        (0..card).map(|i| format!("{}{}", prefix, i)).collect()
    }

    pub fn chance(&mut self, name: &str, card: usize, parents: &[&str]) -> &mut Self {
        let rows = (0..self.rows(parents)).map(|_| lower_row(self.rng, card, self.style)).collect();
        let labels = Self::labels(&name.to_lowercase(), card);
        let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
        self.spec = std::mem::take(&mut self.spec).chance(name, &labels, parents, rows);
        self.cards.insert(name.to_string(), card);
        self
    }

    pub fn decision(&mut self, name: &str, card: usize, parents: &[&str]) -> &mut Self {
        let labels = Self::labels(&name.to_lowercase(), card);
        let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
        self.spec = std::mem::take(&mut self.spec).decision(name, &labels, parents);
        self.cards.insert(name.to_string(), card);
        self
    }

    pub fn value(&mut self, parents: &[&str]) -> &mut Self {
        let rows = (0..self.rows(parents)).map(|_| value_interval(self.rng, self.style)).collect();
        self.spec = std::mem::take(&mut self.spec).value("V", parents, rows);
        self
    }

    pub fn card(&mut self) -> usize {
        self.rng.gen_range(2..=3)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Each of `from` independently with probability `p`.
    pub fn subset<'a>(&mut self, from: &[&'a str], p: f64) -> Vec<&'a str> {
        from.iter().copied().filter(|_| self.rng.gen_bool(p)).collect()
    }

    pub fn shuffle(&mut self, xs: &mut [&str]) {
        xs.shuffle(self.rng);
    }

    pub fn build(&self) -> InfluenceDiagram {
        self.spec.build().expect("generated diagram is valid")
    }
}

/// Lowers one lower-bound entry or widens one value interval.
pub fn weaken(d: &InfluenceDiagram, rng: &mut TestRng) -> InfluenceDiagram {
    let mut spec = d.to_spec();
    let chance: Vec<usize> =
        (0..spec.nodes.len()).filter(|&i| matches!(spec.nodes[i].kind, NodeSpecKind::Chance { .. })).collect();
    let target = if !chance.is_empty() && rng.gen_bool(0.6) {
        chance[rng.gen_range(0..chance.len())]
    } else {
        spec.nodes.iter().position(|n| matches!(n.kind, NodeSpecKind::Value { .. })).unwrap()
    };
    match &mut spec.nodes[target].kind {
        NodeSpecKind::Chance { rows, .. } => {
            let r = rng.gen_range(0..rows.len());
            let o = rng.gen_range(0..rows[r].len());
            rows[r][o] *= rng.gen_range(0.0..1.0);
        }
        NodeSpecKind::Value { rows } => {
            let r = rng.gen_range(0..rows.len());
            rows[r].lo -= rng.gen_range(0.0..2.0);
            rows[r].hi += rng.gen_range(0.0..2.0);
        }
        NodeSpecKind::Decision { .. } => unreachable!(),
    }
    spec.build().expect("weakened diagram is valid")
}

/// A diagram and the transformation under test.
#[derive(Debug, Clone)]
pub struct Instance {
    pub diagram: InfluenceDiagram,
    pub kind: StepKind,
}

/// Up to two context chance nodes `A`, `B` (`B` may depend on `A`).
fn chance_context(b: &mut Builder) -> Vec<&'static str> {
    let n = b.rng.gen_range(0..=2);
    let names = ["A", "B"];
    for (i, name) in names.iter().take(n).enumerate() {
        let parents = if i == 1 && b.coin(0.4) { vec!["A"] } else { vec![] };
        let card = b.card();
        b.chance(name, card, &parents);
    }
    names[..n].to_vec()
}

fn parents_with<'a>(b: &mut Builder, first: &'a str, context: &[&'a str]) -> Vec<&'a str> {
    let mut ps = b.subset(context, 0.5);
    ps.push(first);
    b.shuffle(&mut ps);
    ps
}

/// `Y -> V` with `Y`'s only successor the value node; both may share context.
pub fn chance_into_value(rng: &mut TestRng, style: Style) -> Instance {
    let mut b = Builder::new(rng, style);
    let context = chance_context(&mut b);
    let y_parents = b.subset(&context, 0.5);
    let card = b.card();
    b.chance("Y", card, &y_parents);
    let v_parents = parents_with(&mut b, "Y", &context);
    b.value(&v_parents);
    Instance { diagram: b.build(), kind: StepKind::RemoveChanceIntoValue("Y".into()) }
}

/// `Y -> X -> V` with `Y`'s only successor `X`.
pub fn marginalization(rng: &mut TestRng, style: Style) -> Instance {
    let mut b = Builder::new(rng, style);
    let context = chance_context(&mut b);
    let y_parents = b.subset(&context, 0.5);
    let card = b.card();
    b.chance("Y", card, &y_parents);
    let x_parents = parents_with(&mut b, "Y", &context);
    let card = b.card();
    b.chance("X", card, &x_parents);
    let v_parents = parents_with(&mut b, "X", &context);
    b.value(&v_parents);
    Instance { diagram: b.build(), kind: StepKind::MarginalizeChance("Y".into()) }
}

/// `Y -> X` reversible: no other path from `Y` to `X`.
pub fn reversal(rng: &mut TestRng, style: Style) -> Instance {
    let mut b = Builder::new(rng, style);
    let context = chance_context(&mut b);
    let y_parents = b.subset(&context, 0.5);
    let card = b.card();
    b.chance("Y", card, &y_parents);
    let x_parents = parents_with(&mut b, "Y", &context);
    let card = b.card();
    b.chance("X", card, &x_parents);
    let mut v_parents = parents_with(&mut b, "X", &context);
    if b.coin(0.5) {
        v_parents.push("Y");
    }
    b.value(&v_parents);
    Instance { diagram: b.build(), kind: StepKind::ReverseArc { from: "Y".into(), to: "X".into() } }
}

/// Decision `D` observing all context nodes; the value node depends on `D`
/// and some of them.
pub fn decision_removal(rng: &mut TestRng, style: Style) -> Instance {
    let mut b = Builder::new(rng, style);
    let context = chance_context(&mut b);
    let card = b.card();
    b.decision("D", card, &context);
    let v_parents = parents_with(&mut b, "D", &context);
    b.value(&v_parents);
    Instance { diagram: b.build(), kind: StepKind::RemoveDecision("D".into()) }
}

pub const INSTANCE_KINDS: [&str; 4] = ["chance into value", "marginalization", "reversal", "decision removal"];

pub fn instance(kind: usize, rng: &mut TestRng, style: Style) -> Instance {
    match kind {
        0 => chance_into_value(rng, style),
        1 => marginalization(rng, style),
        2 => reversal(rng, style),
        _ => decision_removal(rng, style),
    }
}

const NAMES: [&str; 4] = ["N0", "N1", "N2", "N3"];

/// A random valid diagram with at most `max_nodes` nodes including the value
/// node, at most three outcomes per variable. Decisions are chained in
/// declaration order.
pub fn random_diagram(rng: &mut TestRng, max_nodes: usize, style: Style) -> InfluenceDiagram {
    let n = rng.gen_range(1..max_nodes.min(NAMES.len() + 1));
    let mut b = Builder::new(rng, style);
    let mut last_decision = None;
    for (i, &name) in NAMES[..n].iter().enumerate() {
        let mut parents = b.subset(&NAMES[..i], 0.4);
        let card = b.card();
        if b.coin(0.35) {
            if let Some(d) = last_decision {
                if !parents.contains(&d) {
                    parents.push(d);
                }
            }
            b.decision(name, card, &parents);
            last_decision = Some(name);
        } else {
            b.chance(name, card, &parents);
        }
    }
    let mut v_parents = b.subset(&NAMES[..n], 0.5);
    if v_parents.is_empty() {
        v_parents.push(NAMES[n - 1]);
    }
    b.value(&v_parents);
    b.build()
}

/// Vertex configurations the exact envelope enumerates when `nodes` vary.
pub fn vertex_product(diagram: &InfluenceDiagram, nodes: &[NodeId]) -> u128 {
    nodes
        .iter()
        .flat_map(|&n| diagram.cpt(n).expect("chance").rows().iter())
        .map(|row| {
            let free = 1.0 - row.iter().sum::<f64>();
            if free > 1e-12 {
                row.len() as u128
            } else {
                1
            }
        })
        .product()
}

/// A random point diagram with one to three of its chance nodes widened,
/// kept below `budget` envelope configurations.
pub fn widened_diagram(rng: &mut TestRng, max_nodes: usize, budget: u128) -> (InfluenceDiagram, Vec<NodeId>) {
    loop {
        let point = random_diagram(rng, max_nodes, Style::Point);
        let mut chance: Vec<NodeId> = point.ids().filter(|&i| point.node(i).is_chance()).collect();
        if chance.is_empty() {
            continue;
        }
        chance.shuffle(rng);
        let k = rng.gen_range(1..=chance.len().min(3));
        let mut nodes = chance[..k].to_vec();
        nodes.sort();
        let range = rng.gen_range(0.01..0.3);
        let widened = widen_nodes(&point, &nodes, range).expect("widening chance nodes");
        if vertex_product(&widened, &nodes) <= budget {
            return (widened, nodes);
        }
    }
}
