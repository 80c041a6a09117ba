use crate::error::{Error, Result};
use crate::model::{implied_upper, ConfigSpace, InfluenceDiagram, LowerCpt, NodeId, NodeKind};
use crate::transforms::bounds::{marginal_lower, posterior_lower, PosteriorBound};
use crate::transforms::{Scratch, StepKind, StepNote, TransformStep, Transformed};

fn require_chance(diagram: &InfluenceDiagram, id: NodeId) -> Result<()> {
    if diagram.node(id).is_chance() {
        Ok(())
    } else {
        Err(Error::WrongKind { node: diagram.name(id).to_string(), expected: "chance" })
    }
}

fn union(first: &[NodeId], second: &[NodeId], skip: NodeId) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = first.iter().copied().filter(|&p| p != skip).collect();
    for &p in second {
        if p != skip && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Lower bounds of `x` after mixing out `y`, for every configuration of
/// `new_parents` (which must cover the parents of both, minus `y`).
fn mixed_rows(diagram: &InfluenceDiagram, y: NodeId, x: NodeId, new_parents: &[NodeId]) -> Vec<Vec<f64>> {
    let x_space = diagram.parent_space(x);
    let y_space = diagram.parent_space(y);
    let x_cpt = diagram.cpt(x).expect("chance");
    let y_cpt = diagram.cpt(y).expect("chance");
    let space = diagram.space(new_parents);
    let mut scratch = Scratch::new(diagram);
    let mut rows = Vec::with_capacity(space.size());
    for index in 0..space.size() {
        scratch.load(&space, index);
        let prior = y_cpt.row(scratch.index(&y_space));
        let conditionals = conditional_rows(&mut scratch, y, diagram.card(y), &x_space, x_cpt);
        let row = (0..diagram.card(x))
            .map(|o| {
                let column: Vec<f64> = conditionals.iter().map(|r| r[o]).collect();
                marginal_lower(&column, prior)
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// `b(. | y_i, rest)` for every outcome `y_i`, with `rest` already loaded.
fn conditional_rows<'a>(
    scratch: &mut Scratch,
    y: NodeId,
    card: usize,
    x_space: &ConfigSpace,
    x_cpt: &'a LowerCpt,
) -> Vec<&'a [f64]> {
    (0..card)
        .map(|o| {
            scratch.set(y, o);
            x_cpt.row(scratch.index(x_space))
        })
        .collect()
}

/// Reverses the arc `y -> x` between two chance nodes.
///
/// `x` inherits the parents of `y` and its new rows are the mixture bounds;
/// `y` inherits the parents of `x` plus `x` itself and its new rows are the
/// posterior lower bounds. Rows whose posterior is indeterminate are stored as
/// all zeros and noted on the step.
pub fn reverse_arc(diagram: &InfluenceDiagram, y: NodeId, x: NodeId) -> Result<Transformed> {
    require_chance(diagram, y)?;
    require_chance(diagram, x)?;
    let (y_name, x_name) = (diagram.name(y).to_string(), diagram.name(x).to_string());
    if !diagram.has_arc(y, x) {
        return Err(Error::ArcMissing(y_name, x_name));
    }
    if diagram.has_indirect_path(y, x) {
        return Err(Error::WouldCreateCycle(y_name, x_name));
    }
    let x_parents = diagram.node(x).parents.clone();
    let y_parents = diagram.node(y).parents.clone();
    let new_x_parents = union(&x_parents, &y_parents, y);
    let mut new_y_parents = union(&y_parents, &x_parents, y);
    new_y_parents.push(x);

    let x_rows = mixed_rows(diagram, y, x, &new_x_parents);

    let mut step = TransformStep::new(StepKind::ReverseArc { from: y_name.clone(), to: x_name.clone() });
    let x_space = diagram.parent_space(x);
    let y_space = diagram.parent_space(y);
    let x_cpt = diagram.cpt(x).expect("chance");
    let y_cpt = diagram.cpt(y).expect("chance");
    let new_y_space = diagram.space(&new_y_parents);
    let y_card = diagram.card(y);
    let mut scratch = Scratch::new(diagram);
    let mut y_rows = Vec::with_capacity(new_y_space.size());
    for index in 0..new_y_space.size() {
        scratch.load(&new_y_space, index);
        let prior = y_cpt.row(scratch.index(&y_space));
        let outcome = new_y_space.assignment(index).expect("in range")[new_y_parents.len() - 1];
        let conditionals = conditional_rows(&mut scratch, y, y_card, &x_space, x_cpt);
        let lower: Vec<f64> = conditionals.iter().map(|r| r[outcome]).collect();
        let upper: Vec<f64> = conditionals.iter().map(|r| implied_upper(r, outcome)).collect();
        let bounds: Vec<PosteriorBound> = (0..y_card).map(|o| posterior_lower(&lower, &upper, prior, o)).collect();
        if bounds.contains(&PosteriorBound::Indeterminate) {
            step.notes.push(StepNote::Indeterminate { node: y_name.clone(), row: index });
            y_rows.push(vec![0.0; y_card]);
            continue;
        }
        for (o, b) in bounds.iter().enumerate() {
            if *b == PosteriorBound::ConventionZero {
                step.notes.push(StepNote::ConventionZero { node: y_name.clone(), row: index, outcome: o });
            }
        }
        y_rows.push(bounds.iter().map(|b| b.value()).collect());
    }

    let mut out = diagram.clone();
    let xn = out.node_mut(x);
    xn.parents = new_x_parents;
    xn.kind = NodeKind::Chance(LowerCpt::new(x_rows));
    let yn = out.node_mut(y);
    yn.parents = new_y_parents;
    yn.kind = NodeKind::Chance(LowerCpt::new(y_rows));
    Ok(Transformed { diagram: out, step, admissible: None })
}

/// Removes a chance node whose single successor is a chance node `x`,
/// folding it into `x`'s table. `x` inherits the removed node's parents.
pub fn marginalize_chance(diagram: &InfluenceDiagram, y: NodeId) -> Result<Transformed> {
    require_chance(diagram, y)?;
    let name = diagram.name(y).to_string();
    let children = diagram.children(y);
    let x = match children[..] {
        [x] if diagram.node(x).is_chance() => x,
        _ => return Err(Error::not_removable(&name, "needs exactly one successor, a chance node")),
    };
    let new_parents = union(&diagram.node(x).parents, &diagram.node(y).parents, y);
    let rows = mixed_rows(diagram, y, x, &new_parents);
    let mut out = diagram.clone();
    out.remove(y);
    let xn = out.node_mut(x);
    xn.parents = new_parents;
    xn.kind = NodeKind::Chance(LowerCpt::new(rows));
    Ok(Transformed {
        diagram: out,
        step: TransformStep::new(StepKind::MarginalizeChance(name)),
        admissible: None,
    })
}
