use crate::error::{Error, Result};
use crate::model::{InfluenceDiagram, Interval, IntervalTable, NodeId, NodeKind, TOLERANCE};
use crate::transforms::bounds::{admissible, admissible_hull, expected_interval};
use crate::transforms::{AdmissibleSet, Scratch, StepKind, StepNote, TransformStep, Transformed};

fn require(diagram: &InfluenceDiagram, id: NodeId, expected: &'static str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::WrongKind { node: diagram.name(id).to_string(), expected })
    }
}

/// Removes a chance node whose only successor is the value node, replacing
/// each value interval by the bounds on its expectation.
///
/// The value node's parents become `(parents(V) \ {Y}) ++ parents(Y)`.
pub fn remove_chance_into_value(diagram: &InfluenceDiagram, y: NodeId) -> Result<Transformed> {
    require(diagram, y, "chance", diagram.node(y).is_chance())?;
    let v = diagram.value_id();
    if diagram.children(y) != [v] {
        return Err(Error::not_removable(diagram.name(y), "its only successor must be the value node"));
    }
    let y_node = diagram.node(y);
    let cpt = y_node.cpt().expect("chance");
    let old_v = diagram.parent_space(v);
    let y_space = diagram.parent_space(y);

    let mut parents: Vec<NodeId> = old_v.parents().iter().copied().filter(|&p| p != y).collect();
    for &p in y_space.parents() {
        if !parents.contains(&p) {
            parents.push(p);
        }
    }
    let new_v = diagram.space(&parents);
    let table = diagram.value_table();
    let mut scratch = Scratch::new(diagram);
    let mut rows = Vec::with_capacity(new_v.size());
    let mut values = vec![Interval::point(0.0); y_node.card()];
    for index in 0..new_v.size() {
        scratch.load(&new_v, index);
        let lower = cpt.row(scratch.index(&y_space));
        for (o, slot) in values.iter_mut().enumerate() {
            scratch.set(y, o);
            *slot = table.row(scratch.index(&old_v));
        }
        rows.push(expected_interval(&values, lower));
    }

    let mut out = diagram.clone();
    out.remove(y);
    let value = out.node_mut(v);
    value.parents = parents;
    value.kind = NodeKind::Value(IntervalTable::new(rows));
    Ok(Transformed {
        diagram: out,
        step: TransformStep::new(StepKind::RemoveChanceIntoValue(y_node.name.clone())),
        admissible: None,
    })
}

/// Admissible alternatives of `decision` at one configuration of the value
/// node's other parents (`info_config` indexes `parents(V) \ {D}` in order).
pub fn admissible_set(diagram: &InfluenceDiagram, decision: NodeId, info_config: usize) -> Result<Vec<usize>> {
    let v = diagram.value_id();
    let old_v = diagram.parent_space(v);
    if old_v.position(decision).is_none() {
        return Err(Error::not_removable(diagram.name(decision), "not a parent of the value node"));
    }
    let info: Vec<NodeId> = old_v.parents().iter().copied().filter(|&p| p != decision).collect();
    let info_space = diagram.space(&info);
    if info_config >= info_space.size() {
        return Err(Error::OutOfRange { index: info_config, size: info_space.size() });
    }
    Ok(admissible(&decision_intervals(diagram, decision, &info, info_config)))
}

fn decision_intervals(diagram: &InfluenceDiagram, decision: NodeId, info: &[NodeId], info_config: usize) -> Vec<Interval> {
    let v = diagram.value_id();
    let old_v = diagram.parent_space(v);
    let info_space = diagram.space(info);
    let table = diagram.value_table();
    let mut scratch = Scratch::new(diagram);
    scratch.load(&info_space, info_config);
    (0..diagram.card(decision))
        .map(|d| {
            scratch.set(decision, d);
            table.row(scratch.index(&old_v))
        })
        .collect()
}

/// Removes the decision that the value node's other parents are all observed
/// by. Per information state `y` the new interval is
/// `[min_{d in S(y)} lo(y, d), max_{d in S(y)} hi(y, d)]`.
pub fn remove_decision(diagram: &InfluenceDiagram, decision: NodeId) -> Result<Transformed> {
    require(diagram, decision, "decision", diagram.node(decision).is_decision())?;
    let name = diagram.name(decision).to_string();
    let v = diagram.value_id();
    if diagram.children(decision) != [v] {
        return Err(Error::not_removable(&name, "its only successor must be the value node"));
    }
    let observed = &diagram.node(decision).parents;
    let info: Vec<NodeId> = diagram.node(v).parents.iter().copied().filter(|&p| p != decision).collect();
    if let Some(&p) = info.iter().find(|p| !observed.contains(p)) {
        return Err(Error::not_removable(&name, format!("value parent `{}` is not observed", diagram.name(p))));
    }

    let info_space = diagram.space(&info);
    let mut step = TransformStep::new(StepKind::RemoveDecision(name.clone()));
    let mut sets = Vec::with_capacity(info_space.size());
    let mut rows = Vec::with_capacity(info_space.size());
    for index in 0..info_space.size() {
        let intervals = decision_intervals(diagram, decision, &info, index);
        let set = admissible(&intervals);
        let hull = admissible_hull(&intervals, &set);
        let attainable_lo = intervals.iter().map(|i| i.lo).fold(f64::NEG_INFINITY, f64::max);
        let gap = attainable_lo - hull.lo;
        if gap > TOLERANCE {
            step.notes.push(StepNote::AttainmentGap { decision: name.clone(), row: index, gap });
        }
        rows.push(hull);
        sets.push(set);
    }

    let admissible = AdmissibleSet::new(diagram, decision, info.clone(), sets);
    let mut out = diagram.clone();
    out.remove(decision);
    let value = out.node_mut(v);
    value.parents = info;
    value.kind = NodeKind::Value(IntervalTable::new(rows));
    Ok(Transformed { diagram: out, step, admissible: Some(admissible) })
}
