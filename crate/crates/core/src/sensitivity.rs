//! Imprecision injection and sweeps over ranges and node subsets.
//!
//! A point row `p` is widened to range `R` by the proportional rule
//! `b = (1 - R) p`. This keeps `p` admitted, is feasible for any `p` including
//! zero entries, and gives `1 - sum b = R` exactly. Other injection rules
//! (such as uniform subtraction) give different numbers.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_envelope, EnvelopeOptions, EnvelopeReport, DEFAULT_CAP};
use crate::model::{build_diagram, InfluenceDiagram, Interval, NodeId, NodeSpecKind, TOLERANCE};
use crate::solver::solve;
use crate::transforms::AdmissibleSet;

/// `(1 - range) p`.
pub fn widen(point_row: &[f64], range: f64) -> Vec<f64> {
    point_row.iter().map(|p| (1.0 - range) * p).collect()
}

fn check_range(range: f64) -> Result<()> {
    if (0.0..1.0).contains(&range) {
        Ok(())
    } else {
        Err(Error::InvalidRange(range))
    }
}

/// Copy of `diagram` with every row of `nodes` widened to `range`.
pub fn widen_nodes(diagram: &InfluenceDiagram, nodes: &[NodeId], range: f64) -> Result<InfluenceDiagram> {
    check_range(range)?;
    let names: Vec<&str> = nodes.iter().map(|&n| diagram.name(n)).collect();
    let mut spec = diagram.to_spec();
    for node in spec.nodes.iter_mut().filter(|n| names.contains(&n.name.as_str())) {
        match &mut node.kind {
            NodeSpecKind::Chance { rows, .. } => {
                for row in rows.iter_mut() {
                    *row = widen(row, range);
                }
            }
            _ => return Err(Error::WrongKind { node: node.name.clone(), expected: "chance" }),
        }
    }
    build_diagram(&spec)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivitySpec {
    /// Node subsets to widen, each swept over every range.
    pub subsets: Vec<Vec<String>>,
    pub ranges: Vec<f64>,
    pub compare_exact: bool,
    pub exact_cap: u128,
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl SensitivitySpec {
    /// A sweep widening all of `target_nodes` together.
    pub fn new(target_nodes: &[&str], ranges: &[f64]) -> Self {
        let nodes: Vec<String> = target_nodes.iter().map(|s| s.to_string()).collect();
        SensitivitySpec {
            subsets: vec![nodes],
            ranges: ranges.to_vec(),
            compare_exact: false,
            exact_cap: DEFAULT_CAP,
            jobs: None,
        }
    }

    /// A sweep over every nonempty subset of `target_nodes`, largest first,
    /// then in the order the nodes were given.
    pub fn all_subsets(target_nodes: &[&str], ranges: &[f64]) -> Self {
        let n = target_nodes.len();
        let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
        masks.sort_by_key(|&m| {
            let members: Vec<usize> = (0..n).filter(|i| m & (1 << i) != 0).collect();
            (std::cmp::Reverse(members.len()), members)
        });
        let subsets = masks
            .into_iter()
            .map(|m| (0..n).filter(|i| m & (1 << i) != 0).map(|i| target_nodes[i].to_string()).collect())
            .collect();
        SensitivitySpec { subsets, ..Self::new(target_nodes, ranges) }
    }

    pub fn with_exact(mut self, cap: u128) -> Self {
        self.compare_exact = true;
        self.exact_cap = cap;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactCell {
    pub envelope: Interval,
    pub admissible_union: Vec<crate::exact::PolicyUnion>,
    pub configurations_evaluated: u64,
}

impl From<EnvelopeReport> for ExactCell {
    fn from(r: EnvelopeReport) -> Self {
        ExactCell {
            envelope: r.envelope,
            admissible_union: r.admissible_union,
            configurations_evaluated: r.configurations_evaluated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub subset: Vec<String>,
    pub range: f64,
    pub iid: Interval,
    pub admissible: Vec<AdmissibleSet>,
    pub exact: Option<ExactCell>,
    /// Why the exact envelope was not computed when it was requested.
    pub exact_skipped: Option<String>,
}

impl SweepRow {
    pub fn policy(&self, decision: &str) -> Option<&AdmissibleSet> {
        self.admissible.iter().find(|a| a.decision == decision)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub decisions: Vec<String>,
    /// Grouped by subset in spec order, ranges in spec order within a group.
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Violations of the sweep's structural guarantees: within a subset, and
    /// for ranges in increasing order, intervals are nested and admissible
    /// sets grow; an exact envelope sits inside its IID interval and its
    /// policy union inside the admissible sets.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, a) in self.rows.iter().enumerate() {
            let label = format!("{} at R={}", a.subset.join("+"), a.range);
            if let Some(e) = &a.exact {
                if !e.envelope.within(&a.iid, 1e-9) {
                    out.push(format!("{}: exact envelope outside the IID interval", label));
                }
                for u in &e.admissible_union {
                    let Some(set) = a.policy(&u.decision) else { continue };
                    let entries = u.sets.iter().map(|s| s.as_deref());
                    if !crate::exact::outside_admissible(set, &u.info_ids, &u.info_cards, entries).is_empty() {
                        out.push(format!("{}: {} union leaves its admissible sets", label, u.decision));
                    }
                }
            }
            for b in &self.rows[i + 1..] {
                if b.subset != a.subset || b.range < a.range {
                    continue;
                }
                if !a.iid.within(&b.iid, 1e-9) {
                    out.push(format!("{}: interval not inside the one at R={}", label, b.range));
                }
                for sa in &a.admissible {
                    let Some(sb) = b.policy(&sa.decision) else { continue };
                    let grows = sa.sets.iter().zip(&sb.sets).all(|(x, y)| x.iter().all(|m| y.contains(m)));
                    if !grows {
                        out.push(format!("{}: {} sets shrink by R={}", label, sa.decision, b.range));
                    }
                }
            }
        }
        out
    }
}

fn resolve(diagram: &InfluenceDiagram, names: &[String]) -> Result<Vec<NodeId>> {
    names
        .iter()
        .map(|n| {
            let id = diagram.id(n)?;
            if diagram.node(id).is_chance() {
                Ok(id)
            } else {
                Err(Error::WrongKind { node: n.clone(), expected: "chance" })
            }
        })
        .collect()
}

/// Widens each subset to each range, solves, and optionally computes the
/// exact envelope. Cells run in parallel; the report order is fixed by the
/// spec.
pub fn sweep(diagram: &InfluenceDiagram, spec: &SensitivitySpec) -> Result<SweepReport> {
    for id in diagram.ids() {
        if diagram.cpt(id).is_some_and(|c| !c.is_point()) {
            return Err(Error::NonPointResidual(diagram.name(id).to_string()));
        }
    }
    for &r in &spec.ranges {
        check_range(r)?;
    }
    let subsets = spec.subsets.iter().map(|s| resolve(diagram, s)).collect::<Result<Vec<_>>>()?;
    let cells: Vec<(usize, f64)> =
        (0..subsets.len()).flat_map(|s| spec.ranges.iter().map(move |&r| (s, r))).collect();
    let options = EnvelopeOptions { include_value_box: false, cap: spec.exact_cap, jobs: Some(1) };

    let cell = |&(s, range): &(usize, f64)| -> Result<SweepRow> {
        let widened = widen_nodes(diagram, &subsets[s], range)?;
        let report = solve(&widened)?;
        let (exact, exact_skipped) = if !spec.compare_exact {
            (None, None)
        } else {
            match exact_envelope(&widened, &subsets[s], &options) {
                Ok(e) => (Some(ExactCell::from(e)), None),
                Err(e @ Error::CombinatorialLimitExceeded { .. }) => (None, Some(e.to_string())),
                Err(e) => return Err(e),
            }
        };
        Ok(SweepRow {
            subset: spec.subsets[s].clone(),
            range,
            iid: report.final_interval,
            admissible: report.policies,
            exact,
            exact_skipped,
        })
    };
    let run = || cells.par_iter().map(cell).collect::<Result<Vec<_>>>();
    let rows = match spec.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Unsolvable(format!("thread pool: {}", e)))?
            .install(run)?,
        None => run()?,
    };
    let decisions = diagram.decision_order().iter().map(|&d| diagram.name(d).to_string()).collect();
    Ok(SweepReport { decisions, rows })
}

/// Wall-clock comparison of one interval solve against one classical solve,
/// and the size of the matching exact enumeration. Timings vary from run to
/// run, so this is kept apart from [`SweepReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostProfile {
    pub solve_seconds: f64,
    pub point_solve_seconds: f64,
    /// Product of the vertex counts of every widened row.
    pub exact_configurations: u128,
}

impl CostProfile {
    pub fn ratio(&self) -> f64 {
        self.solve_seconds / self.point_solve_seconds
    }
}

fn median_seconds(repeats: usize, mut f: impl FnMut()) -> f64 {
    let mut times: Vec<f64> = (0..repeats.max(1))
        .map(|_| {
            let start = std::time::Instant::now();
            f();
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[times.len() / 2]
}

/// Median time of `solve` on the diagram widened at `range` against
/// `point_solve` on the original point diagram.
pub fn cost_profile(diagram: &InfluenceDiagram, nodes: &[NodeId], range: f64, repeats: usize) -> Result<CostProfile> {
    let widened = widen_nodes(diagram, nodes, range)?;
    solve(&widened)?;
    let point = crate::exact::PointRealization::from_lower(diagram);
    crate::exact::point_solve(diagram, &point)?;
    let solve_seconds = median_seconds(repeats, || {
        std::hint::black_box(solve(&widened).ok());
    });
    let point_solve_seconds = median_seconds(repeats, || {
        std::hint::black_box(crate::exact::point_solve(diagram, &point).ok());
    });
    let exact_configurations = nodes
        .iter()
        .flat_map(|&n| widened.cpt(n).expect("widened nodes are chance nodes").rows())
        .map(|row| crate::exact::vertex_realizations(row).len() as u128)
        .product();
    Ok(CostProfile { solve_seconds, point_solve_seconds, exact_configurations })
}

/// `1 - sum b` of a row.
pub fn range_of(row: &[f64]) -> f64 {
    1.0 - row.iter().sum::<f64>()
}

/// True when `b` is a row of lower bounds that `widen` could have produced
/// from some point row at `range`.
pub fn has_range(row: &[f64], range: f64) -> bool {
    (range_of(row) - range).abs() <= TOLERANCE * row.len() as f64
}
