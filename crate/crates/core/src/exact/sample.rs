use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::point::{solve_member, PointRealization, PointSolution};
use crate::error::Result;
use crate::model::{free_mass, is_point_row, InfluenceDiagram, Interval, NodeId};
use crate::solver::{solve, SolveReport};
use crate::transforms::AdmissibleSet;

/// EV containment slack of the soundness check.
pub const CONTAINMENT_TOLERANCE: f64 = 1e-9;

/// Violation messages kept verbatim in a report; further ones are counted.
const KEPT_MESSAGES: usize = 10;

/// A random member of the diagram's constraint sets, deterministic in `seed`.
pub fn sample_member(diagram: &InfluenceDiagram, seed: u64) -> PointRealization {
    sample_member_with(diagram, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Free mass of each row is split by a uniform draw from the simplex; each
/// value is uniform in its interval. Point rows and degenerate intervals are
/// copied unchanged.
pub fn sample_member_with<R: Rng>(diagram: &InfluenceDiagram, rng: &mut R) -> PointRealization {
    let mut r = PointRealization::from_lower(diagram);
    for rows in r.chance.values_mut() {
        for row in rows.iter_mut() {
            let free = free_mass(row);
            if is_point_row(row) || free == 0.0 {
                continue;
            }
            // Normalized unit exponentials are uniform on the simplex.
            let w: Vec<f64> = (0..row.len()).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let total: f64 = w.iter().sum();
            for (p, w) in row.iter_mut().zip(&w) {
                *p += free * w / total;
            }
        }
    }
    for (v, i) in r.value.iter_mut().zip(diagram.value_table().rows()) {
        if !i.is_degenerate() {
            *v = i.lo + rng.gen::<f64>() * (i.hi - i.lo);
        }
    }
    r
}

/// Alternatives of `entries` lying outside `set` for each information state
/// of positive weight, as `(state index, alternative)` pairs.
pub fn outside_admissible<'a>(
    set: &AdmissibleSet,
    info_ids: &[NodeId],
    info_cards: &[usize],
    entries: impl IntoIterator<Item = Option<&'a [usize]>>,
) -> Vec<(usize, usize)> {
    let space = crate::model::ConfigSpace::new(info_ids.to_vec(), info_cards.to_vec());
    let mut out = Vec::new();
    for (state, members) in entries.into_iter().enumerate() {
        let Some(members) = members else { continue };
        let assignment = space.assignment(state).expect("state within space");
        let admissible = set.lookup(|n| {
            let k = info_ids.iter().position(|&i| i == n).expect("admissible set conditions on observed variables");
            assignment[k]
        });
        out.extend(members.iter().filter(|a| !admissible.contains(a)).map(|&a| (state, a)));
    }
    out
}

/// Point-optimal choices outside the admissible sets of `report`.
pub fn policy_violations(report: &SolveReport, solution: &PointSolution) -> Vec<String> {
    let mut out = Vec::new();
    for policy in &solution.policies {
        let Some(set) = report.policy(&policy.decision) else {
            out.push(format!("{}: no admissible set", policy.decision));
            continue;
        };
        let entries = policy.entries.iter().map(|e| (e.weight > 0.0).then_some(e.optimal.as_slice()));
        for (state, a) in outside_admissible(set, &policy.info_ids, &policy.info_cards, entries) {
            let label = policy.state_label(state);
            out.push(format!("{}: {} optimal at {} but outside S", policy.decision, set.alternatives[a], label));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoundnessReport {
    pub samples: usize,
    pub seed: u64,
    pub interval: Interval,
    pub ev_violations: usize,
    pub policy_violations: usize,
    /// Smallest `min(ev - lo, hi - ev)` over all samples; negative when some
    /// EV escaped the interval.
    pub worst_margin: Option<f64>,
    /// Range of sampled optimal expected values.
    pub sampled: Option<Interval>,
    /// `sampled.lo - interval.lo` and `interval.hi - sampled.hi`.
    pub attainment_gap: Option<(f64, f64)>,
    pub messages: Vec<String>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.ev_violations == 0 && self.policy_violations == 0
    }
}

/// Solves the diagram once, then checks that every sampled member's optimal
/// expected value lies in the solved interval and its optimal choices lie in
/// the admissible sets.
pub fn soundness_check(diagram: &InfluenceDiagram, samples: usize, seed: u64) -> Result<SoundnessReport> {
    let report = solve(diagram)?;
    Ok(check_against(diagram, &report, samples, seed))
}

/// [`soundness_check`] against an already computed solve report.
pub fn check_against(diagram: &InfluenceDiagram, report: &SolveReport, samples: usize, seed: u64) -> SoundnessReport {
    let interval = report.final_interval;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SoundnessReport {
        samples,
        seed,
        interval,
        ev_violations: 0,
        policy_violations: 0,
        worst_margin: None,
        sampled: None,
        attainment_gap: None,
        messages: Vec::new(),
    };
    let keep = |out: &mut SoundnessReport, m: String| {
        if out.messages.len() < KEPT_MESSAGES {
            out.messages.push(m);
        }
    };
    for k in 0..samples {
        let member = sample_member_with(diagram, &mut rng);
        let solution = solve_member(diagram, &member);
        let ev = solution.expected_value;
        let margin = (ev - interval.lo).min(interval.hi - ev);
        out.worst_margin = Some(out.worst_margin.map_or(margin, |m: f64| m.min(margin)));
        out.sampled = Some(match out.sampled {
            None => Interval::new(ev, ev),
            Some(s) => Interval::new(s.lo.min(ev), s.hi.max(ev)),
        });
        if margin < -CONTAINMENT_TOLERANCE {
            out.ev_violations += 1;
            keep(&mut out, format!("sample {}: EV {} outside [{}, {}]", k, ev, interval.lo, interval.hi));
        }
        for m in policy_violations(report, &solution) {
            out.policy_violations += 1;
            keep(&mut out, format!("sample {}: {}", k, m));
        }
    }
    out.attainment_gap = out.sampled.map(|s| (s.lo - interval.lo, interval.hi - s.hi));
    out
}
