//! Plain-text reports: aligned columns, values at four significant digits.

use std::fmt::Write as _;

use crate::exact::{EnvelopeReport, PolicyUnion, SoundnessReport};
use crate::model::Interval;
use crate::sensitivity::SweepReport;
use crate::solver::SolveReport;
use crate::transforms::{format_set, AdmissibleSet, StepNote};

/// `x` rounded half away from zero to four significant digits, trailing
/// zeros dropped. Rounding works on the 12-digit decimal expansion, so
/// 18.165 and 18.165000000000017 both print as 18.17.
pub fn sig4(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let expansion = format!("{:.11e}", x.abs());
    let (mantissa, exponent) = expansion.split_once('e').expect("scientific notation");
    let mut exponent: i32 = exponent.parse().expect("integer exponent");
    let digits: Vec<u32> = mantissa.chars().filter_map(|c| c.to_digit(10)).collect();
    let mut n = digits[..4].iter().fold(0, |acc, d| acc * 10 + d);
    if digits[4] >= 5 {
        n += 1;
    }
    if n == 10_000 {
        n = 1000;
        exponent += 1;
    }
    if n == 0 {
        return "0".to_string();
    }
    let digits = n.to_string();
    let mut s = if exponent >= 3 {
        format!("{}{}", digits, "0".repeat((exponent - 3) as usize))
    } else if exponent >= 0 {
        let (int, frac) = digits.split_at(exponent as usize + 1);
        format!("{}.{}", int, frac)
    } else {
        format!("0.{}{}", "0".repeat((-exponent - 1) as usize), digits)
    };
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if x < 0.0 {
        s.insert(0, '-');
    }
    s
}

/// Both ends at four significant digits; an interval degenerate within
/// rounding prints its low end twice.
fn ends(i: &Interval) -> (String, String) {
    let hi = if i.is_degenerate() { i.lo } else { i.hi };
    (sig4(i.lo), sig4(hi))
}

pub fn interval(i: &Interval) -> String {
    let (lo, hi) = ends(i);
    format!("[{}, {}]", lo, hi)
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let columns = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (k, cell) in cells.iter().enumerate() {
            if k + 1 == columns {
                s.push_str(cell);
            } else {
                write!(s, "{:<w$}  ", cell, w = width[k]).unwrap();
            }
        }
        s.trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

fn admissible_block(out: &mut String, set: &AdmissibleSet) {
    if set.info.is_empty() {
        writeln!(out, "decision {}: S = {}", set.decision, set.set_label(0)).unwrap();
        return;
    }
    writeln!(out, "decision {} (given {})", set.decision, set.info.join(", ")).unwrap();
    let rows: Vec<Vec<String>> =
        (0..set.sets.len()).map(|i| vec![format!("  {}", set.state_label(i)), format!("S = {}", set.set_label(i))]).collect();
    out.push_str(&table(&["  state", "admissible"], &rows));
}

fn note(n: &StepNote) -> String {
    match n {
        StepNote::ConventionZero { node, row, outcome } => {
            format!("{} row {} outcome {}: zero by convention", node, row, outcome)
        }
        StepNote::Indeterminate { node, row } => format!("{} row {}: indeterminate, stored as zeros", node, row),
        StepNote::AttainmentGap { decision, row, gap } => {
            format!("{} row {}: lower end may sit {} below the attainable value", decision, row, sig4(*gap))
        }
        StepNote::BarrenDecision { node } => format!("{}: barren decision, every alternative admissible", node),
    }
}

pub fn solve_report(report: &SolveReport, trace: bool) -> String {
    let mut out = format!("expected value: {}\n", interval(&report.final_interval));
    for set in &report.policies {
        out.push('\n');
        admissible_block(&mut out, set);
    }
    if trace {
        writeln!(out, "\nsteps:").unwrap();
        for (k, step) in report.steps.iter().enumerate() {
            writeln!(out, "  {}. {}", k + 1, step.kind).unwrap();
            for n in &step.notes {
                writeln!(out, "     note: {}", note(n)).unwrap();
            }
        }
    }
    out
}

fn union_label(u: &PolicyUnion, index: usize) -> String {
    match &u.sets[index] {
        Some(members) => format_set(&u.alternatives, members),
        None => "(unreached)".to_string(),
    }
}

pub fn envelope_report(report: &EnvelopeReport) -> String {
    let mut out = format!("exact envelope: {}\n", interval(&report.envelope));
    let counts: Vec<String> = report.rows.iter().map(|r| format!("{}[{}]={}", r.node, r.row, r.vertices)).collect();
    writeln!(out, "configurations evaluated: {}", report.configurations_evaluated).unwrap();
    if !counts.is_empty() {
        writeln!(out, "vertices per row: {}", counts.join(" ")).unwrap();
    }
    writeln!(out, "caveat: {}", report.caveat).unwrap();
    for u in &report.admissible_union {
        out.push('\n');
        if u.info.is_empty() {
            writeln!(out, "decision {}: union = {}", u.decision, union_label(u, 0)).unwrap();
            continue;
        }
        writeln!(out, "decision {} (given {})", u.decision, u.info.join(", ")).unwrap();
        let rows: Vec<Vec<String>> = (0..u.sets.len())
            .map(|i| vec![format!("  {}", u.state_label(i)), format!("union = {}", union_label(u, i))])
            .collect();
        out.push_str(&table(&["  state", "optimal somewhere"], &rows));
    }
    out
}

/// Admissible sets of one decision in a sweep cell: the set itself for a
/// decision without information, otherwise how many states stay undecided.
fn sweep_sets(set: Option<&AdmissibleSet>) -> String {
    match set {
        None => "-".to_string(),
        Some(s) if s.sets.len() == 1 => s.set_label(0),
        Some(s) => {
            let open = s.sets.iter().filter(|m| m.len() > 1).count();
            format!("{}/{} open", open, s.sets.len())
        }
    }
}

fn sweep_union(u: Option<&PolicyUnion>) -> String {
    match u {
        None => "-".to_string(),
        Some(u) if u.sets.len() == 1 => union_label(u, 0),
        Some(u) => {
            let open = u.sets.iter().filter(|m| m.as_ref().is_some_and(|m| m.len() > 1)).count();
            format!("{}/{} open", open, u.sets.len())
        }
    }
}

pub fn sweep_report(report: &SweepReport) -> String {
    let with_exact = report.rows.iter().any(|r| r.exact.is_some() || r.exact_skipped.is_some());
    let mut header: Vec<String> = vec!["nodes".into(), "R".into(), "IID lo".into(), "IID hi".into()];
    header.extend(report.decisions.iter().map(|d| format!("IID {}", d)));
    if with_exact {
        header.extend(["EXACT lo".into(), "EXACT hi".into()]);
        header.extend(report.decisions.iter().map(|d| format!("EXACT {}", d)));
        header.push("configs".into());
    }
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let (lo, hi) = ends(&r.iid);
            let mut row = vec![r.subset.join(" "), sig4(r.range), lo, hi];
            row.extend(report.decisions.iter().map(|d| sweep_sets(r.policy(d))));
            if with_exact {
                match &r.exact {
                    Some(e) => {
                        let (lo, hi) = ends(&e.envelope);
                        row.extend([lo, hi]);
                        row.extend(report.decisions.iter().map(|d| {
                            sweep_union(e.admissible_union.iter().find(|u| u.decision == *d))
                        }));
                        row.push(e.configurations_evaluated.to_string());
                    }
                    None => {
                        row.extend(std::iter::repeat_n("skipped".to_string(), 2 + report.decisions.len()));
                        row.push("-".into());
                    }
                }
            }
            row
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = table(&header, &rows);
    for r in report.rows.iter().filter(|r| r.exact_skipped.is_some()) {
        writeln!(out, "exact skipped for {} at R={}: {}", r.subset.join(" "), sig4(r.range), r.exact_skipped.as_ref().unwrap())
            .unwrap();
    }
    out
}

pub fn soundness_report(report: &SoundnessReport) -> String {
    let mut rows = vec![
        vec!["samples".to_string(), format!("{} (seed {})", report.samples, report.seed)],
        vec!["interval".to_string(), interval(&report.interval)],
    ];
    if let Some(s) = &report.sampled {
        rows.push(vec!["sampled EV range".into(), interval(s)]);
    }
    if let Some((lo, hi)) = report.attainment_gap {
        rows.push(vec!["attainment gap".into(), format!("low {}, high {}", sig4(lo), sig4(hi))]);
    }
    if let Some(m) = report.worst_margin {
        rows.push(vec!["worst margin".into(), sig4(m)]);
    }
    rows.push(vec!["EV violations".into(), report.ev_violations.to_string()]);
    rows.push(vec!["policy violations".into(), report.policy_violations.to_string()]);
    rows.push(vec!["result".into(), if report.passed() { "pass" } else { "FAIL" }.to_string()]);
    let mut out = String::new();
    for r in &rows {
        writeln!(out, "{:<18}{}", format!("{}:", r[0]), r[1]).unwrap();
    }
    for m in &report.messages {
        writeln!(out, "  {}", m).unwrap();
    }
    out
}
