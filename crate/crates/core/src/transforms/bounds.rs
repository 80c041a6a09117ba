//! Closed-form bounds over rows of lower-bounded distributions.
//!
//! A row `b` admits every `p >= b` with `sum p = 1`. Linear objectives over
//! that polytope are extremized by giving all of the free mass `1 - sum b` to a
//! single outcome: the one with the largest coefficient for a maximum, the
//! smallest for a minimum.

use crate::model::{implied_upper, scale, Interval};

/// Tolerance for strict interval dominance, relative to the magnitude of the
/// compared values.
pub const DOMINANCE_TOLERANCE: f64 = 1e-9;

/// `upper < lower` by more than the dominance tolerance.
pub fn strictly_below(upper: f64, lower: f64) -> bool {
    upper < lower - DOMINANCE_TOLERANCE * scale(upper, lower)
}

/// Lowest index attaining the maximum.
pub fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Lowest index attaining the minimum.
pub fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

/// `coef[e] * u(e) + sum_{i != e} coef[i] * b(i)`: the expectation of `coef`
/// when the free mass of `lower` sits on outcome `e`.
pub fn expectation_at(coef: &[f64], lower: &[f64], e: usize) -> f64 {
    let rest: f64 = coef
        .iter()
        .zip(lower)
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, (c, b))| c * b)
        .sum();
    coef[e] * implied_upper(lower, e) + rest
}

pub fn upper_expectation(coef: &[f64], lower: &[f64]) -> f64 {
    expectation_at(coef, lower, argmax(coef))
}

pub fn lower_expectation(coef: &[f64], lower: &[f64]) -> f64 {
    expectation_at(coef, lower, argmin(coef))
}

/// Expected-value interval of a chance outcome with interval values
/// `values[i]` and lower bounds `lower[i]`.
pub fn expected_interval(values: &[Interval], lower: &[f64]) -> Interval {
    let los: Vec<f64> = values.iter().map(|v| v.lo).collect();
    let his: Vec<f64> = values.iter().map(|v| v.hi).collect();
    Interval::new(lower_expectation(&los, lower), upper_expectation(&his, lower))
}

/// Alternatives whose interval is not strictly dominated by another's:
/// `d_i` is dropped iff some `d_j` has `lo(d_j) > hi(d_i)`.
/// Never empty: the alternative with the largest upper bound always survives.
pub fn admissible(intervals: &[Interval]) -> Vec<usize> {
    let best_lo = intervals.iter().map(|i| i.lo).fold(f64::NEG_INFINITY, f64::max);
    (0..intervals.len())
        .filter(|&i| !strictly_below(intervals[i].hi, best_lo))
        .collect()
}

/// Interval of the optimized value over the admissible alternatives:
/// `[min_S lo, max_S hi]`.
pub fn admissible_hull(intervals: &[Interval], set: &[usize]) -> Interval {
    let lo = set.iter().map(|&i| intervals[i].lo).fold(f64::INFINITY, f64::min);
    let hi = set.iter().map(|&i| intervals[i].hi).fold(f64::NEG_INFINITY, f64::max);
    Interval::new(lo, hi)
}

/// Greatest lower bound on `p(x)` after mixing the rows `p(. | y)` with
/// `p(y)`: `sum_y b(x|y) b(y) + (1 - sum_y b(y)) min_y b(x|y)`, written with
/// the free prior mass on the lowest-index minimizer `y_m`.
///
/// `conditional[y]` is `b(x | y)` for the fixed outcome `x`.
pub fn marginal_lower(conditional: &[f64], prior: &[f64]) -> f64 {
    expectation_at(conditional, prior, argmin(conditional))
}

/// Outcome of the posterior lower bound for one `(x, y)` entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PosteriorBound {
    /// `b*(y|x)` from the ratio of the extreme numerator and denominator.
    Determined(f64),
    /// Zero denominator at the extreme point while `x` stays reachable
    /// through another outcome; the bound is zero by convention.
    ConventionZero,
    /// No admitted distribution makes the bound meaningful.
    Indeterminate,
}

impl PosteriorBound {
    pub fn value(self) -> f64 {
        match self {
            PosteriorBound::Determined(v) => v,
            _ => 0.0,
        }
    }
}

/// Greatest lower bound on `p(y|x) = p(x|y) p(y) / sum_i p(x|y_i) p(y_i)`.
///
/// `cond_lower[i]` is `b(x | y_i)` and `cond_upper[i]` is `u(x | y_i)` for the
/// fixed outcome `x`; `prior` is the lower-bound row over `y`. The minimum puts
/// `p(x|y)` and `p(y)` at their lower bounds, every other `p(x|y_i)` at its
/// upper bound, and the free prior mass on `y_s`, the lowest-index maximizer of
/// `u(x|y_i)` over `i != y`.
pub fn posterior_lower(cond_lower: &[f64], cond_upper: &[f64], prior: &[f64], y: usize) -> PosteriorBound {
    posterior_lower_at(cond_lower, cond_upper, prior, y, posterior_pivot(cond_upper, y))
}

/// The pivot `y_s` used by [`posterior_lower`].
pub fn posterior_pivot(cond_upper: &[f64], y: usize) -> usize {
    let mut best = None;
    for i in (0..cond_upper.len()).filter(|&i| i != y) {
        match best {
            Some(b) if cond_upper[i] <= cond_upper[b] => {}
            _ => best = Some(i),
        }
    }
    best.expect("at least two outcomes")
}

/// [`posterior_lower`] with an explicit pivot `s != y`.
pub fn posterior_lower_at(cond_lower: &[f64], cond_upper: &[f64], prior: &[f64], y: usize, s: usize) -> PosteriorBound {
    let numerator = cond_lower[y] * prior[y];
    let rest: f64 = (0..prior.len())
        .filter(|&i| i != y && i != s)
        .map(|i| cond_upper[i] * prior[i])
        .sum();
    let w = numerator + cond_upper[s] * implied_upper(prior, s) + rest;
    if w > 0.0 {
        return PosteriorBound::Determined(numerator / w);
    }
    let reachable = (0..prior.len())
        .filter(|&j| j != y && j != s)
        .any(|j| cond_upper[j] * implied_upper(prior, j) > 0.0);
    if reachable {
        PosteriorBound::ConventionZero
    } else {
        PosteriorBound::Indeterminate
    }
}
