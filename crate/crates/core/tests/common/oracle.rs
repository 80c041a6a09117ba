//! Brute-force oracles and exact point evaluations.
//!
//! Nothing here calls the library's bound formulas: polytope vertices come
//! from tight half-space enumeration, extrema from exhaustive search.

use super::problems::Problem;

/// Vertices of `{p : p >= b, sum p = 1}`. A vertex makes `k - 1` of the
/// inequalities tight; the remaining coordinate is then fixed by the sum.
pub fn vertices(lower: &[f64]) -> Vec<Vec<f64>> {
    let k = lower.len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mask in 0u32..(1 << k) {
        if mask.count_ones() as usize != k - 1 {
            continue;
        }
        let loose = (0..k).find(|&i| mask & (1 << i) == 0).unwrap();
        let tight: f64 = (0..k).filter(|&i| i != loose).map(|i| lower[i]).sum();
        let rest = 1.0 - tight;
        if rest < lower[loose] - 1e-12 {
            continue;
        }
        let mut p = lower.to_vec();
        p[loose] = rest.max(lower[loose]);
        if !out.iter().any(|q| q.iter().zip(&p).all(|(a, b)| (a - b).abs() <= 1e-15)) {
            out.push(p);
        }
    }
    out
}

/// Every corner of a box of intervals.
pub fn corners(values: &[(f64, f64)]) -> Vec<Vec<f64>> {
    let k = values.len();
    (0u32..(1 << k))
        .map(|mask| (0..k).map(|i| if mask & (1 << i) == 0 { values[i].0 } else { values[i].1 }).collect())
        .collect()
}

/// Cartesian product of per-coordinate choices.
pub fn product<T: Clone>(sets: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for set in sets {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<T>| {
                set.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(min, max)` of `sum p v` over the row's vertices crossed with the value
/// box corners.
pub fn expectation_range(lower: &[f64], values: &[(f64, f64)]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in vertices(lower) {
        for v in corners(values) {
            let e = dot(&p, &v);
            lo = lo.min(e);
            hi = hi.max(e);
        }
    }
    (lo, hi)
}

/// `p(x) = sum_i p(x|y_i) p(y_i)`.
pub fn marginal(prior: &[f64], cond: &[Vec<f64>], x: usize) -> f64 {
    prior.iter().zip(cond).map(|(p, c)| p * c[x]).sum()
}

/// `p(y|x)` by Bayes' rule; `None` when `p(x) = 0`.
pub fn posterior(prior: &[f64], cond: &[Vec<f64>], x: usize, y: usize) -> Option<f64> {
    let den = marginal(prior, cond, x);
    (den > 0.0).then(|| prior[y] * cond[y][x] / den)
}

/// Members of the prior row crossed with members of every conditional row.
fn members(prior: &[f64], cond: &[Vec<f64>]) -> Vec<(Vec<f64>, Vec<Vec<f64>>)> {
    let cond_vertices: Vec<Vec<Vec<f64>>> = cond.iter().map(|c| vertices(c)).collect();
    let mut out = Vec::new();
    for p in vertices(prior) {
        for c in product(&cond_vertices) {
            out.push((p.clone(), c));
        }
    }
    out
}

/// Smallest `p(x)` over all vertex combinations.
pub fn marginal_min(prior: &[f64], cond: &[Vec<f64>], x: usize) -> f64 {
    members(prior, cond).iter().map(|(p, c)| marginal(p, c, x)).fold(f64::INFINITY, f64::min)
}

/// Smallest `p(y|x)` over vertex combinations with `p(x) > 0`; `None` when
/// every combination makes `x` impossible.
pub fn posterior_min(prior: &[f64], cond: &[Vec<f64>], x: usize, y: usize) -> Option<f64> {
    members(prior, cond).iter().filter_map(|(p, c)| posterior(p, c, x, y)).reduce(f64::min)
}

/// Ways to split `units` among `k` parts.
pub fn compositions(units: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![units]];
    }
    (0..=units)
        .flat_map(|first| {
            compositions(units - first, k - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Points per coordinate of the grid refinement.
pub const GRID_POINTS: usize = 50;

/// Above this many grid points, conditional coordinates use their endpoints
/// only; the prior keeps the full simplex grid.
pub const GRID_LIMIT: usize = 200_000;

/// Smallest `p(y|x)` over a grid: the prior's free mass split in steps of
/// `1 / (points - 1)`, and each `p(x|y_i)` on `points` evenly spaced values
/// of `[b, u]`. Returns the minimum and the grid size.
pub fn posterior_grid_min(prior: &[f64], cond: &[Vec<f64>], x: usize, y: usize, points: usize) -> (Option<f64>, usize) {
    let k = prior.len();
    let steps = points - 1;
    let free = (1.0 - prior.iter().sum::<f64>()).max(0.0);
    let priors: Vec<Vec<f64>> = compositions(steps, k)
        .into_iter()
        .map(|c| prior.iter().zip(&c).map(|(b, &n)| b + free * n as f64 / steps as f64).collect())
        .collect();
    let spans: Vec<(f64, f64)> = cond
        .iter()
        .map(|row| {
            let others: f64 = row.iter().enumerate().filter(|&(o, _)| o != x).map(|(_, b)| b).sum();
            (row[x], (1.0 - others).max(row[x]))
        })
        .collect();
    let full = priors.len() * points.pow(k as u32);
    let per_axis = if full <= GRID_LIMIT { points } else { 2 };
    let axes: Vec<Vec<f64>> = spans
        .iter()
        .map(|&(b, u)| (0..per_axis).map(|i| b + (u - b) * i as f64 / (per_axis - 1) as f64).collect())
        .collect();
    let grid = product(&axes);
    let mut best: Option<f64> = None;
    for p in &priors {
        for c in &grid {
            let den: f64 = p.iter().zip(c).map(|(a, b)| a * b).sum();
            if den > 0.0 {
                let r = p[y] * c[y] / den;
                best = Some(best.map_or(r, |m| m.min(r)));
            }
        }
    }
    (best, priors.len() * grid.len())
}

/// Alternatives whose upper value is not below another's lower value by more
/// than the dominance tolerance.
pub fn undominated(values: &[(f64, f64)]) -> Vec<usize> {
    (0..values.len())
        .filter(|&i| {
            !values.iter().any(|&(lo, _)| {
                let hi = values[i].1;
                hi < lo - 1e-9 * 1f64.max(hi.abs()).max(lo.abs())
            })
        })
        .collect()
}

/// Indices attaining the maximum of `xs` within `tol`.
pub fn maximizers(xs: &[f64], tol: f64) -> Vec<usize> {
    let best = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..xs.len()).filter(|&i| xs[i] >= best - tol).collect()
}

pub fn minimizers(xs: &[f64], tol: f64) -> Vec<usize> {
    let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
    maximizers(&neg, tol)
}

/// `b` with its free mass on outcome `e`.
pub fn mass_on(lower: &[f64], e: usize) -> Vec<f64> {
    let free = 1.0 - lower.iter().sum::<f64>();
    let mut p = lower.to_vec();
    p[e] += free.max(0.0);
    p
}

/// How the output of one problem compares with its oracle.
#[derive(Debug, Clone, Default)]
pub struct Comparison {
    /// Largest deviation of a checked bound from the oracle.
    pub worst: f64,
    pub checked: usize,
    /// Reversal rows stored as vacuous zeros; checked for soundness only.
    pub indeterminate: usize,
    pub failures: Vec<String>,
}

impl Comparison {
    pub fn record(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let err = (got - want).abs();
        self.checked += 1;
        self.worst = self.worst.max(err);
        if !super::close(got, want, tol) {
            self.failures.push(format!("{}: got {}, oracle {}", what, got, want));
        }
    }

    pub fn merge(&mut self, other: Comparison) {
        self.worst = self.worst.max(other.worst);
        self.checked += other.checked;
        self.indeterminate += other.indeterminate;
        self.failures.extend(other.failures);
    }
}

/// Compares a problem's output with the vertex oracle. Decision problems are
/// compared against the printed formula `[min_S lo, max_S hi]`.
pub fn compare_vertex(problem: &Problem, tol: f64) -> Comparison {
    let mut c = Comparison::default();
    match problem {
        Problem::Expectation { row, lower, values, out } => {
            let (lo, hi) = expectation_range(lower, values);
            c.record(&format!("row {} lower", row), out.lo, lo, tol);
            c.record(&format!("row {} upper", row), out.hi, hi, tol);
        }
        Problem::Marginal { row, prior, cond, out } => {
            for (x, &got) in out.iter().enumerate() {
                c.record(&format!("marginal row {} outcome {}", row, x), got, marginal_min(prior, cond, x), tol);
            }
        }
        Problem::Posterior { row, prior, cond, x, out, indeterminate } => {
            for (y, &got) in out.iter().enumerate() {
                match posterior_min(prior, cond, *x, y) {
                    _ if *indeterminate => {
                        if got != 0.0 {
                            c.failures.push(format!("posterior row {}: indeterminate but stored {}", row, got));
                        }
                    }
                    Some(want) => c.record(&format!("posterior row {} outcome {}", row, y), got, want, tol),
                    None => c.failures.push(format!("posterior row {}: no admitted member reaches x", row)),
                }
            }
            if *indeterminate {
                c.indeterminate += 1;
            }
        }
        Problem::Decision { row, values, out, set } => {
            let s = undominated(values);
            if &s != set {
                c.failures.push(format!("decision row {}: S = {:?}, oracle {:?}", row, set, s));
            }
            let lo = s.iter().map(|&i| values[i].0).fold(f64::INFINITY, f64::min);
            let hi = s.iter().map(|&i| values[i].1).fold(f64::NEG_INFINITY, f64::max);
            c.record(&format!("decision row {} lower", row), out.lo, lo, tol);
            c.record(&format!("decision row {} upper", row), out.hi, hi, tol);
        }
    }
    c
}

/// Checks a problem whose inputs are a point member: its exact answer must
/// satisfy the output bounds.
pub fn member_violations(problem: &Problem, tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    let below = |got: f64, bound: f64| got < bound - tol * 1f64.max(bound.abs());
    match problem {
        Problem::Expectation { row, lower, values, out: bounds } => {
            let v: Vec<f64> = values.iter().map(|v| v.0).collect();
            let e = dot(lower, &v);
            if below(e, bounds.lo) || below(bounds.hi, e) {
                out.push(format!("row {}: exact {} outside [{}, {}]", row, e, bounds.lo, bounds.hi));
            }
        }
        Problem::Marginal { row, prior, cond, out: bounds } => {
            for (x, &b) in bounds.iter().enumerate() {
                let p = marginal(prior, cond, x);
                if below(p, b) {
                    out.push(format!("marginal row {} outcome {}: exact {} below {}", row, x, p, b));
                }
            }
        }
        Problem::Posterior { row, prior, cond, x, out: bounds, .. } => {
            for (y, &b) in bounds.iter().enumerate() {
                if let Some(p) = posterior(prior, cond, *x, y) {
                    if below(p, b) {
                        out.push(format!("posterior row {} outcome {}: exact {} below {}", row, y, p, b));
                    }
                }
            }
        }
        Problem::Decision { row, values, out: bounds, .. } => {
            let best = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
            if below(best, bounds.lo) || below(bounds.hi, best) {
                out.push(format!("decision row {}: exact {} outside [{}, {}]", row, best, bounds.lo, bounds.hi));
            }
        }
    }
    out
}

/// Bound attainment by constructed extremal members.
#[derive(Debug, Clone, Default)]
pub struct Attainment {
    pub comparison: Comparison,
    /// `max_d lo - min_S lo` for decision rows: how far the printed lower
    /// end sits below the attainable one.
    pub decision_gaps: Vec<f64>,
    /// Reversal entries whose extremal member makes `x` impossible.
    pub unreachable: usize,
}

/// Builds, for each output bound, the member that should attain it, and
/// evaluates the exact transform there.
pub fn attain(problem: &Problem, tol: f64) -> Attainment {
    let mut a = Attainment::default();
    let c = &mut a.comparison;
    match problem {
        Problem::Expectation { row, lower, values, out } => {
            let his: Vec<f64> = values.iter().map(|v| v.1).collect();
            let los: Vec<f64> = values.iter().map(|v| v.0).collect();
            let r = maximizers(&his, 0.0)[0];
            let s = minimizers(&los, 0.0)[0];
            c.record(&format!("row {} upper", row), out.hi, dot(&mass_on(lower, r), &his), tol);
            c.record(&format!("row {} lower", row), out.lo, dot(&mass_on(lower, s), &los), tol);
        }
        Problem::Marginal { row, prior, cond, out } => {
            for (x, &got) in out.iter().enumerate() {
                let column: Vec<f64> = cond.iter().map(|c| c[x]).collect();
                let m = minimizers(&column, 0.0)[0];
                let p = mass_on(prior, m);
                let rows: Vec<Vec<f64>> = cond.iter().map(|c| mass_on(c, (x + 1) % c.len())).collect();
                c.record(&format!("marginal row {} outcome {}", row, x), got, marginal(&p, &rows, x), tol);
            }
        }
        Problem::Posterior { row, prior, cond, x, out, indeterminate } => {
            if *indeterminate {
                c.indeterminate += 1;
                return a;
            }
            let k = prior.len();
            for (y, &got) in out.iter().enumerate() {
                let upper: Vec<f64> = cond.iter().map(|r| mass_on(r, *x)[*x]).collect();
                let others: Vec<usize> = (0..k).filter(|&i| i != y).collect();
                let best = others.iter().map(|&i| upper[i]).fold(f64::NEG_INFINITY, f64::max);
                let s = *others.iter().find(|&&i| upper[i] == best).unwrap();
                let p = mass_on(prior, s);
                let rows: Vec<Vec<f64>> = (0..k)
                    .map(|i| if i == y { mass_on(&cond[i], (*x + 1) % cond[i].len()) } else { mass_on(&cond[i], *x) })
                    .collect();
                match posterior(&p, &rows, *x, y) {
                    Some(v) => c.record(&format!("posterior row {} outcome {}", row, y), got, v, tol),
                    None => a.unreachable += 1,
                }
            }
        }
        Problem::Decision { row, values, out, .. } => {
            let best_hi = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
            let best_lo = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
            c.record(&format!("decision row {} upper", row), out.hi, best_hi, tol);
            a.decision_gaps.push(best_lo - out.lo);
        }
    }
    a
}
