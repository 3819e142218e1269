//! Local ascent for max-min and max-sum of smooth pieces: a trust-region
//! sequential LP, then a compass search down to step 1e-7.

use crate::error::Result;
use crate::lp::{LinearProgram, LpOutcome};
use crate::polytope::dot;

/// Smallest compass step; no coordinate move of this size improves the
/// returned point.
pub(crate) const POLISH_STEP: f64 = 1e-7;
const MAX_ITERS: usize = 300;
const MIN_RADIUS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Aggregate {
    /// `min_i min(f_i, cap)`.
    Min { cap: Option<f64> },
    /// `Σ_i min(f_i, cap)`.
    Sum { cap: f64 },
}

/// A local maximization problem in `x`. Pieces are smooth; floors are
/// convex functions that must stay nonnegative and are replaced by their
/// tangent minorants in the LP, which keeps every LP step feasible.
pub(crate) trait AscentProblem: Sync {
    fn bounds(&self) -> (&[f64], &[f64]);
    fn rows(&self) -> &[(Vec<f64>, f64)];
    fn aggregate(&self) -> Aggregate;
    fn pieces(&self, x: &[f64]) -> Vec<(f64, Vec<f64>)>;

    fn floors(&self, _x: &[f64]) -> Vec<(f64, Vec<f64>)> {
        Vec::new()
    }

    /// Exact feasibility test applied to every accepted point.
    fn feasible(&self, x: &[f64]) -> bool;

    fn merit(&self, x: &[f64]) -> f64 {
        let vals = self.pieces(x).into_iter().map(|(v, _)| v);
        match self.aggregate() {
            Aggregate::Min { cap } => {
                let m = vals.fold(f64::INFINITY, f64::min);
                cap.map_or(m, |c| m.min(c))
            }
            Aggregate::Sum { cap } => vals.map(|v| v.min(cap)).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct AscentResult {
    pub x: Vec<f64>,
    pub merit: f64,
    pub iterations: usize,
}

/// One LP step from `x` inside the box `|y − x|∞ ≤ radius`; returns the
/// candidate and the model's predicted merit.
fn lp_step<P: AscentProblem + ?Sized>(p: &P, x: &[f64], radius: f64) -> Result<Option<(Vec<f64>, f64)>> {
    let n = x.len();
    let (lo, hi) = p.bounds();
    let pieces = p.pieces(x);
    let mut bounds: Vec<(f64, f64)> = (0..n)
        .map(|j| ((x[j] - radius).max(lo[j]), (x[j] + radius).min(hi[j])))
        .collect();
    if bounds.iter().any(|(a, b)| a > b) {
        return Ok(None);
    }
    let mut objective = vec![0.0; n];
    let aux = match p.aggregate() {
        Aggregate::Min { cap } => {
            objective.push(1.0);
            bounds.push((f64::NEG_INFINITY, cap.unwrap_or(f64::INFINITY)));
            vec![n; pieces.len()]
        }
        Aggregate::Sum { cap } => {
            objective.extend(std::iter::repeat(1.0).take(pieces.len()));
            bounds.extend(std::iter::repeat((f64::NEG_INFINITY, cap)).take(pieces.len()));
            (n..n + pieces.len()).collect()
        }
    };
    let width = objective.len();
    let mut lp = LinearProgram::new(objective, bounds);
    // aux ≤ f(x) + ∇f·(y − x)
    for ((v, g), col) in pieces.iter().zip(&aux) {
        let mut row: Vec<f64> = g.iter().map(|gj| -gj).collect();
        row.resize(width, 0.0);
        row[*col] = 1.0;
        lp.add_le(row, v - dot(g, x));
    }
    for (a, b) in p.rows() {
        let mut row = a.clone();
        row.resize(width, 0.0);
        lp.add_le(row, *b);
    }
    // g(x) + ∇g·(y − x) ≥ 0
    for (v, g) in p.floors(x) {
        let mut row: Vec<f64> = g.iter().map(|gj| -gj).collect();
        let rhs = v - dot(&g, x);
        row.resize(width, 0.0);
        lp.add_le(row, rhs);
    }
    match lp.solve()? {
        LpOutcome::Optimal { values, objective } => {
            let y = values[..n].iter().zip(lo.iter().zip(hi)).map(|(v, (l, h))| v.clamp(*l, *h)).collect();
            Ok(Some((y, objective)))
        }
        LpOutcome::Infeasible | LpOutcome::Unbounded => Ok(None),
    }
}

/// Trust-region SLP from a feasible `start`, followed by [`polish`].
pub(crate) fn ascend<P: AscentProblem + ?Sized>(p: &P, start: &[f64], radius0: f64) -> Result<AscentResult> {
    let mut x = start.to_vec();
    let mut fx = p.merit(&x);
    let mut radius = radius0;
    let mut iterations = 0;
    while iterations < MAX_ITERS && radius >= MIN_RADIUS {
        iterations += 1;
        let Some((y, model)) = lp_step(p, &x, radius)? else {
            radius /= 4.0;
            continue;
        };
        let predicted = model - fx;
        if predicted <= 1e-14 * fx.abs().max(1.0) {
            break;
        }
        let fy = if p.feasible(&y) { p.merit(&y) } else { f64::NEG_INFINITY };
        let ratio = (fy - fx) / predicted;
        if ratio >= 0.1 {
            let step = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            x = y;
            fx = fy;
            if ratio > 0.75 && step >= 0.99 * radius {
                radius *= 2.0;
            }
        } else {
            radius /= 4.0;
        }
    }
    let (x, merit) = polish(p, x, fx, radius0.max(POLISH_STEP));
    Ok(AscentResult { x, merit, iterations })
}

/// Compass search with steps shrinking tenfold from `h0` to
/// [`POLISH_STEP`]; stops when no `±h·e_j` move improves at the last step.
pub(crate) fn polish<P: AscentProblem + ?Sized>(p: &P, mut x: Vec<f64>, mut fx: f64, h0: f64) -> (Vec<f64>, f64) {
    let (lo, hi) = p.bounds();
    let mut h = h0.min(1e-2).max(POLISH_STEP);
    loop {
        let mut moves = 0;
        'sweep: while moves < 10_000 {
            for j in 0..x.len() {
                for sign in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[j] = (y[j] + sign * h).clamp(lo[j], hi[j]);
                    if y[j] == x[j] || !p.feasible(&y) {
                        continue;
                    }
                    let fy = p.merit(&y);
                    if fy > fx {
                        x = y;
                        fx = fy;
                        moves += 1;
                        continue 'sweep;
                    }
                }
            }
            break;
        }
        if h <= POLISH_STEP {
            break;
        }
        h = (h / 10.0).max(POLISH_STEP);
    }
    (x, fx)
}

/// Picks the best result: highest merit, then lexicographically smallest x.
pub(crate) fn best_of(results: Vec<AscentResult>) -> Option<AscentResult> {
    results.into_iter().reduce(|a, b| {
        if b.merit > a.merit || (b.merit == a.merit && crate::polytope::lex_cmp(&b.x, &a.x).is_lt()) {
            b
        } else {
            a
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// max min(x, 1 − x, y) on [0,1]², optimum 0.5 along y ≥ 0.5.
    struct Tent;

    impl AscentProblem for Tent {
        fn bounds(&self) -> (&[f64], &[f64]) {
            (&[0.0, 0.0], &[1.0, 1.0])
        }
        fn rows(&self) -> &[(Vec<f64>, f64)] {
            &[]
        }
        fn aggregate(&self) -> Aggregate {
            Aggregate::Min { cap: None }
        }
        fn pieces(&self, x: &[f64]) -> Vec<(f64, Vec<f64>)> {
            vec![(x[0], vec![1.0, 0.0]), (1.0 - x[0], vec![-1.0, 0.0]), (x[1], vec![0.0, 1.0])]
        }
        fn feasible(&self, _: &[f64]) -> bool {
            true
        }
    }

    #[test]
    fn max_min_reaches_kink() {
        let r = ascend(&Tent, &[0.1, 0.0], 0.5).unwrap();
        assert!((r.merit - 0.5).abs() < 1e-9, "{r:?}");
    }

    /// max Σ min(f_i, 1) for f = (2x, 2y) subject to x + y ≤ 1 and the
    /// convex floor x² + y² ≥ 0.6.
    struct Disk {
        rows: Vec<(Vec<f64>, f64)>,
    }

    impl AscentProblem for Disk {
        fn bounds(&self) -> (&[f64], &[f64]) {
            (&[0.0, 0.0], &[1.0, 1.0])
        }
        fn rows(&self) -> &[(Vec<f64>, f64)] {
            &self.rows
        }
        fn aggregate(&self) -> Aggregate {
            Aggregate::Sum { cap: 1.0 }
        }
        fn pieces(&self, x: &[f64]) -> Vec<(f64, Vec<f64>)> {
            vec![(2.0 * x[0], vec![2.0, 0.0]), (2.0 * x[1], vec![0.0, 2.0])]
        }
        fn floors(&self, x: &[f64]) -> Vec<(f64, Vec<f64>)> {
            vec![(x[0] * x[0] + x[1] * x[1] - 0.6, vec![2.0 * x[0], 2.0 * x[1]])]
        }
        fn feasible(&self, x: &[f64]) -> bool {
            x[0] + x[1] <= 1.0 + 1e-9 && x[0] * x[0] + x[1] * x[1] >= 0.6
        }
    }

    #[test]
    fn max_sum_keeps_floor() {
        let p = Disk { rows: vec![(vec![1.0, 1.0], 1.0)] };
        let r = ascend(&p, &[1.0, 0.0], 0.5).unwrap();
        assert!(p.feasible(&r.x));
        // best is where x + y = 1 meets the circle: y = 1/2 − √0.05
        assert!((r.merit - (2.0 - 2.0 * 0.05f64.sqrt())).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn best_prefers_lex_smaller_on_ties() {
        let a = AscentResult { x: vec![1.0], merit: 1.0, iterations: 0 };
        let b = AscentResult { x: vec![0.5], merit: 1.0, iterations: 0 };
        assert_eq!(best_of(vec![a, b.clone()]).unwrap(), b);
    }
}
