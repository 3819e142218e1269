//! Grid searches for points dominating a candidate, either in objective
//! values and grades together (fuzzy efficiency) or in objective values over
//! a crisp region (Pareto optimality).

use serde::Serialize;

use super::oracle::{grid_maximize, GridOracleConfig};
use super::system::MembershipSystem;
use crate::error::Result;
use crate::instance::QuadraticObjective;
use crate::polytope::Polyhedron;

/// Slack on "no worse" comparisons.
pub const WEAK_TOL: f64 = 1e-9;
/// Minimum gain that counts as a strict improvement.
pub const STRICT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EfficiencyVerdict {
    /// No dominating point exists at grid resolution.
    Efficient { points_examined: u64, exhaustive: bool },
    /// `by` is no worse in every criterion and better by `improvement` in
    /// at least one.
    Dominated { by: Vec<f64>, improvement: f64, points_examined: u64 },
    Inconclusive { reason: String },
}

impl EfficiencyVerdict {
    pub fn is_dominated(&self) -> bool {
        matches!(self, EfficiencyVerdict::Dominated { .. })
    }
}

/// Criterion vectors compared componentwise, each with a scale used only to
/// steer the search.
struct Dominance {
    base: Vec<f64>,
    scales: Vec<f64>,
}

impl Dominance {
    /// Largest raw gain if `y` dominates, else `None`.
    fn gain(&self, y: &[f64]) -> Option<f64> {
        let mut best = f64::NEG_INFINITY;
        for (a, b) in y.iter().zip(&self.base) {
            if *a < b - WEAK_TOL {
                return None;
            }
            best = best.max(a - b);
        }
        (best > STRICT_TOL).then_some(best)
    }

    /// `1 + gain` for dominators, otherwise the worst scaled shortfall
    /// (always < 1), so the grid zooms towards near-dominators.
    fn score(&self, y: &[f64]) -> f64 {
        if let Some(g) = self.gain(y) {
            return 1.0 + g;
        }
        let margin = y
            .iter()
            .zip(&self.base)
            .zip(&self.scales)
            .map(|((a, b), s)| (a - b) / s)
            .fold(f64::INFINITY, f64::min);
        margin.min(0.0).max(-1e300)
    }
}

fn invalid(x: &[f64], n: usize) -> Option<EfficiencyVerdict> {
    if x.len() != n {
        return Some(EfficiencyVerdict::Inconclusive { reason: format!("candidate has {} entries, expected {n}", x.len()) });
    }
    if x.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Some(EfficiencyVerdict::Inconclusive { reason: "candidate must be finite and nonnegative".into() });
    }
    None
}

fn scan<F>(criteria: F, dom: &Dominance, bounds: &[(f64, f64)], config: &GridOracleConfig, admissible: impl Fn(&[f64]) -> bool + Sync) -> Result<EfficiencyVerdict>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    let out = grid_maximize(|y| admissible(y).then(|| dom.score(&criteria(y))), bounds, config)?;
    Ok(match out.best {
        Some(hit) if hit.value > 1.0 => EfficiencyVerdict::Dominated {
            improvement: hit.value - 1.0,
            by: hit.point,
            points_examined: out.evaluated,
        },
        _ => EfficiencyVerdict::Efficient { points_examined: out.evaluated, exhaustive: out.exhaustive },
    })
}

/// Objective values followed by every constraint and bound grade.
fn fuzzy_criteria(system: &MembershipSystem, x: &[f64]) -> Vec<f64> {
    let v = system.values(x);
    let mut c = system.objective_values(x);
    c.extend(v.constraints);
    c.extend(v.upper);
    c.extend(v.lower);
    c
}

/// Searches the oracle box for a point no worse than `x_cand` in every
/// objective value and constraint/bound grade and strictly better in one.
pub fn check_fuzzy_efficiency(
    system: &MembershipSystem,
    x_cand: &[f64],
    config: &GridOracleConfig,
) -> Result<EfficiencyVerdict> {
    if let Some(v) = invalid(x_cand, system.n()) {
        return Ok(v);
    }
    let base = fuzzy_criteria(system, x_cand);
    let mut scales: Vec<f64> = system.objective_mfs.iter().map(|mf| (mf.hi - mf.lo).max(1e-9)).collect();
    scales.resize(base.len(), 1.0);
    let dom = Dominance { base, scales };
    let bounds = config.box_or(system.default_box())?;
    scan(|y| fuzzy_criteria(system, y), &dom, &bounds, config, |_| true)
}

/// Searches the crisp region for a point no worse in every objective and
/// strictly better in one.
pub fn check_pareto(
    objectives: &[QuadraticObjective],
    region: &Polyhedron,
    x_cand: &[f64],
    config: &GridOracleConfig,
) -> Result<EfficiencyVerdict> {
    if let Some(v) = invalid(x_cand, region.dim()) {
        return Ok(v);
    }
    let values = |y: &[f64]| objectives.iter().map(|o| o.value(y)).collect::<Vec<_>>();
    let base = values(x_cand);
    let scales = base.iter().map(|b| b.abs().max(1.0)).collect();
    let dom = Dominance { base, scales };
    let vertices = region.enumerate_vertices()?;
    if let Some((v, g)) = vertices
        .iter()
        .filter_map(|v| dom.gain(&values(&v.x)).map(|g| (v, g)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
    {
        return Ok(EfficiencyVerdict::Dominated { by: v.x.clone(), improvement: g, points_examined: vertices.len() as u64 });
    }
    if vertices.is_empty() {
        return Ok(EfficiencyVerdict::Inconclusive { reason: "region is empty".into() });
    }
    let n = region.dim();
    let bounds: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let lo = vertices.iter().map(|v| v.x[j]).fold(f64::INFINITY, f64::min);
            let hi = vertices.iter().map(|v| v.x[j]).fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        })
        .collect();
    let cfg = GridOracleConfig { bounds: None, ..config.clone() };
    scan(values, &dom, &bounds, &cfg, |y| region.contains(y, 1e-9))
}
