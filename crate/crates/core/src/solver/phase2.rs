//! Sum phase: among points keeping every grade at λ*, maximize the sum of
//! grades.

use rayon::prelude::*;
use serde::Serialize;

use super::ascent::{ascend, best_of, polish, Aggregate, AscentProblem, AscentResult, POLISH_STEP};
use super::oracle::{grid_maximize, OracleHit};
use super::phase1::{interior_points, Certification, Phase1Result, SolverSettings};
use super::system::{LevelRegion, MembershipSystem, MembershipValues};
use crate::error::{Error, Result};

/// The level set is taken at `λ* − LEVEL_SLACK` to stay clear of the
/// knife edge where it collapses to a point.
pub const LEVEL_SLACK: f64 = 1e-9;
/// Allowed shortfall of the local sum against the grid oracle.
pub const SUM_TOL: f64 = 1e-3;
/// A new point replaces `x*` only if it raises the sum by more than this.
const IMPROVEMENT_TOL: f64 = 1e-12;

/// A level-set point found by the grid oracle with a clearly larger sum
/// than the local search reached on its own.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleDiscrepancy {
    pub point: Vec<f64>,
    pub oracle_sum: f64,
    pub local_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Phase2Result {
    pub x_eff: Vec<f64>,
    pub mu_objectives: Vec<f64>,
    pub mu_constraints: Vec<f64>,
    pub mu_upper: Vec<f64>,
    pub mu_lower: Vec<f64>,
    pub objective_values: Vec<f64>,
    pub sum_memberships: f64,
    pub min_membership: f64,
    /// Level the set was taken at, `λ* − 1e-9`.
    pub level: f64,
    pub oracle: Option<OracleHit>,
    pub discrepancy: Option<OracleDiscrepancy>,
    pub certification: Certification,
    pub oracle_points: u64,
}

impl Phase2Result {
    pub fn memberships(&self) -> MembershipValues {
        MembershipValues {
            objectives: self.mu_objectives.clone(),
            constraints: self.mu_constraints.clone(),
            upper: self.mu_upper.clone(),
            lower: self.mu_lower.clone(),
        }
    }
}

struct SumProblem<'a> {
    system: &'a MembershipSystem,
    region: &'a LevelRegion,
    rows: Vec<(Vec<f64>, f64)>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl<'a> SumProblem<'a> {
    fn new(system: &'a MembershipSystem, region: &'a LevelRegion) -> Self {
        let n = system.n();
        let rows: Vec<_> = region.polytope.rows().map(|(a, b)| (a.to_vec(), b)).collect();
        let split = rows.len() - 2 * n;
        let hi = rows[split..split + n].iter().map(|r| r.1).collect();
        let lo = rows[split + n..].iter().map(|r| -r.1).collect();
        Self { system, region, rows: rows[..split].to_vec(), lo, hi }
    }

    fn admissible(&self, x: &[f64]) -> bool {
        x.iter().all(|v| *v >= 0.0) && self.system.mu_d(x) >= self.region.level
    }
}

impl AscentProblem for SumProblem<'_> {
    fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }
    fn rows(&self) -> &[(Vec<f64>, f64)] {
        &self.rows
    }
    fn aggregate(&self) -> Aggregate {
        Aggregate::Sum { cap: 1.0 }
    }
    fn pieces(&self, x: &[f64]) -> Vec<(f64, Vec<f64>)> {
        self.system.cores(x)
    }
    fn floors(&self, x: &[f64]) -> Vec<(f64, Vec<f64>)> {
        self.system
            .objectives
            .iter()
            .zip(&self.region.thresholds)
            .map(|(o, thr)| (o.value(x) - thr, o.gradient(x)))
            .collect()
    }
    fn feasible(&self, x: &[f64]) -> bool {
        self.admissible(x)
    }
    fn merit(&self, x: &[f64]) -> f64 {
        self.system.values(x).sum()
    }
}

fn result(
    system: &MembershipSystem,
    x: Vec<f64>,
    level: f64,
    oracle: Option<OracleHit>,
    discrepancy: Option<OracleDiscrepancy>,
    certification: Certification,
    oracle_points: u64,
) -> Phase2Result {
    let v = system.values(&x);
    Phase2Result {
        objective_values: system.objective_values(&x),
        sum_memberships: v.sum(),
        min_membership: v.min(),
        x_eff: x,
        mu_objectives: v.objectives,
        mu_constraints: v.constraints,
        mu_upper: v.upper,
        mu_lower: v.lower,
        level,
        oracle,
        discrepancy,
        certification,
        oracle_points,
    }
}

/// Grid oracle over the level set. Points outside score below every point
/// inside, graded by how close they come, so refinement homes in on the set
/// even when the first grid misses it.
fn level_set_oracle(
    system: &MembershipSystem,
    level: f64,
    settings: &SolverSettings,
) -> Result<(Option<OracleHit>, u64)> {
    let bounds = settings.oracle_box(system)?;
    let out = grid_maximize(
        |x| {
            let v = system.values(x);
            let min = v.min();
            Some(if min >= level { v.sum() } else { min - level - 1.0 })
        },
        &bounds,
        &settings.oracle,
    )?;
    Ok((out.best.filter(|h| h.value >= 0.0), out.evaluated))
}

/// Maximizes the sum of grades over `{x ≥ 0 : every grade ≥ λ* − 1e-9}`,
/// seeded at `x*`, at the level-set vertices and at random level-set
/// points, and compares with the grid oracle restricted to the level set.
pub fn solve_phase2(system: &MembershipSystem, phase1: &Phase1Result, settings: &SolverSettings) -> Result<Phase2Result> {
    let level = phase1.lambda_star - LEVEL_SLACK;
    if level <= 0.0 {
        return Err(Error::NoPositiveLevel);
    }
    let region = system.level_region(level)?;
    let problem = SumProblem::new(system, &region);
    let x_star = &phase1.x_star;
    if !problem.admissible(x_star) {
        return Err(Error::EmptyLevelSet(level));
    }
    let vertices: Vec<Vec<f64>> = region.polytope.enumerate_vertices()?.into_iter().map(|v| v.x).collect();
    let mut rng = settings.rng(2);
    let mut seeds: Vec<Vec<f64>> = vertices.iter().filter(|v| problem.admissible(v)).cloned().collect();
    seeds.extend(interior_points(&vertices, settings.starts, &mut rng).into_iter().filter(|p| problem.admissible(p)));
    let base = AscentResult { x: x_star.clone(), merit: problem.merit(x_star), iterations: 0 };
    let radius = 0.25 * system.outer_upper().iter().cloned().fold(0.0, f64::max).max(1e-3);
    let mut results = vec![ascend(&problem, x_star, radius)?];
    results.extend(seeds.par_iter().map(|s| ascend(&problem, s, radius)).collect::<Result<Vec<_>>>()?);
    let local = match best_of(results) {
        Some(r) if r.merit > base.merit + IMPROVEMENT_TOL => r,
        _ => base,
    };

    let (oracle, oracle_points) = level_set_oracle(system, level, settings)?;
    let Some(hit) = oracle.clone() else {
        return Ok(result(system, local.x, level, None, None, Certification::NoOracleEvidence, oracle_points));
    };
    if hit.value <= local.merit + SUM_TOL {
        return Ok(result(system, local.x, level, oracle, None, Certification::Certified, oracle_points));
    }
    let discrepancy = OracleDiscrepancy { point: hit.point.clone(), oracle_sum: hit.value, local_sum: local.merit };
    let (px, pf) = polish(&problem, hit.point.clone(), hit.value, POLISH_STEP * 1e5);
    let (x, certification) = if pf > local.merit {
        (px, if pf >= hit.value - SUM_TOL { Certification::Certified } else { Certification::Uncertified })
    } else {
        (local.x, Certification::Uncertified)
    };
    Ok(result(system, x, level, oracle, Some(discrepancy), certification, oracle_points))
}

/// Phase 2 from the grid oracle alone.
pub fn solve_phase2_oracle_only(
    system: &MembershipSystem,
    phase1: &Phase1Result,
    settings: &SolverSettings,
) -> Result<Phase2Result> {
    let level = phase1.lambda_star - LEVEL_SLACK;
    if level <= 0.0 {
        return Err(Error::NoPositiveLevel);
    }
    let (oracle, oracle_points) = level_set_oracle(system, level, settings)?;
    let x = oracle.as_ref().map_or_else(|| phase1.x_star.clone(), |h| h.point.clone());
    Ok(result(system, x, level, oracle, None, Certification::OracleOnly, oracle_points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crisp::AspirationInterval;
    use crate::instance::{FuzzyBounds, FuzzyMoqpInstance, FuzzyRow, QuadraticObjective};
    use crate::solver::oracle::GridOracleConfig;
    use crate::solver::phase1::solve_phase1;
    use crate::fixtures::illustrative_system;
    use crate::solver::system::build_system;

    fn quick() -> SolverSettings {
        SolverSettings { oracle: GridOracleConfig { resolution: 101, ..Default::default() }, ..Default::default() }
    }

    #[test]
    fn illustrative_sum_phase() {
        let sys = illustrative_system();
        let p1 = solve_phase1(&sys, &quick()).unwrap();
        let p2 = solve_phase2(&sys, &p1, &quick()).unwrap();
        let expected = [0.3310024, 0.3401065, 0.362496, 0.3310024, 1.0, 1.0, 0.3310024, 1.0];
        for (got, want) in p2.memberships().flat().iter().zip(expected) {
            assert!((got - want).abs() < 1e-3, "{:?}", p2);
        }
        assert!((p2.objective_values[0] - 82.092806).abs() < 0.5);
        assert!((p2.objective_values[1] - 150.569993).abs() < 0.5);
        assert!(p2.min_membership >= p1.lambda_star - 1e-8);
        assert!(p2.sum_memberships >= 8.0 * p1.lambda_star - 1e-8);
    }

    #[test]
    fn reported_grades_match_evaluation() {
        let sys = illustrative_system();
        let p1 = solve_phase1(&sys, &quick()).unwrap();
        let p2 = solve_phase2(&sys, &p1, &quick()).unwrap();
        let direct = sys.values(&p2.x_eff).flat();
        for (a, b) in p2.memberships().flat().iter().zip(direct) {
            assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn saturated_system_keeps_x_star() {
        let inst = FuzzyMoqpInstance::new(
            vec![QuadraticObjective::new(vec![1.0, 1.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]])],
            vec![FuzzyRow { a: vec![1.0, 1.0], d: vec![0.1, 0.1], b: 1e6, p: 1.0 }],
            FuzzyBounds { l: vec![0.0; 2], r: vec![1.0; 2], u: vec![5.0; 2], t: vec![1.0; 2] },
        );
        let sys = build_system(&inst, &[AspirationInterval { lo: 0.0, hi: 1.0 }]).unwrap();
        let p1 = solve_phase1(&sys, &quick()).unwrap();
        let p2 = solve_phase2(&sys, &p1, &quick()).unwrap();
        assert_eq!(p2.x_eff, p1.x_star);
        assert_eq!(p2.sum_memberships, sys.len() as f64);
    }

    #[test]
    fn rejects_inconsistent_phase1() {
        let sys = illustrative_system();
        let mut p1 = solve_phase1(&sys, &quick()).unwrap();
        p1.x_star = vec![0.0, 0.0];
        assert!(matches!(solve_phase2(&sys, &p1, &quick()), Err(Error::EmptyLevelSet(_))));
    }
}
