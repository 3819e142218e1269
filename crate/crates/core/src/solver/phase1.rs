//! Max-min phase: the largest level every grade can reach simultaneously.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ascent::{ascend, best_of, Aggregate, AscentProblem, AscentResult};
use super::oracle::{grid_maximize, GridOracleConfig, OracleHit};
use super::system::{LevelRegion, MembershipId, MembershipSystem, MembershipValues};
use crate::error::{Error, Result};

/// Grades within this distance of λ* are reported as binding.
pub const BINDING_TOL: f64 = 1e-6;
/// Allowed shortfall of the local result against the grid oracle.
pub const CERTIFY_TOL: f64 = 1e-4;
/// A trial level is feasible when the worst normalized objective slack is
/// at least `-FEASIBILITY_TOL`.
const FEASIBILITY_TOL: f64 = 1e-12;

/// Knobs shared by both phases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverSettings {
    pub oracle: GridOracleConfig,
    /// Random starting points per multistart, on top of polytope vertices.
    pub starts: usize,
    pub seed: u64,
    /// Width at which the bisection on λ stops.
    pub tol_lambda: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { oracle: GridOracleConfig::default(), starts: 16, seed: 0, tol_lambda: 1e-6 }
    }
}

impl SolverSettings {
    pub(crate) fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    pub(crate) fn oracle_box(&self, system: &MembershipSystem) -> Result<Vec<(f64, f64)>> {
        self.oracle.box_or(system.default_box())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// The local result matches or beats the grid oracle.
    Certified,
    /// The grid oracle found a clearly better point; its value is reported.
    Uncertified,
    /// Only the grid oracle was run.
    OracleOnly,
    /// The grid oracle found no admissible point to compare against.
    NoOracleEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Phase1Result {
    pub lambda_star: f64,
    pub x_star: Vec<f64>,
    pub binding: Vec<MembershipId>,
    pub memberships: MembershipValues,
    /// Best max-min value on the grid.
    pub oracle_lambda: f64,
    pub oracle_point: Vec<f64>,
    /// Level certified by bisection, if any positive level was found.
    pub bisection_lambda: Option<f64>,
    /// Value reached by direct ascent on the max-min decision.
    pub direct_lambda: Option<f64>,
    pub certification: Certification,
    pub oracle_points: u64,
}

/// `min_q (Z_q(x) − thr_q) / scale_q` over a level region.
struct SlackProblem<'a> {
    system: &'a MembershipSystem,
    region: &'a LevelRegion,
    rows: Vec<(Vec<f64>, f64)>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    scales: Vec<f64>,
}

impl<'a> SlackProblem<'a> {
    fn new(system: &'a MembershipSystem, region: &'a LevelRegion) -> Self {
        let n = system.n();
        let rows: Vec<_> = region.polytope.rows().map(|(a, b)| (a.to_vec(), b)).collect();
        // the last 2n rows of a level polytope are its box
        let hi = rows[rows.len() - 2 * n..rows.len() - n].iter().map(|r| r.1).collect();
        let lo = rows[rows.len() - n..].iter().map(|r| -r.1).collect();
        let scales = system.objective_mfs.iter().map(|mf| (mf.hi - mf.lo).max(1.0)).collect();
        Self { system, region, rows: rows[..rows.len() - 2 * n].to_vec(), lo, hi, scales }
    }
}

impl AscentProblem for SlackProblem<'_> {
    fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }
    fn rows(&self) -> &[(Vec<f64>, f64)] {
        &self.rows
    }
    fn aggregate(&self) -> Aggregate {
        Aggregate::Min { cap: None }
    }
    fn pieces(&self, x: &[f64]) -> Vec<(f64, Vec<f64>)> {
        self.system
            .objectives
            .iter()
            .zip(&self.region.thresholds)
            .zip(&self.scales)
            .map(|((o, thr), s)| ((o.value(x) - thr) / s, o.gradient(x).into_iter().map(|g| g / s).collect()))
            .collect()
    }
    fn feasible(&self, x: &[f64]) -> bool {
        self.region.polytope.contains(x, 1e-9)
    }
}

/// Random convex combinations of `vertices` (Dirichlet(1) weights).
pub(crate) fn interior_points(vertices: &[Vec<f64>], count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    if vertices.is_empty() {
        return Vec::new();
    }
    let n = vertices[0].len();
    (0..count)
        .map(|_| {
            let w: Vec<f64> = vertices.iter().map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let total: f64 = w.iter().sum();
            let mut x = vec![0.0; n];
            for (v, wi) in vertices.iter().zip(&w) {
                for j in 0..n {
                    x[j] += v[j] * wi / total;
                }
            }
            x
        })
        .collect()
}

fn ascent_radius(system: &MembershipSystem) -> f64 {
    0.25 * system.outer_upper().iter().cloned().fold(0.0, f64::max).max(1e-3)
}

/// Whether some point of `P(λ)` reaches every objective threshold; returns
/// that point.
pub fn level_feasible(system: &MembershipSystem, lambda: f64, settings: &SolverSettings) -> Result<Option<Vec<f64>>> {
    let region = system.level_region(lambda)?;
    let vertices: Vec<Vec<f64>> = region.polytope.enumerate_vertices()?.into_iter().map(|v| v.x).collect();
    if vertices.is_empty() {
        return Ok(None);
    }
    let mut rng = settings.rng(lambda.to_bits().wrapping_add(1));
    let mut starts = vertices.clone();
    starts.extend(interior_points(&vertices, settings.starts, &mut rng));
    let problem = SlackProblem::new(system, &region);
    let radius = ascent_radius(system);
    let found = starts
        .par_iter()
        .map(|s| -> Result<Option<Vec<f64>>> {
            if problem.merit(s) >= -FEASIBILITY_TOL {
                return Ok(Some(s.clone()));
            }
            let r = ascend(&problem, s, radius)?;
            Ok((r.merit >= -FEASIBILITY_TOL).then_some(r.x))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().next())
}

/// Bisection on λ; returns the best witness found and its max-min value.
fn bisect(system: &MembershipSystem, settings: &SolverSettings) -> Result<Option<(Vec<f64>, f64)>> {
    if let Some(x) = level_feasible(system, 1.0, settings)? {
        let v = system.mu_d(&x);
        return Ok(Some((x, v)));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut witness: Option<Vec<f64>> = None;
    while hi - lo > settings.tol_lambda {
        let mid = 0.5 * (lo + hi);
        match level_feasible(system, mid, settings)? {
            Some(x) => {
                lo = mid;
                witness = Some(x);
            }
            None => hi = mid,
        }
    }
    Ok(witness.map(|x| {
        let v = system.mu_d(&x);
        (x, v)
    }))
}

/// Ascent on the max-min of the smooth grade extensions.
pub(crate) struct MaxMinProblem<'a> {
    pub system: &'a MembershipSystem,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl<'a> MaxMinProblem<'a> {
    pub fn new(system: &'a MembershipSystem) -> Self {
        Self { system, lo: vec![0.0; system.n()], hi: system.outer_upper() }
    }
}

impl AscentProblem for MaxMinProblem<'_> {
    fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }
    fn rows(&self) -> &[(Vec<f64>, f64)] {
        &[]
    }
    fn aggregate(&self) -> Aggregate {
        Aggregate::Min { cap: Some(1.0) }
    }
    fn pieces(&self, x: &[f64]) -> Vec<(f64, Vec<f64>)> {
        self.system.cores(x)
    }
    fn feasible(&self, _: &[f64]) -> bool {
        true
    }
}

fn direct(system: &MembershipSystem, settings: &SolverSettings, extra: Option<&[f64]>) -> Result<Option<AscentResult>> {
    let mut starts: Vec<Vec<f64>> = system
        .level_region(0.0)?
        .polytope
        .enumerate_vertices()?
        .into_iter()
        .map(|v| v.x)
        .collect();
    let hi = system.outer_upper();
    let mut rng = settings.rng(0);
    starts.extend((0..settings.starts).map(|_| hi.iter().map(|h| h * rng.random::<f64>()).collect::<Vec<_>>()));
    starts.extend(extra.map(<[f64]>::to_vec));
    let problem = MaxMinProblem::new(system);
    let radius = ascent_radius(system);
    let results = starts
        .par_iter()
        .map(|s| ascend(&problem, s, radius))
        .collect::<Result<Vec<_>>>()?;
    // score by the true max-min value, not the extension
    Ok(best_of(
        results
            .into_iter()
            .map(|r| AscentResult { merit: system.mu_d(&r.x), ..r })
            .collect(),
    ))
}

pub(crate) fn phase1_oracle(system: &MembershipSystem, settings: &SolverSettings) -> Result<(OracleHit, u64)> {
    let bounds = settings.oracle_box(system)?;
    let out = grid_maximize(|x| Some(system.mu_d(x)), &bounds, &settings.oracle)?;
    let hit = out.best.expect("unrestricted grid always has a best point");
    Ok((hit, out.evaluated))
}

fn finish(
    system: &MembershipSystem,
    x: Vec<f64>,
    oracle: (OracleHit, u64),
    bisection_lambda: Option<f64>,
    direct_lambda: Option<f64>,
    certification: Certification,
) -> Phase1Result {
    let memberships = system.values(&x);
    let lambda_star = memberships.min();
    Phase1Result {
        lambda_star,
        binding: memberships.within(lambda_star, BINDING_TOL),
        memberships,
        x_star: x,
        oracle_lambda: oracle.0.value,
        oracle_point: oracle.0.point,
        bisection_lambda,
        direct_lambda,
        certification,
        oracle_points: oracle.1,
    }
}

/// Maximizes the smallest grade by bisection on λ and by direct ascent, and
/// certifies the better of the two against the grid oracle.
pub fn solve_phase1(system: &MembershipSystem, settings: &SolverSettings) -> Result<Phase1Result> {
    let oracle = phase1_oracle(system, settings)?;
    let bisection = bisect(system, settings)?;
    let direct = direct(system, settings, bisection.as_ref().map(|b| b.0.as_slice()))?;
    let bisection_lambda = bisection.as_ref().map(|b| b.1);
    let direct_lambda = direct.as_ref().map(|d| d.merit);
    let candidates: Vec<AscentResult> = bisection
        .into_iter()
        .map(|(x, merit)| AscentResult { x, merit, iterations: 0 })
        .chain(direct)
        .collect();
    let local = best_of(candidates).filter(|r| r.merit > 0.0);
    match local {
        None if oracle.0.value <= 0.0 => Err(Error::NoPositiveLevel),
        None => {
            let x = oracle.0.point.clone();
            Ok(finish(system, x, oracle, bisection_lambda, direct_lambda, Certification::Uncertified))
        }
        Some(r) if r.merit >= oracle.0.value - CERTIFY_TOL => {
            Ok(finish(system, r.x, oracle, bisection_lambda, direct_lambda, Certification::Certified))
        }
        Some(_) => {
            let x = oracle.0.point.clone();
            Ok(finish(system, x, oracle, bisection_lambda, direct_lambda, Certification::Uncertified))
        }
    }
}

/// Phase 1 from the grid oracle alone.
pub fn solve_phase1_oracle_only(system: &MembershipSystem, settings: &SolverSettings) -> Result<Phase1Result> {
    let oracle = phase1_oracle(system, settings)?;
    if oracle.0.value <= 0.0 {
        return Err(Error::NoPositiveLevel);
    }
    let x = oracle.0.point.clone();
    Ok(finish(system, x, oracle, None, None, Certification::OracleOnly))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crisp::AspirationInterval;
    use crate::instance::{FuzzyBounds, FuzzyMoqpInstance, FuzzyRow, QuadraticObjective};
    use crate::fixtures::illustrative_system;
    use crate::solver::system::build_system;

    fn quick() -> SolverSettings {
        SolverSettings { oracle: GridOracleConfig { resolution: 101, ..Default::default() }, ..Default::default() }
    }

    #[test]
    fn illustrative_level() {
        let sys = illustrative_system();
        let r = solve_phase1(&sys, &quick()).unwrap();
        assert!((r.lambda_star - 0.3310024).abs() < 1e-3, "{r:?}");
        assert!((r.x_star[0] - 1.331002).abs() < 1e-2 && (r.x_star[1] - 5.804374).abs() < 1e-2);
        assert_eq!(r.certification, Certification::Certified);
        assert!((r.bisection_lambda.unwrap() - r.direct_lambda.unwrap()).abs() < 1e-4);
        assert!((sys.mu_d(&r.x_star) - r.lambda_star).abs() < 1e-8);
    }

    #[test]
    fn binding_set() {
        let sys = illustrative_system();
        let r = solve_phase1(&sys, &quick()).unwrap();
        let near = r.memberships.within(r.lambda_star, 1e-4);
        assert_eq!(near, vec![MembershipId::Objective(0), MembershipId::Constraint(1), MembershipId::Lower(0)]);
    }

    #[test]
    fn saturated_system_reaches_one() {
        let inst = FuzzyMoqpInstance::new(
            vec![QuadraticObjective::new(vec![1.0, 1.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]])],
            vec![FuzzyRow { a: vec![1.0, 1.0], d: vec![0.1, 0.1], b: 1e6, p: 1.0 }],
            FuzzyBounds { l: vec![0.0; 2], r: vec![1.0; 2], u: vec![5.0; 2], t: vec![1.0; 2] },
        );
        let sys = build_system(&inst, &[AspirationInterval { lo: 0.0, hi: 1.0 }]).unwrap();
        let r = solve_phase1(&sys, &quick()).unwrap();
        assert_eq!(r.lambda_star, 1.0);
    }

    #[test]
    fn oracle_only_mode() {
        let sys = illustrative_system();
        let r = solve_phase1_oracle_only(&sys, &SolverSettings::default()).unwrap();
        assert!((r.oracle_lambda - 0.3310024).abs() < 1e-3);
        assert_eq!(r.lambda_star, r.oracle_lambda);
    }

    #[test]
    fn deterministic() {
        let sys = illustrative_system();
        assert_eq!(solve_phase1(&sys, &quick()).unwrap(), solve_phase1(&sys, &quick()).unwrap());
    }
}
