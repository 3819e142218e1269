//! Brute-force grid search used to certify the local solvers.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::lex_cmp;

/// Settings of the grid oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridOracleConfig {
    /// Search box; `None` means `[0, u_j + t_j]` per coordinate.
    #[serde(rename = "box")]
    pub bounds: Option<Vec<(f64, f64)>>,
    /// Points per axis.
    pub resolution: usize,
    /// Zoom rounds, each shrinking the box tenfold around the incumbent.
    pub refine_rounds: usize,
    /// Above this many grid points the full grid is replaced by
    /// `resolution²` seeded random points.
    pub max_points: u64,
    pub seed: u64,
}

impl Default for GridOracleConfig {
    fn default() -> Self {
        Self { bounds: None, resolution: 401, refine_rounds: 3, max_points: 70_000_000, seed: 0 }
    }
}

impl GridOracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::BadMembership("grid resolution must be at least 2".into()));
        }
        if let Some(b) = &self.bounds {
            if b.iter().any(|(lo, hi)| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
                return Err(Error::EmptyDomain);
            }
        }
        Ok(())
    }

    pub(crate) fn box_or(&self, default: Vec<(f64, f64)>) -> Result<Vec<(f64, f64)>> {
        self.validate()?;
        match &self.bounds {
            Some(b) if b.len() != default.len() => Err(Error::Dimension(format!(
                "oracle box has {} intervals, expected {}",
                b.len(),
                default.len()
            ))),
            Some(b) => Ok(b.clone()),
            None => Ok(default),
        }
    }
}

/// Best point found by the oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleHit {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleOutcome {
    pub best: Option<OracleHit>,
    pub evaluated: u64,
    /// `false` when the grid was replaced by random sampling.
    pub exhaustive: bool,
}

enum Points {
    Grid { lo: Vec<f64>, hi: Vec<f64>, res: usize },
    Sample(Vec<Vec<f64>>),
}

impl Points {
    fn len(&self) -> u64 {
        match self {
            Points::Grid { lo, res, .. } => (*res as u64).pow(lo.len() as u32),
            Points::Sample(v) => v.len() as u64,
        }
    }

    /// Grid index order is lexicographic in the coordinates (first axis
    /// slowest).
    fn fill(&self, idx: u64, buf: &mut [f64]) {
        match self {
            Points::Grid { lo, hi, res } => {
                let mut rest = idx;
                let last = (*res - 1) as f64;
                for j in (0..lo.len()).rev() {
                    let i = (rest % *res as u64) as f64;
                    rest /= *res as u64;
                    buf[j] = if i == last { hi[j] } else { lo[j] + (hi[j] - lo[j]) * i / last };
                }
            }
            Points::Sample(v) => buf.copy_from_slice(&v[idx as usize]),
        }
    }

    fn point(&self, idx: u64, n: usize) -> Vec<f64> {
        let mut buf = vec![0.0; n];
        self.fill(idx, &mut buf);
        buf
    }
}

fn grid_points(bounds: &[(f64, f64)], config: &GridOracleConfig, round: usize) -> (Points, bool) {
    let n = bounds.len();
    let res = config.resolution;
    let total = (res as f64).powi(n as i32);
    if total <= config.max_points as f64 {
        let (lo, hi) = bounds.iter().cloned().unzip();
        return (Points::Grid { lo, hi, res }, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(round as u64 + 1)));
    let count = res * res;
    let pts = (0..count)
        .map(|_| bounds.iter().map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>()).collect())
        .collect();
    (Points::Sample(pts), false)
}

/// Higher value wins; ties go to the lexicographically smaller point.
fn better(points: &Points, n: usize, a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    match a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => match lex_cmp(&points.point(a.1, n), &points.point(b.1, n)).then(a.1.cmp(&b.1)) {
            Ordering::Greater => b,
            _ => a,
        },
    }
}

/// Maximizes `f` over a grid on `bounds`, then zooms in `refine_rounds`
/// times around the incumbent. `f` returns `None` for points outside the
/// region of interest. Results do not depend on the thread count.
pub fn grid_maximize<F>(f: F, bounds: &[(f64, f64)], config: &GridOracleConfig) -> Result<OracleOutcome>
where
    F: Fn(&[f64]) -> Option<f64> + Sync,
{
    config.validate()?;
    let n = bounds.len();
    let mut current = bounds.to_vec();
    let mut best: Option<OracleHit> = None;
    let mut evaluated = 0;
    let mut exhaustive = true;
    for round in 0..=config.refine_rounds {
        let (points, full) = grid_points(&current, config, round);
        exhaustive &= full;
        evaluated += points.len();
        let found = (0..points.len())
            .into_par_iter()
            .map_init(
                || vec![0.0; n],
                |buf, idx| {
                    points.fill(idx, buf);
                    f(buf).filter(|v| v.is_finite()).map(|v| (v, idx))
                },
            )
            .reduce(
                || None,
                |a, b| match (a, b) {
                    (Some(a), Some(b)) => Some(better(&points, n, a, b)),
                    (a, None) => a,
                    (None, b) => b,
                },
            );
        if let Some((value, idx)) = found {
            let point = points.point(idx, n);
            let improves = match &best {
                None => true,
                Some(h) => value > h.value || (value == h.value && lex_cmp(&point, &h.point) == Ordering::Less),
            };
            if improves {
                best = Some(OracleHit { point, value });
            }
        }
        let Some(hit) = &best else { break };
        current = bounds
            .iter()
            .zip(&current)
            .zip(&hit.point)
            .map(|(((lo0, hi0), (lo, hi)), c)| {
                let half = (hi - lo) / 20.0;
                ((c - half).max(*lo0), (c + half).min(*hi0))
            })
            .collect();
    }
    Ok(OracleOutcome { best, evaluated, exhaustive })
}
