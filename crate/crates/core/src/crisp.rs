//! Global maximization of a convex quadratic over a bounded polyhedron.
//!
//! A convex function attains its maximum over a polytope at an extreme point,
//! so enumerating vertices and evaluating the objective at each one is exact.
//! No local refinement follows: the vertex value is already the global one.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{crisp_variants, CrispQp, FuzzyMoqpInstance, Variant};

/// Relative gap under which two vertex values count as tied.
const TIE_TOL: f64 = 1e-12;
/// Width below which an aspiration interval is treated as degenerate.
pub const DEGENERATE_WIDTH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrispOptimum {
    pub value: f64,
    pub argmax: Vec<f64>,
    /// Index of `argmax` in the lexicographically sorted vertex list.
    pub vertex_rank: usize,
}

/// `[Z_L, Z_U]`: worst and best of the four variant optima of one objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AspirationInterval {
    pub lo: f64,
    pub hi: f64,
}

impl AspirationInterval {
    pub fn from_optima(values: &[f64]) -> Self {
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.width() < DEGENERATE_WIDTH
    }
}

/// Exact maximum of `cᵗx + ½xᵗQx` over the crisp feasible region. Ties go to
/// the lexicographically smallest vertex.
pub fn solve_crisp(qp: &CrispQp) -> Result<CrispOptimum> {
    let vertices = qp.polyhedron()?.enumerate_vertices()?;
    if vertices.is_empty() {
        return Err(Error::Infeasible);
    }
    let values: Vec<f64> = vertices.iter().map(|v| qp.objective.value(&v.x)).collect();
    let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cutoff = best - TIE_TOL * best.abs().max(1.0);
    // vertices are sorted, so the first one above the cutoff is the lex-smallest tie
    let rank = values.iter().position(|v| *v >= cutoff).expect("best is attained");
    Ok(CrispOptimum {
        value: values[rank],
        argmax: vertices[rank].x.clone(),
        vertex_rank: rank,
    })
}

/// The four variant optima of one objective together with their interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectiveAspiration {
    /// Indexed like [`Variant::ALL`].
    pub optima: Vec<CrispOptimum>,
    pub interval: AspirationInterval,
}

impl ObjectiveAspiration {
    pub fn optimum(&self, variant: Variant) -> &CrispOptimum {
        &self.optima[variant.number() - 1]
    }
}

/// Solves the four crisp variants of objective `q` (0-based) and returns
/// all optima with the resulting aspiration interval.
pub fn aspiration(instance: &FuzzyMoqpInstance, q: usize) -> Result<ObjectiveAspiration> {
    let variants = crisp_variants(instance, q)?;
    let optima = variants
        .par_iter()
        .map(solve_crisp)
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = optima.iter().map(|o| o.value).collect();
    Ok(ObjectiveAspiration {
        interval: AspirationInterval::from_optima(&values),
        optima,
    })
}

/// `[min, max]` of the four variant optima of objective `q`.
pub fn aspiration_interval(instance: &FuzzyMoqpInstance, q: usize) -> Result<AspirationInterval> {
    aspiration(instance, q).map(|a| a.interval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::QuadraticObjective;
    use crate::fixtures::illustrative;

    #[test]
    fn nominal_variant_of_first_objective() {
        let qp = illustrative().crisp_variant(0, Variant::Nominal).unwrap();
        let opt = solve_crisp(&qp).unwrap();
        assert_eq!(opt.value, 118.0);
        assert_eq!(opt.argmax, vec![2.0, 7.0]);
    }

    #[test]
    fn relaxed_variant_of_second_objective() {
        let qp = illustrative().crisp_variant(1, Variant::Relaxed).unwrap();
        let opt = solve_crisp(&qp).unwrap();
        assert!((opt.value - 392.5).abs() < 1e-9);
        assert!((opt.argmax[0] - 2.5).abs() < 1e-12 && (opt.argmax[1] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn zero_objective_picks_lex_smallest_vertex() {
        let mut qp = illustrative().crisp_variant(0, Variant::Nominal).unwrap();
        qp.objective = QuadraticObjective::new(vec![0.0; 2], vec![vec![0.0; 2]; 2]);
        let opt = solve_crisp(&qp).unwrap();
        assert_eq!(opt.value, 0.0);
        assert_eq!(opt.vertex_rank, 0);
        assert_eq!(opt.argmax, vec![2.0, 2.0]);
    }

    #[test]
    fn infeasible_region() {
        let mut qp = illustrative().crisp_variant(0, Variant::Nominal).unwrap();
        qp.rhs[0] = 1.0;
        assert!(matches!(solve_crisp(&qp), Err(Error::Infeasible)));
    }

    #[test]
    fn illustrative_intervals() {
        let inst = illustrative();
        let a = aspiration_interval(&inst, 0).unwrap();
        assert_eq!((a.lo, a.hi), (42.0, 228.75));
        let b = aspiration_interval(&inst, 1).unwrap();
        assert_eq!(b.lo, 82.0);
        assert!((b.hi - 392.5).abs() < 1e-9);
    }

    #[test]
    fn coinciding_variants_give_zero_width() {
        let mut inst = illustrative();
        let eps = 1e-300;
        for row in &mut inst.rows {
            row.d.iter_mut().for_each(|d| *d = eps);
            row.p = eps;
        }
        inst.bounds.r.iter_mut().for_each(|r| *r = eps);
        inst.bounds.t.iter_mut().for_each(|t| *t = eps);
        let a = aspiration_interval(&inst, 0).unwrap();
        assert_eq!(a.lo, a.hi);
        assert!(a.is_degenerate());
    }
}
