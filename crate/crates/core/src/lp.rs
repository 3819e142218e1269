//! Small dense LP front end over `microlp`, used for recession-cone tests and
//! for the linearized subproblems of the local ascent routines.

use microlp::{ComparisonOp, OptimizationDirection, Problem, SolveOutcome};

use crate::error::{Error, Result};

/// `maximize objective·v  s.t.  rows·v ≤ rhs,  lo ≤ v ≤ hi`.
#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    pub objective: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
    pub rows: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { values: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, bounds: Vec<(f64, f64)>) -> Self {
        debug_assert_eq!(objective.len(), bounds.len());
        Self { objective, bounds, rows: Vec::new() }
    }

    pub fn add_le(&mut self, coeffs: Vec<f64>, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push((coeffs, rhs));
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        let mut problem = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<_> = self
            .objective
            .iter()
            .zip(&self.bounds)
            .map(|(c, &b)| problem.add_var(*c, b))
            .collect();
        for (coeffs, rhs) in &self.rows {
            let terms: Vec<_> = vars
                .iter()
                .zip(coeffs)
                .filter(|(_, c)| **c != 0.0)
                .map(|(v, c)| (*v, *c))
                .collect();
            if terms.is_empty() {
                if *rhs < -1e-12 {
                    return Ok(LpOutcome::Infeasible);
                }
                continue;
            }
            problem.add_constraint(terms.as_slice(), ComparisonOp::Le, *rhs);
        }
        match problem.solve() {
            Ok(SolveOutcome::Solution(sol)) => Ok(LpOutcome::Optimal {
                values: vars.iter().map(|v| sol.var_value(*v)).collect(),
                objective: sol.objective(),
            }),
            Ok(SolveOutcome::Interrupted(_)) => Err(Error::Lp("solve interrupted".into())),
            Err(microlp::Error::Infeasible) => Ok(LpOutcome::Infeasible),
            Err(microlp::Error::Unbounded) => Ok(LpOutcome::Unbounded),
            Err(e) => Err(Error::Lp(e.to_string())),
        }
    }
}
