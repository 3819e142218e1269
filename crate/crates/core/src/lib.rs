//! Fuzzy efficient solutions for multi-objective quadratic programs whose
//! constraint coefficients, resources and variable bounds are fuzzy numbers.
//!
//! Each objective `cᵗx + ½xᵗQx` (with `Q` positive semi-definite) is
//! maximized exactly on four crisp versions of the feasible region to obtain
//! an aspiration interval. Objectives and fuzzy constraints then receive
//! trigonometric membership grades, bounds receive linear ones, and the
//! solver maximizes the smallest grade before maximizing their sum over the
//! resulting level set. Every local result is checked against a brute-force
//! grid search.
//!
//! The `examples/` directory walks through each stage; `solve_pipeline`
//! runs everything end to end.

pub mod crisp;
pub mod error;
pub mod fixtures;
pub mod instance;
mod lp;
pub mod membership;
pub mod numfmt;
pub mod polytope;
pub mod report;
pub mod solver;

pub use crisp::{aspiration, aspiration_interval, solve_crisp, AspirationInterval, CrispOptimum};
pub use error::{Error, Result};
pub use instance::{
    crisp_variants, validate, CrispQp, FuzzyBounds, FuzzyMoqpInstance, FuzzyRow, QuadraticObjective, Variant,
};
pub use polytope::{Polyhedron, Vertex};
pub use solver::{
    build_system, check_fuzzy_efficiency, check_pareto, solve_phase1, solve_phase2, Certification, EfficiencyVerdict,
    GridOracleConfig, MembershipSystem, Phase1Result, Phase2Result, SolverSettings,
};
