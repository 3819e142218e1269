//! Max-min and sum phases over the membership system, with grid-oracle
//! certification and dominance checks.

mod ascent;
pub mod efficiency;
pub mod oracle;
pub mod phase1;
pub mod phase2;
pub mod system;

pub use efficiency::{check_fuzzy_efficiency, check_pareto, EfficiencyVerdict};
pub use oracle::{grid_maximize, GridOracleConfig, OracleHit, OracleOutcome};
pub use phase1::{level_feasible, solve_phase1, solve_phase1_oracle_only, Certification, Phase1Result, SolverSettings};
pub use phase2::{solve_phase2, solve_phase2_oracle_only, OracleDiscrepancy, Phase2Result};
pub use system::{build_system, LevelRegion, MembershipId, MembershipSystem, MembershipValues};
