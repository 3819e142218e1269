//! Ready-made instances.

use crate::crisp::aspiration_interval;
use crate::instance::{FuzzyBounds, FuzzyMoqpInstance, FuzzyRow, QuadraticObjective};
use crate::solver::{build_system, MembershipSystem};

/// Two objectives, two fuzzy rows, two variables:
///
/// ```text
/// max Z1 = x1 + 2x2 + x1² + 2x2²
/// max Z2 = 4x1 + 7x2 + 2x1² + 3x2²
/// s.t. 1̃x1 + 1̃x2 ≤ 1̃0,  2̃x1 + 3̃x2 ≤ 2̃5,  2̃ ≤ x1 ≤ 9̃,  2̃ ≤ x2 ≤ 8̃
/// ```
///
/// with coefficient tolerances `d = [[1, 1], [1, 2]]`, resource tolerances
/// `p = (5, 10)`, upper tolerances `t = (3, 2)` and lower tolerances
/// `r = (1, 1)`.
pub fn illustrative() -> FuzzyMoqpInstance {
    FuzzyMoqpInstance::new(
        vec![
            QuadraticObjective::new(vec![1.0, 2.0], vec![vec![2.0, 0.0], vec![0.0, 4.0]]),
            QuadraticObjective::new(vec![4.0, 7.0], vec![vec![4.0, 0.0], vec![0.0, 6.0]]),
        ],
        vec![
            FuzzyRow { a: vec![1.0, 1.0], d: vec![1.0, 1.0], b: 10.0, p: 5.0 },
            FuzzyRow { a: vec![2.0, 3.0], d: vec![1.0, 2.0], b: 25.0, p: 10.0 },
        ],
        FuzzyBounds {
            l: vec![2.0, 2.0],
            r: vec![1.0, 1.0],
            u: vec![9.0, 8.0],
            t: vec![3.0, 2.0],
        },
    )
}

/// Membership system of [`illustrative`], with aspiration intervals
/// `[42, 228.75]` and `[82, 392.5]`.
pub fn illustrative_system() -> MembershipSystem {
    let inst = illustrative();
    let intervals: Vec<_> = (0..inst.k)
        .map(|q| aspiration_interval(&inst, q).expect("illustrative instance is feasible"))
        .collect();
    build_system(&inst, &intervals).expect("illustrative instance is valid")
}
