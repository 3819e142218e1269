//! Bounded polyhedra `{x : Ax ≤ rhs}` and exact vertex enumeration by
//! active-set subsystems.
//!
//! Every `n`-subset of rows with a well-conditioned `n × n` submatrix is
//! solved as an equality system; solutions that satisfy all rows are
//! vertices. This is combinatorial in the row count, so sizes are capped at
//! [`MAX_ROWS`] rows and [`MAX_DIM`] coordinates.

use std::cmp::Ordering;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};

pub const MAX_ROWS: usize = 24;
pub const MAX_DIM: usize = 12;

/// Feasibility slack for vertices and the activity threshold for rows.
pub const FEAS_TOL: f64 = 1e-8;
/// Two candidate vertices closer than this (∞-norm) are the same vertex.
pub const DEDUP_RADIUS: f64 = 1e-7;
const RESIDUAL_TOL: f64 = 1e-9;
const PIVOT_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    n: usize,
    a: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub x: Vec<f64>,
    /// Rows satisfied with equality (within [`FEAS_TOL`]), ascending.
    pub active: Vec<usize>,
}

impl Polyhedron {
    /// Builds `{x ∈ ℝⁿ : a·x ≤ rhs}`; fails unless the set is bounded.
    pub fn new(n: usize, a: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        if a.len() != rhs.len() {
            return Err(Error::Dimension(format!("{} rows but {} right-hand sides", a.len(), rhs.len())));
        }
        if let Some(i) = a.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!("row {i} has {} entries, expected {n}", a[i].len())));
        }
        let p = Self { n, a, rhs };
        p.check_bounded()?;
        Ok(p)
    }

    /// `{a x ≤ rhs, lo ≤ x ≤ hi}`; bounds become `n` upper rows followed by
    /// `n` lower rows.
    pub fn from_rows_and_box(a: &[Vec<f64>], rhs: &[f64], lo: &[f64], hi: &[f64]) -> Result<Self> {
        let n = lo.len();
        if hi.len() != n {
            return Err(Error::Dimension(format!("lo has {n} entries, hi has {}", hi.len())));
        }
        let mut rows = a.to_vec();
        let mut b = rhs.to_vec();
        for (j, h) in hi.iter().enumerate() {
            rows.push(unit(n, j, 1.0));
            b.push(*h);
        }
        for (j, l) in lo.iter().enumerate() {
            rows.push(unit(n, j, -1.0));
            b.push(-l);
        }
        Self::new(n, rows, b)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.a.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.a.iter().map(Vec::as_slice).zip(self.rhs.iter().copied())
    }

    /// Same polyhedron with its rows reordered by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            n: self.n,
            a: perm.iter().map(|&i| self.a[i].clone()).collect(),
            rhs: perm.iter().map(|&i| self.rhs[i]).collect(),
        }
    }

    /// `A·x ≤ rhs + tol` componentwise.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        debug_assert_eq!(x.len(), self.n);
        self.rows().all(|(row, b)| dot(row, x) <= b + tol)
    }

    /// Largest violation `max_i (A_i·x − rhs_i)`; nonpositive inside.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.rows().map(|(row, b)| dot(row, x) - b).fold(f64::NEG_INFINITY, f64::max)
    }

    fn check_bounded(&self) -> Result<()> {
        // Fast path: every coordinate has an explicit upper and lower box row.
        let boxed = (0..self.n).all(|j| {
            let has = |sign: f64| {
                self.a.iter().any(|r| {
                    r[j] * sign > 0.0 && r.iter().enumerate().all(|(i, v)| i == j || *v == 0.0)
                })
            };
            has(1.0) && has(-1.0)
        });
        if boxed {
            return Ok(());
        }
        // Bounded iff the recession cone {d : A d ≤ 0} is {0}.
        for j in 0..self.n {
            for sign in [1.0, -1.0] {
                let mut lp = LinearProgram::new(unit(self.n, j, sign), vec![(-1.0, 1.0); self.n]);
                for row in &self.a {
                    lp.add_le(row.clone(), 0.0);
                }
                if let LpOutcome::Optimal { objective, .. } = lp.solve()? {
                    if objective > 1e-9 {
                        return Err(Error::Unbounded(j));
                    }
                }
            }
        }
        Ok(())
    }

    /// All extreme points, each once, sorted lexicographically.
    pub fn enumerate_vertices(&self) -> Result<Vec<Vertex>> {
        let (n, rows) = (self.n, self.a.len());
        if n > MAX_DIM || rows > MAX_ROWS {
            return Err(Error::TooLarge { rows, n, max_rows: MAX_ROWS, max_n: MAX_DIM });
        }
        if n == 0 {
            return Ok(Vec::new());
        }

        let mut candidates: Vec<Vec<f64>> = (0..rows)
            .combinations(n)
            .par_bridge()
            .filter_map(|subset| self.solve_subset(&subset))
            .filter(|x| self.contains(x, FEAS_TOL))
            .collect();
        candidates.sort_by(|a, b| lex_cmp(a, b));

        let mut kept: Vec<Vec<f64>> = Vec::new();
        for x in candidates {
            if !kept.iter().any(|k| inf_dist(k, &x) < DEDUP_RADIUS) {
                kept.push(x);
            }
        }
        Ok(kept
            .into_iter()
            .map(|x| {
                let active = self
                    .rows()
                    .enumerate()
                    .filter(|(_, (row, b))| (dot(row, &x) - b).abs() <= FEAS_TOL)
                    .map(|(i, _)| i)
                    .collect();
                Vertex { x, active }
            })
            .collect())
    }

    fn solve_subset(&self, subset: &[usize]) -> Option<Vec<f64>> {
        let n = self.n;
        let m = DMatrix::from_fn(n, n, |r, c| self.a[subset[r]][c]);
        let b = DVector::from_iterator(n, subset.iter().map(|&i| self.rhs[i]));
        let lu = m.clone().full_piv_lu();
        let u = lu.u();
        let pivots: Vec<f64> = (0..n).map(|i| u[(i, i)].abs()).collect();
        let (lo, hi) = pivots.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(*p), hi.max(*p)));
        if hi == 0.0 || lo <= PIVOT_RATIO * hi {
            return None;
        }
        let x = lu.solve(&b)?;
        let residual = (&m * &x - &b).amax();
        let scale = b.amax().max(1.0);
        if !x.iter().all(|v| v.is_finite()) || residual > RESIDUAL_TOL * scale {
            return None;
        }
        // `+ 0.0` folds -0.0 into 0.0 so the lexicographic order is stable.
        Some(x.iter().map(|v| v + 0.0).collect())
    }
}

pub(crate) fn unit(n: usize, j: usize, value: f64) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[j] = value;
    v
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn inf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Lexicographic order on coordinates (total, via `total_cmp`).
pub fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn variant_one() -> Polyhedron {
        Polyhedron::from_rows_and_box(
            &[vec![1.0, 1.0], vec![2.0, 3.0]],
            &[10.0, 25.0],
            &[2.0, 2.0],
            &[9.0, 8.0],
        )
        .unwrap()
    }

    fn has_vertex(vs: &[Vertex], x: &[f64]) -> bool {
        vs.iter().any(|v| inf_dist(&v.x, x) < 1e-9)
    }

    #[test]
    fn variant_one_vertices() {
        let p = variant_one();
        let vs = p.enumerate_vertices().unwrap();
        let xs: Vec<_> = vs.iter().map(|v| v.x.clone()).collect();
        let expected = [[2.0, 2.0], [2.0, 7.0], [5.0, 5.0], [8.0, 2.0]];
        assert_eq!(xs.len(), expected.len(), "{xs:?}");
        for (got, want) in xs.iter().zip(&expected) {
            assert!(inf_dist(got, want) < 1e-12, "{got:?} vs {want:?}");
        }
        assert!(has_vertex(&vs, &[2.0, 7.0]));
        // x1 = 9 forces x2 ≤ 1 through x1 + x2 ≤ 10, below the x2 ≥ 2 bound.
        assert!(!p.contains(&[9.0, 7.0 / 3.0], 1e-8));
        assert!(!p.contains(&[9.0, 2.0], 1e-8));
        for v in &vs {
            assert!(v.active.len() >= 2);
        }
    }

    #[test]
    fn unit_square() {
        let p = Polyhedron::from_rows_and_box(&[], &[], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let xs: Vec<_> = p.enumerate_vertices().unwrap().into_iter().map(|v| v.x).collect();
        assert_eq!(xs, vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn empty_polyhedron_has_no_vertices() {
        let p = Polyhedron::new(1, vec![vec![1.0], vec![-1.0]], vec![-1.0, 0.0]).unwrap();
        assert!(p.enumerate_vertices().unwrap().is_empty());
    }

    #[test]
    fn contains_examples() {
        let p = variant_one();
        assert!(p.contains(&[2.0, 7.0], 1e-8));
        assert!(!p.contains(&[9.0, 8.0], 1e-8));
        for v in p.enumerate_vertices().unwrap() {
            assert!(p.contains(&v.x, 1e-8));
        }
    }

    #[test]
    fn degenerate_vertex_reported_once() {
        // Three rows through (1, 1): x ≤ 1, y ≤ 1, x + y ≤ 2.
        let p = Polyhedron::new(
            2,
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
            vec![1.0, 1.0, 2.0, 0.0, 0.0],
        )
        .unwrap();
        let vs = p.enumerate_vertices().unwrap();
        assert_eq!(vs.len(), 4);
        let corner = vs.iter().find(|v| inf_dist(&v.x, &[1.0, 1.0]) < 1e-12).unwrap();
        assert_eq!(corner.active, vec![0, 1, 2]);
    }

    #[test]
    fn unbounded_is_rejected() {
        let err = Polyhedron::new(2, vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, 1.0]], vec![0.0, 0.0, 5.0]);
        assert!(err.is_ok());
        let err = Polyhedron::new(2, vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, -1.0]], vec![0.0, 0.0, 5.0]);
        assert!(matches!(err, Err(Error::Unbounded(_))));
    }

    #[test]
    fn size_limits() {
        let n = 13;
        let p = Polyhedron::from_rows_and_box(&[], &[], &vec![0.0; n], &vec![1.0; n]).unwrap();
        assert!(matches!(p.enumerate_vertices(), Err(Error::TooLarge { .. })));
    }
}
