//! Problem instances: quadratic objectives over fuzzy linear rows and fuzzy
//! variable bounds, plus the four crisp variants each objective is solved on
//! to obtain its aspiration interval.

use std::fmt;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfmt;
use crate::polytope::Polyhedron;

/// `cᵗx + ½ xᵗQx` with `Q` symmetric positive semi-definite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticObjective {
    pub c: Vec<f64>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
}

impl QuadraticObjective {
    pub fn new(c: Vec<f64>, q: Vec<Vec<f64>>) -> Self {
        Self { c, q }
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let mut lin = 0.0;
        let mut quad = 0.0;
        for (i, xi) in x.iter().enumerate() {
            lin += self.c[i] * xi;
            let row: f64 = self.q[i].iter().zip(x).map(|(qij, xj)| qij * xj).sum();
            quad += xi * row;
        }
        lin + 0.5 * quad
    }

    /// `c + Qx` (Q is symmetric).
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.c
            .iter()
            .zip(&self.q)
            .map(|(ci, row)| ci + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }
}

/// One fuzzy row `Ã_i x ≤ b̃_i`: nominal coefficients with tolerances and a
/// nominal resource with tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzyRow {
    pub a: Vec<f64>,
    pub d: Vec<f64>,
    pub b: f64,
    pub p: f64,
}

/// Fuzzy box `l̃ ≤ x ≤ ũ`; `r` and `t` are the lower and upper tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzyBounds {
    pub l: Vec<f64>,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub t: Vec<f64>,
}

/// Full problem data. `n`, `k` and `m` are stored explicitly so that the file
/// format is self-describing; [`validate`] checks them against the arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzyMoqpInstance {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub objectives: Vec<QuadraticObjective>,
    pub rows: Vec<FuzzyRow>,
    pub bounds: FuzzyBounds,
}

impl FuzzyMoqpInstance {
    pub fn new(objectives: Vec<QuadraticObjective>, rows: Vec<FuzzyRow>, bounds: FuzzyBounds) -> Self {
        Self {
            n: bounds.l.len(),
            k: objectives.len(),
            m: rows.len(),
            objectives,
            rows,
            bounds,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads and validates an instance file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let instance = Self::from_json(&text)?;
        instance.ensure_valid()?;
        Ok(instance)
    }

    /// Canonical text form: pretty JSON, fixed field order, `%.17g` numbers.
    pub fn to_canonical_json(&self) -> String {
        numfmt::to_json_string(self).expect("instance serializes")
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = validate(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// Upper corner of the widest crisp box, `u + t`.
    pub fn outer_upper(&self) -> Vec<f64> {
        self.bounds.u.iter().zip(&self.bounds.t).map(|(u, t)| u + t).collect()
    }

    /// Variant `which` of objective `q` (0-based).
    pub fn crisp_variant(&self, q: usize, which: Variant) -> Result<CrispQp> {
        let objective = self
            .objectives
            .get(q)
            .ok_or(Error::ObjectiveIndex { index: q, k: self.k })?
            .clone();
        // coefficients and lower bounds move together, as do resources and upper bounds
        let raise_coeffs = matches!(which, Variant::Tightened | Variant::Widened);
        let raise_rhs = matches!(which, Variant::Widened | Variant::Relaxed);

        let a = self
            .rows
            .iter()
            .map(|row| {
                if raise_coeffs {
                    row.a.iter().zip(&row.d).map(|(a, d)| a + d).collect()
                } else {
                    row.a.clone()
                }
            })
            .collect();
        let rhs = self
            .rows
            .iter()
            .map(|row| if raise_rhs { row.b + row.p } else { row.b })
            .collect();
        let b = &self.bounds;
        let lo = (0..self.n)
            .map(|j| {
                let l = if raise_coeffs { b.l[j] - b.r[j] } else { b.l[j] };
                l.max(0.0)
            })
            .collect();
        let hi = (0..self.n)
            .map(|j| if raise_rhs { b.u[j] + b.t[j] } else { b.u[j] })
            .collect();
        Ok(CrispQp { objective, a, rhs, lo, hi })
    }
}

/// The four crisp problems built from the fuzzy data for each objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `(a, b, [l, u])`
    Nominal,
    /// `(a + d, b, [l − r, u])`
    Tightened,
    /// `(a + d, b + p, [l − r, u + t])`
    Widened,
    /// `(a, b + p, [l, u + t])`
    Relaxed,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Nominal, Variant::Tightened, Variant::Widened, Variant::Relaxed];

    /// 1-based position in the conventional ordering.
    pub fn number(self) -> usize {
        match self {
            Variant::Nominal => 1,
            Variant::Tightened => 2,
            Variant::Widened => 3,
            Variant::Relaxed => 4,
        }
    }
}

/// All four crisp variants for objective `q` (0-based), in [`Variant::ALL`]
/// order.
pub fn crisp_variants(instance: &FuzzyMoqpInstance, q: usize) -> Result<[CrispQp; 4]> {
    Ok([
        instance.crisp_variant(q, Variant::Nominal)?,
        instance.crisp_variant(q, Variant::Tightened)?,
        instance.crisp_variant(q, Variant::Widened)?,
        instance.crisp_variant(q, Variant::Relaxed)?,
    ])
}

/// Maximize a convex quadratic over `{Ax ≤ rhs, lo ≤ x ≤ hi}` with `lo ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrispQp {
    pub objective: QuadraticObjective,
    pub a: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl CrispQp {
    /// Feasible region with the box folded in as rows (`m + 2n` rows).
    pub fn polyhedron(&self) -> Result<Polyhedron> {
        Polyhedron::from_rows_and_box(&self.a, &self.rhs, &self.lo, &self.hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    Dimension,
    NotFinite,
    KTooSmall,
    NTooSmall,
    NonPositiveTolerance,
    NegativeCoefficient,
    NotSymmetric,
    NotPsd,
    EmptyBox,
}

/// One violated condition, located by a field path such as `rows[1].d[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub kind: ViolationKind,
    /// Offending value or defect size (asymmetry, eigenvalue, ...).
    pub magnitude: f64,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} (value {})", self.field, self.message, numfmt::g17(self.magnitude))
    }
}

/// Relative tolerance on the smallest eigenvalue of each `Q`.
pub const PSD_TOLERANCE: f64 = 1e-8;

struct Violations(Vec<Violation>);

impl Violations {
    fn push(&mut self, field: impl Into<String>, kind: ViolationKind, magnitude: f64, message: &str) {
        self.0.push(Violation { field: field.into(), kind, magnitude, message: message.to_string() });
    }

    fn check_vec(&mut self, field: &str, v: &[f64], n: usize) {
        if v.len() != n {
            self.push(field, ViolationKind::Dimension, v.len() as f64, "length differs from n");
        }
        for (j, x) in v.iter().enumerate() {
            if !x.is_finite() {
                self.push(format!("{field}[{j}]"), ViolationKind::NotFinite, *x, "value must be finite");
            }
        }
    }

    fn check_positive(&mut self, field: String, v: f64) {
        if !(v > 0.0) {
            self.push(field, ViolationKind::NonPositiveTolerance, v, "tolerance must be strictly positive");
        }
    }

    fn check_quadratic(&mut self, q: usize, obj: &QuadraticObjective, n: usize) {
        self.check_vec(&format!("objectives[{q}].c"), &obj.c, n);
        let field = format!("objectives[{q}].Q");
        if obj.q.len() != n || obj.q.iter().any(|r| r.len() != n) {
            self.push(field, ViolationKind::Dimension, obj.q.len() as f64, "Q must be n×n");
            return;
        }
        if obj.q.iter().flatten().any(|v| !v.is_finite()) {
            self.push(field, ViolationKind::NotFinite, f64::NAN, "value must be finite");
            return;
        }
        let mut symmetric = true;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (obj.q[i][j], obj.q[j][i]);
                let gap = (a - b).abs();
                if gap > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    symmetric = false;
                    self.push(format!("{field}[{i}][{j}]"), ViolationKind::NotSymmetric, gap, "Q not symmetric");
                }
            }
        }
        if symmetric {
            let scale = obj.q.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
            let eig = SymmetricEigen::new(DMatrix::from_fn(n, n, |i, j| obj.q[i][j]));
            let smallest = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            if smallest < -PSD_TOLERANCE * scale {
                self.push(field, ViolationKind::NotPsd, smallest, "Q not positive semi-definite");
            }
        }
    }
}

/// Returns every violated instance condition; an empty list means valid.
pub fn validate(inst: &FuzzyMoqpInstance) -> Vec<Violation> {
    let mut out = Violations(Vec::new());
    let n = inst.n;

    if inst.k < 1 {
        out.push("k", ViolationKind::KTooSmall, inst.k as f64, "k ≥ 1 required");
    }
    if n < 1 {
        out.push("n", ViolationKind::NTooSmall, n as f64, "n ≥ 1 required");
    }
    if inst.objectives.len() != inst.k {
        out.push("objectives", ViolationKind::Dimension, inst.objectives.len() as f64, "number of objectives differs from k");
    }
    if inst.rows.len() != inst.m {
        out.push("rows", ViolationKind::Dimension, inst.rows.len() as f64, "number of rows differs from m");
    }

    for (q, obj) in inst.objectives.iter().enumerate() {
        out.check_quadratic(q, obj, n);
    }

    for (i, row) in inst.rows.iter().enumerate() {
        out.check_vec(&format!("rows[{i}].a"), &row.a, n);
        out.check_vec(&format!("rows[{i}].d"), &row.d, n);
        for (j, a) in row.a.iter().enumerate() {
            if *a < 0.0 {
                out.push(format!("rows[{i}].a[{j}]"), ViolationKind::NegativeCoefficient, *a, "coefficient must be nonnegative");
            }
        }
        for (j, d) in row.d.iter().enumerate() {
            out.check_positive(format!("rows[{i}].d[{j}]"), *d);
        }
        if !row.b.is_finite() {
            out.push(format!("rows[{i}].b"), ViolationKind::NotFinite, row.b, "value must be finite");
        }
        if row.p.is_finite() {
            out.check_positive(format!("rows[{i}].p"), row.p);
        } else {
            out.push(format!("rows[{i}].p"), ViolationKind::NotFinite, row.p, "value must be finite");
        }
    }

    let b = &inst.bounds;
    for (name, v) in [("l", &b.l), ("r", &b.r), ("u", &b.u), ("t", &b.t)] {
        out.check_vec(&format!("bounds.{name}"), v, n);
    }
    for (name, v) in [("r", &b.r), ("t", &b.t)] {
        for (j, x) in v.iter().enumerate() {
            out.check_positive(format!("bounds.{name}[{j}]"), *x);
        }
    }
    for (j, (l, u)) in b.l.iter().zip(&b.u).enumerate() {
        if l > u {
            out.push(format!("bounds.l[{j}]"), ViolationKind::EmptyBox, l - u, "l must not exceed u");
        }
    }
    for (j, (u, t)) in b.u.iter().zip(&b.t).enumerate() {
        if u + t < 0.0 {
            out.push(format!("bounds.u[{j}]"), ViolationKind::EmptyBox, u + t, "u + t must be nonnegative");
        }
    }
    out.0
}
