//! Membership functions: trigonometric grades for fuzzy rows and objectives,
//! linear grades for fuzzy bounds, and the linear fuzzy-number memberships of
//! the individual parameters.
//!
//! Every grade is a clamp to `[0, 1]` of a smooth "core" expression. The
//! solver linearizes the cores, so each type exposes both the clamped grade
//! and its core with gradient.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfmt::g17;
use crate::polytope::dot;

/// Normalized level `s(λ) = (2/π)·arcsin(λ)` at which `sin(s·π/2) = λ`.
pub fn trig_level(lambda: f64) -> f64 {
    lambda.clamp(0.0, 1.0).asin() / FRAC_PI_2
}

/// `sin(ρπ/2)` clamped: 0 for `ρ ≤ 0`, 1 for `ρ ≥ 1`.
pub fn trig_grade(rho: f64) -> f64 {
    if rho <= 0.0 {
        0.0
    } else if rho >= 1.0 {
        1.0
    } else {
        (rho * FRAC_PI_2).sin()
    }
}

/// C¹ extension of [`trig_grade`] that keeps decreasing below `ρ = 0`
/// (slope π/2), returned with its derivative in `ρ`.
pub(crate) fn trig_core(rho: f64) -> (f64, f64) {
    if rho <= 0.0 {
        (rho * FRAC_PI_2, FRAC_PI_2)
    } else if rho >= 1.0 {
        (1.0, 0.0)
    } else {
        let a = rho * FRAC_PI_2;
        (a.sin(), FRAC_PI_2 * a.cos())
    }
}

fn check_level(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::LevelOutOfRange(lambda))
    }
}

/// Grade of the fuzzy row `Σ ã_j x_j ≤ b̃`, driven by the satisfaction ratio
/// `ρ(x) = (b − a·x) / (d·x + p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigConstraintMf {
    pub a: Vec<f64>,
    pub d: Vec<f64>,
    pub b: f64,
    pub p: f64,
}

/// The linear row `coeffs·x ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearRow {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl TrigConstraintMf {
    pub fn new(a: Vec<f64>, d: Vec<f64>, b: f64, p: f64) -> Result<Self> {
        if a.len() != d.len() {
            return Err(Error::Dimension(format!("a has {} entries, d has {}", a.len(), d.len())));
        }
        if !(p > 0.0) || d.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::BadMembership("tolerances d and p must be strictly positive".into()));
        }
        Ok(Self { a, d, b, p })
    }

    pub fn ratio(&self, x: &[f64]) -> f64 {
        (self.b - dot(&self.a, x)) / (dot(&self.d, x) + self.p)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        trig_grade(self.ratio(x))
    }

    pub(crate) fn core(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let num = self.b - dot(&self.a, x);
        let den = dot(&self.d, x) + self.p;
        let rho = num / den;
        let (v, dv) = trig_core(rho);
        let grad = self
            .a
            .iter()
            .zip(&self.d)
            .map(|(a, d)| dv * (-a * den - num * d) / (den * den))
            .collect();
        (v, grad)
    }

    /// `eval(x) ≥ λ ⇔ b − a·x ≥ s(λ)(d·x + p) ⇔ (a + s d)·x ≤ b − s p`.
    pub fn invert_level(&self, lambda: f64) -> Result<LinearRow> {
        check_level(lambda)?;
        Ok(self.level_row(trig_level(lambda)))
    }

    pub(crate) fn level_row(&self, s: f64) -> LinearRow {
        LinearRow {
            coeffs: self.a.iter().zip(&self.d).map(|(a, d)| a + s * d).collect(),
            rhs: self.b - s * self.p,
        }
    }
}

/// Grade of an objective against its aspiration interval `[lo, hi]`:
/// `sin((z − lo)/(hi − lo) · π/2)` clamped. A zero-width interval degrades to
/// the step `z ≥ lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigObjectiveMf {
    pub lo: f64,
    pub hi: f64,
}

impl TrigObjectiveMf {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::BadMembership(format!("aspiration interval [{lo}, {hi}] is empty")));
        }
        Ok(Self { lo, hi })
    }

    pub fn is_step(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn eval(&self, z: f64) -> f64 {
        if self.is_step() {
            return if z >= self.lo { 1.0 } else { 0.0 };
        }
        trig_grade((z - self.lo) / (self.hi - self.lo))
    }

    /// Core value and derivative in `z`.
    pub(crate) fn core(&self, z: f64) -> (f64, f64) {
        if self.is_step() {
            let scale = self.lo.abs().max(1.0);
            return if z >= self.lo { (1.0, 0.0) } else { ((z - self.lo) / scale, 1.0 / scale) };
        }
        let width = self.hi - self.lo;
        let (v, dv) = trig_core((z - self.lo) / width);
        (v, dv / width)
    }

    /// Smallest `z` with `eval(z) ≥ λ`.
    pub fn invert_level(&self, lambda: f64) -> Result<f64> {
        check_level(lambda)?;
        Ok(self.threshold(trig_level(lambda)))
    }

    pub(crate) fn threshold(&self, s: f64) -> f64 {
        self.lo + s * (self.hi - self.lo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `x_j ≤ ũ_j`: 1 up to `anchor`, falling to 0 at `anchor + tol`.
    Upper,
    /// `x_j ≥ l̃_j`: 0 up to `anchor − tol`, rising to 1 at `anchor`.
    Lower,
}

/// Piecewise-linear grade of a fuzzy variable bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearBoundMf {
    pub kind: BoundKind,
    pub anchor: f64,
    pub tol: f64,
}

/// One side of a box: `x_j ≤ value` or `x_j ≥ value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundThreshold {
    AtMost(f64),
    AtLeast(f64),
}

impl LinearBoundMf {
    pub fn new(kind: BoundKind, anchor: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::BadMembership("bound tolerance must be strictly positive".into()));
        }
        Ok(Self { kind, anchor, tol })
    }

    pub fn upper(anchor: f64, tol: f64) -> Result<Self> {
        Self::new(BoundKind::Upper, anchor, tol)
    }

    pub fn lower(anchor: f64, tol: f64) -> Result<Self> {
        Self::new(BoundKind::Lower, anchor, tol)
    }

    pub fn eval(&self, xj: f64) -> f64 {
        self.core(xj).0.clamp(0.0, 1.0)
    }

    /// Unclamped line and its slope.
    pub(crate) fn core(&self, xj: f64) -> (f64, f64) {
        match self.kind {
            BoundKind::Upper => ((self.anchor + self.tol - xj) / self.tol, -1.0 / self.tol),
            BoundKind::Lower => ((xj - self.anchor + self.tol) / self.tol, 1.0 / self.tol),
        }
    }

    pub fn invert_level(&self, lambda: f64) -> Result<BoundThreshold> {
        check_level(lambda)?;
        Ok(self.threshold(lambda))
    }

    pub(crate) fn threshold(&self, lambda: f64) -> BoundThreshold {
        let slack = self.tol * (1.0 - lambda);
        match self.kind {
            BoundKind::Upper => BoundThreshold::AtMost(self.anchor + slack),
            BoundKind::Lower => BoundThreshold::AtLeast(self.anchor - slack),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FuzzyParamKind {
    Resource,
    Coefficient,
    UpperBound,
    LowerBound,
}

/// Membership of a fuzzy parameter value: resources, coefficients and upper
/// bounds are fully believed up to their nominal value and fade out over the
/// tolerance above it; lower bounds fade in over the tolerance below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FuzzyParamMf {
    pub kind: FuzzyParamKind,
    pub nominal: f64,
    pub tol: f64,
}

impl FuzzyParamMf {
    pub fn new(kind: FuzzyParamKind, nominal: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::BadMembership("parameter tolerance must be strictly positive".into()));
        }
        Ok(Self { kind, nominal, tol })
    }

    pub fn eval(&self, y: f64) -> f64 {
        let v = match self.kind {
            FuzzyParamKind::LowerBound => (y - self.nominal + self.tol) / self.tol,
            _ => (self.nominal + self.tol - y) / self.tol,
        };
        v.clamp(0.0, 1.0)
    }
}

/// A segment `origin + τ·direction`, `τ ∈ [t0, t1]`, used to slice
/// multivariate memberships for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct RaySlice {
    pub origin: Vec<f64>,
    pub direction: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
}

impl RaySlice {
    /// `x = τ·(1, …, 1)` from the origin.
    pub fn diagonal(n: usize, t1: f64) -> Self {
        Self { origin: vec![0.0; n], direction: vec![1.0; n], t0: 0.0, t1 }
    }

    pub fn point(&self, tau: f64) -> Vec<f64> {
        self.origin.iter().zip(&self.direction).map(|(o, d)| o + tau * d).collect()
    }
}

/// A membership function that can be sampled along a one-parameter domain.
pub trait Sampled {
    type Domain;

    /// `(lo, hi)` of the curve input.
    fn input_range(domain: &Self::Domain) -> (f64, f64);

    fn value_at(&self, domain: &Self::Domain, input: f64) -> f64;
}

impl Sampled for TrigObjectiveMf {
    type Domain = (f64, f64);

    fn input_range(domain: &(f64, f64)) -> (f64, f64) {
        *domain
    }

    fn value_at(&self, _: &(f64, f64), z: f64) -> f64 {
        self.eval(z)
    }
}

impl Sampled for LinearBoundMf {
    type Domain = (f64, f64);

    fn input_range(domain: &(f64, f64)) -> (f64, f64) {
        *domain
    }

    fn value_at(&self, _: &(f64, f64), xj: f64) -> f64 {
        self.eval(xj)
    }
}

impl Sampled for FuzzyParamMf {
    type Domain = (f64, f64);

    fn input_range(domain: &(f64, f64)) -> (f64, f64) {
        *domain
    }

    fn value_at(&self, _: &(f64, f64), y: f64) -> f64 {
        self.eval(y)
    }
}

impl Sampled for TrigConstraintMf {
    type Domain = RaySlice;

    fn input_range(domain: &RaySlice) -> (f64, f64) {
        (domain.t0, domain.t1)
    }

    fn value_at(&self, domain: &RaySlice, tau: f64) -> f64 {
        self.eval(&domain.point(tau))
    }
}

/// `count` uniformly spaced `(input, value)` pairs over the domain, endpoints
/// included.
pub fn sample_curve<M: Sampled>(mf: &M, domain: &M::Domain, count: usize) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = M::input_range(domain);
    if count < 2 || !(lo < hi) {
        return Err(Error::EmptyDomain);
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let input = if i + 1 == count { hi } else { lo + (hi - lo) * i as f64 / last };
            (input, mf.value_at(domain, input))
        })
        .collect())
}

/// Writes `input,value` CSV with LF endings and `%.17g` numbers.
pub fn write_curve_csv<W: Write>(mut w: W, samples: &[(f64, f64)]) -> std::io::Result<()> {
    writeln!(w, "input,value")?;
    for (x, y) in samples {
        writeln!(w, "{},{}", g17(*x), g17(*y))?;
    }
    Ok(())
}
