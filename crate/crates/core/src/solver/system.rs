use std::fmt;

use serde::{Serialize, Serializer};

use crate::crisp::AspirationInterval;
use crate::error::{Error, Result};
use crate::instance::{FuzzyMoqpInstance, QuadraticObjective};
use crate::membership::{
    trig_level, BoundThreshold, LinearBoundMf, RaySlice, TrigConstraintMf, TrigObjectiveMf,
};
use crate::polytope::Polyhedron;

/// Names one membership grade of the system; displayed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MembershipId {
    Objective(usize),
    Constraint(usize),
    Upper(usize),
    Lower(usize),
}

impl fmt::Display for MembershipId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipId::Objective(i) => write!(f, "objective_{}", i + 1),
            MembershipId::Constraint(i) => write!(f, "constraint_{}", i + 1),
            MembershipId::Upper(j) => write!(f, "upper_{}", j + 1),
            MembershipId::Lower(j) => write!(f, "lower_{}", j + 1),
        }
    }
}

impl Serialize for MembershipId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All membership grades at one point, grouped by kind.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipValues {
    pub objectives: Vec<f64>,
    pub constraints: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl MembershipValues {
    pub fn iter(&self) -> impl Iterator<Item = (MembershipId, f64)> + '_ {
        let tag = |f: fn(usize) -> MembershipId, v: &'_ [f64]| {
            v.iter().enumerate().map(move |(i, x)| (f(i), *x)).collect::<Vec<_>>()
        };
        tag(MembershipId::Objective, &self.objectives)
            .into_iter()
            .chain(tag(MembershipId::Constraint, &self.constraints))
            .chain(tag(MembershipId::Upper, &self.upper))
            .chain(tag(MembershipId::Lower, &self.lower))
    }

    /// Grades in the order objectives, constraints, upper, lower.
    pub fn flat(&self) -> Vec<f64> {
        self.iter().map(|(_, v)| v).collect()
    }

    pub fn min(&self) -> f64 {
        self.iter().map(|(_, v)| v).fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> f64 {
        self.iter().map(|(_, v)| v).sum()
    }

    /// Ids whose grade lies within `tol` of `level`.
    pub fn within(&self, level: f64, tol: f64) -> Vec<MembershipId> {
        self.iter().filter(|(_, v)| (v - level).abs() <= tol).map(|(id, _)| id).collect()
    }
}

/// Every membership function of an instance, with the objectives they grade.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipSystem {
    pub objectives: Vec<QuadraticObjective>,
    pub objective_mfs: Vec<TrigObjectiveMf>,
    pub constraint_mfs: Vec<TrigConstraintMf>,
    pub upper_mfs: Vec<LinearBoundMf>,
    pub lower_mfs: Vec<LinearBoundMf>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

/// The crisp region on which every membership is at least a given level,
/// together with the objective values each objective must reach.
#[derive(Debug, Clone)]
pub struct LevelRegion {
    pub level: f64,
    pub polytope: Polyhedron,
    pub thresholds: Vec<f64>,
}

pub fn build_system(instance: &FuzzyMoqpInstance, intervals: &[AspirationInterval]) -> Result<MembershipSystem> {
    instance.ensure_valid()?;
    if intervals.len() != instance.k {
        return Err(Error::Dimension(format!(
            "{} aspiration intervals for {} objectives",
            intervals.len(),
            instance.k
        )));
    }
    let mut warnings = Vec::new();
    let objective_mfs = intervals
        .iter()
        .enumerate()
        .map(|(q, iv)| {
            if iv.is_degenerate() {
                warnings.push(format!(
                    "objective {}: aspiration interval has zero width; using a step membership at {}",
                    q + 1,
                    iv.lo
                ));
                TrigObjectiveMf::new(iv.lo, iv.lo)
            } else {
                TrigObjectiveMf::new(iv.lo, iv.hi)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let constraint_mfs = instance
        .rows
        .iter()
        .map(|r| TrigConstraintMf::new(r.a.clone(), r.d.clone(), r.b, r.p))
        .collect::<Result<Vec<_>>>()?;
    let b = &instance.bounds;
    let upper_mfs = (0..instance.n)
        .map(|j| LinearBoundMf::upper(b.u[j], b.t[j]))
        .collect::<Result<Vec<_>>>()?;
    let lower_mfs = (0..instance.n)
        .map(|j| LinearBoundMf::lower(b.l[j], b.r[j]))
        .collect::<Result<Vec<_>>>()?;
    Ok(MembershipSystem {
        objectives: instance.objectives.clone(),
        objective_mfs,
        constraint_mfs,
        upper_mfs,
        lower_mfs,
        warnings,
    })
}

impl MembershipSystem {
    pub fn n(&self) -> usize {
        self.upper_mfs.len()
    }

    pub fn k(&self) -> usize {
        self.objective_mfs.len()
    }

    pub fn m(&self) -> usize {
        self.constraint_mfs.len()
    }

    /// Number of grades, `k + m + 2n`.
    pub fn len(&self) -> usize {
        self.k() + self.m() + 2 * self.n()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn objective_values(&self, x: &[f64]) -> Vec<f64> {
        self.objectives.iter().map(|o| o.value(x)).collect()
    }

    pub fn values(&self, x: &[f64]) -> MembershipValues {
        MembershipValues {
            objectives: self
                .objective_mfs
                .iter()
                .zip(&self.objectives)
                .map(|(mf, o)| mf.eval(o.value(x)))
                .collect(),
            constraints: self.constraint_mfs.iter().map(|mf| mf.eval(x)).collect(),
            upper: self.upper_mfs.iter().zip(x).map(|(mf, xj)| mf.eval(*xj)).collect(),
            lower: self.lower_mfs.iter().zip(x).map(|(mf, xj)| mf.eval(*xj)).collect(),
        }
    }

    /// The max-min decision: smallest grade at `x`.
    pub fn mu_d(&self, x: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for (mf, o) in self.objective_mfs.iter().zip(&self.objectives) {
            best = best.min(mf.eval(o.value(x)));
        }
        for mf in &self.constraint_mfs {
            best = best.min(mf.eval(x));
        }
        for (j, xj) in x.iter().enumerate() {
            best = best.min(self.upper_mfs[j].eval(*xj)).min(self.lower_mfs[j].eval(*xj));
        }
        best
    }

    /// Smooth extensions of every grade with gradients, in the order of
    /// [`MembershipValues::flat`]. Each equals its grade wherever the grade
    /// lies strictly inside `(0, 1)`.
    pub(crate) fn cores(&self, x: &[f64]) -> Vec<(f64, Vec<f64>)> {
        let n = self.n();
        let mut out = Vec::with_capacity(self.len());
        for (mf, o) in self.objective_mfs.iter().zip(&self.objectives) {
            let (v, dv) = mf.core(o.value(x));
            out.push((v, o.gradient(x).into_iter().map(|g| g * dv).collect()));
        }
        for mf in &self.constraint_mfs {
            out.push(mf.core(x));
        }
        for mfs in [&self.upper_mfs, &self.lower_mfs] {
            for (j, mf) in mfs.iter().enumerate() {
                let (v, dv) = mf.core(x[j]);
                let mut g = vec![0.0; n];
                g[j] = dv;
                out.push((v, g));
            }
        }
        out
    }

    /// Upper corner of the search box, `u + t`.
    pub fn outer_upper(&self) -> Vec<f64> {
        self.upper_mfs.iter().map(|mf| mf.anchor + mf.tol).collect()
    }

    /// `[0, u_j + t_j]` per coordinate; every grade vanishes outside it.
    pub fn default_box(&self) -> Vec<(f64, f64)> {
        self.outer_upper().into_iter().map(|hi| (0.0, hi)).collect()
    }

    /// The region `{x ≥ 0 : every grade ≥ λ}`, split into its linear part and
    /// the objective thresholds. `λ = 0` gives the closure of the positive
    /// region of the constraint and bound grades.
    pub fn level_region(&self, lambda: f64) -> Result<LevelRegion> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::LevelOutOfRange(lambda));
        }
        let s = trig_level(lambda);
        let (a, rhs): (Vec<_>, Vec<_>) = self
            .constraint_mfs
            .iter()
            .map(|mf| {
                let row = mf.level_row(s);
                (row.coeffs, row.rhs)
            })
            .unzip();
        let hi: Vec<f64> = self
            .upper_mfs
            .iter()
            .map(|mf| match mf.threshold(lambda) {
                BoundThreshold::AtMost(v) | BoundThreshold::AtLeast(v) => v,
            })
            .collect();
        let lo: Vec<f64> = self
            .lower_mfs
            .iter()
            .map(|mf| match mf.threshold(lambda) {
                BoundThreshold::AtMost(v) | BoundThreshold::AtLeast(v) => v.max(0.0),
            })
            .collect();
        let thresholds = self
            .objective_mfs
            .iter()
            .map(|mf| if mf.is_step() { mf.lo } else { mf.threshold(s) })
            .collect();
        Ok(LevelRegion {
            level: lambda,
            polytope: Polyhedron::from_rows_and_box(&a, &rhs, &lo, &hi)?,
            thresholds,
        })
    }

    /// Default slice for plotting a constraint grade: the ray from the
    /// origin along `direction` until it leaves the search box.
    pub fn ray_slice(&self, direction: &[f64]) -> Result<RaySlice> {
        if direction.len() != self.n() {
            return Err(Error::Dimension(format!(
                "slice direction has {} entries, expected {}",
                direction.len(),
                self.n()
            )));
        }
        if direction.iter().any(|d| !d.is_finite() || *d < 0.0) || direction.iter().all(|d| *d == 0.0) {
            return Err(Error::EmptyDomain);
        }
        let t1 = self
            .outer_upper()
            .iter()
            .zip(direction)
            .filter(|(_, d)| **d > 0.0)
            .map(|(hi, d)| hi / d)
            .fold(f64::INFINITY, f64::min);
        Ok(RaySlice { origin: vec![0.0; self.n()], direction: direction.to_vec(), t0: 0.0, t1 })
    }
}

impl LevelRegion {
    /// Exact membership of `x` (with slack `tol` on the linear rows).
    pub fn contains(&self, system: &MembershipSystem, x: &[f64], tol: f64) -> bool {
        self.polytope.contains(x, tol)
            && system
                .objectives
                .iter()
                .zip(&self.thresholds)
                .all(|(o, thr)| o.value(x) >= *thr)
    }
}
