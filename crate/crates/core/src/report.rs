//! End-to-end pipeline, the JSON solve report, the plain-text summary and
//! membership-curve CSV export.

use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::crisp::{aspiration, AspirationInterval};
use crate::error::{Error, Result};
use crate::instance::{FuzzyMoqpInstance, Variant};
use crate::membership::{sample_curve, write_curve_csv};
use crate::numfmt;
use crate::solver::{
    build_system, check_fuzzy_efficiency, solve_phase1, solve_phase1_oracle_only, solve_phase2,
    solve_phase2_oracle_only, Certification, EfficiencyVerdict, GridOracleConfig, MembershipSystem, Phase1Result,
    Phase2Result, SolverSettings,
};

/// Samples per exported curve.
pub const CURVE_SAMPLES: usize = 401;

/// Exit status for a certified run.
pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNCERTIFIED: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    pub starts: usize,
    /// Grid points per axis.
    pub grid: usize,
    pub refine: usize,
    pub oracle_only: bool,
    pub tol_lambda: f64,
    /// Direction of the ray used for constraint curves (default all ones).
    pub slice: Option<Vec<f64>>,
    pub timings: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            starts: 16,
            grid: 401,
            refine: 3,
            oracle_only: false,
            tol_lambda: 1e-6,
            slice: None,
            timings: false,
        }
    }
}

impl SolveOptions {
    pub fn settings(&self) -> SolverSettings {
        SolverSettings {
            oracle: GridOracleConfig {
                resolution: self.grid,
                refine_rounds: self.refine,
                seed: self.seed,
                ..Default::default()
            },
            starts: self.starts,
            seed: self.seed,
            tol_lambda: self.tol_lambda,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceDigest {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    /// SHA-256 of the canonical JSON form.
    pub sha256: String,
}

impl InstanceDigest {
    pub fn of(instance: &FuzzyMoqpInstance) -> Self {
        Self {
            n: instance.n,
            k: instance.k,
            m: instance.m,
            sha256: hex::encode(Sha256::digest(instance.to_canonical_json().as_bytes())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantOptimum {
    pub variant: Variant,
    pub value: f64,
    pub argmax: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSettings {
    #[serde(rename = "box")]
    pub bounds: Vec<(f64, f64)>,
    pub resolution: usize,
    pub refine_rounds: usize,
    pub max_points: u64,
    pub seed: u64,
    pub starts: usize,
    pub tol_lambda: f64,
    pub oracle_only: bool,
}

/// Wall-clock seconds per step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub crisp: f64,
    pub phase1: f64,
    pub phase2: f64,
    pub efficiency: f64,
    pub total: f64,
}

/// Everything a run produced. Numbers are the module outputs unrounded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub instance: InstanceDigest,
    /// Per objective, the four variant optima in variant order.
    pub crisp_optima: Vec<Vec<VariantOptimum>>,
    pub aspiration: Vec<AspirationInterval>,
    pub phase1: Phase1Result,
    pub phase2: Phase2Result,
    pub efficiency: EfficiencyVerdict,
    pub oracle: OracleSettings,
    /// Present only when requested, so that repeated runs stay identical.
    pub timings: Option<Timings>,
    pub warnings: Vec<String>,
}

impl SolveReport {
    pub fn exit_code(&self) -> i32 {
        let bad = |c: Certification| c == Certification::Uncertified;
        if bad(self.phase1.certification) || bad(self.phase2.certification) {
            EXIT_UNCERTIFIED
        } else {
            EXIT_CERTIFIED
        }
    }

    pub fn to_json(&self) -> String {
        numfmt::to_json_string(self).expect("report serializes")
    }
}

/// A finished run together with the membership system it used.
#[derive(Debug, Clone)]
pub struct Solved {
    pub report: SolveReport,
    pub system: MembershipSystem,
}

/// Reads, validates and solves an instance file.
pub fn run_pipeline(path: impl AsRef<Path>, options: &SolveOptions) -> Result<Solved> {
    let text = fs::read_to_string(path).map_err(|e| Error::from(e).at("read"))?;
    let instance = FuzzyMoqpInstance::from_json(&text).map_err(|e| e.at("parse"))?;
    solve_instance(&instance, options)
}

/// Validation, crisp optima, aspiration intervals, both phases and the
/// efficiency check.
pub fn solve_instance(instance: &FuzzyMoqpInstance, options: &SolveOptions) -> Result<Solved> {
    let total = Instant::now();
    instance.ensure_valid().map_err(|e| e.at("validate"))?;
    let settings = options.settings();
    let mut warnings = Vec::new();

    let clock = Instant::now();
    let per_objective = (0..instance.k)
        .map(|q| aspiration(instance, q))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.at("crisp optima"))?;
    let crisp_time = clock.elapsed().as_secs_f64();
    let crisp_optima = per_objective
        .iter()
        .map(|a| {
            Variant::ALL
                .iter()
                .zip(&a.optima)
                .map(|(v, o)| VariantOptimum { variant: *v, value: o.value, argmax: o.argmax.clone() })
                .collect()
        })
        .collect();
    let intervals: Vec<AspirationInterval> = per_objective.iter().map(|a| a.interval).collect();
    let system = build_system(instance, &intervals).map_err(|e| e.at("membership system"))?;
    warnings.extend(system.warnings.iter().cloned());

    let clock = Instant::now();
    let phase1 = if options.oracle_only {
        solve_phase1_oracle_only(&system, &settings)
    } else {
        solve_phase1(&system, &settings)
    }
    .map_err(|e| e.at("max-min phase"))?;
    let phase1_time = clock.elapsed().as_secs_f64();
    if phase1.certification == Certification::Uncertified {
        warnings.push(format!(
            "max-min phase: local value {} falls short of grid value {}; grid point reported",
            numfmt::g17(phase1.bisection_lambda.into_iter().chain(phase1.direct_lambda).fold(0.0, f64::max)),
            numfmt::g17(phase1.oracle_lambda)
        ));
    }

    let clock = Instant::now();
    let phase2 = if options.oracle_only {
        solve_phase2_oracle_only(&system, &phase1, &settings)
    } else {
        solve_phase2(&system, &phase1, &settings)
    }
    .map_err(|e| e.at("sum phase"))?;
    let phase2_time = clock.elapsed().as_secs_f64();
    if phase2.oracle.is_none() {
        warnings.push("sum phase: grid oracle found no point of the level set; result not cross-checked".into());
    }
    if let Some(d) = &phase2.discrepancy {
        warnings.push(format!(
            "sum phase: grid oracle found a level-set point with sum {} above the local sum {}",
            numfmt::g17(d.oracle_sum),
            numfmt::g17(d.local_sum)
        ));
    }

    let clock = Instant::now();
    let efficiency =
        check_fuzzy_efficiency(&system, &phase2.x_eff, &settings.oracle).map_err(|e| e.at("efficiency check"))?;
    let efficiency_time = clock.elapsed().as_secs_f64();
    if efficiency.is_dominated() {
        warnings.push("efficiency check: a dominating point was found".into());
    }

    let timings = options.timings.then(|| Timings {
        crisp: crisp_time,
        phase1: phase1_time,
        phase2: phase2_time,
        efficiency: efficiency_time,
        total: total.elapsed().as_secs_f64(),
    });
    let oracle = OracleSettings {
        bounds: settings.oracle_box(&system)?,
        resolution: settings.oracle.resolution,
        refine_rounds: settings.oracle.refine_rounds,
        max_points: settings.oracle.max_points,
        seed: settings.oracle.seed,
        starts: settings.starts,
        tol_lambda: settings.tol_lambda,
        oracle_only: options.oracle_only,
    };
    let report = SolveReport {
        instance: InstanceDigest::of(instance),
        crisp_optima,
        aspiration: intervals,
        phase1,
        phase2,
        efficiency,
        oracle,
        timings,
        warnings,
    };
    Ok(Solved { report, system })
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", parts.join(", "))
}

/// Human-readable table of the report, rounded for display.
pub fn render_summary(report: &SolveReport) -> String {
    let mut s = String::new();
    let d = &report.instance;
    let _ = writeln!(s, "instance  n={} k={} m={}  sha256 {}", d.n, d.k, d.m, &d.sha256[..16]);
    let _ = writeln!(s, "\ncrisp optima        nominal    tightened      widened      relaxed     aspiration");
    for (q, (row, iv)) in report.crisp_optima.iter().zip(&report.aspiration).enumerate() {
        let _ = write!(s, "  Z{:<3}", q + 1);
        for o in row {
            let _ = write!(s, " {:>12.4}", o.value);
        }
        let _ = writeln!(s, "   [{}, {}]", iv.lo, iv.hi);
    }
    let p1 = &report.phase1;
    let _ = writeln!(s, "\nmax-min   lambda* = {:.7}  x* = {}  ({:?})", p1.lambda_star, fmt_vec(&p1.x_star), p1.certification);
    let _ = writeln!(s, "          grid    = {:.7}  at {}", p1.oracle_lambda, fmt_vec(&p1.oracle_point));
    let binding: Vec<String> = p1.binding.iter().map(|b| b.to_string()).collect();
    let _ = writeln!(s, "          binding: {}", binding.join(", "));
    let p2 = &report.phase2;
    let _ = writeln!(s, "\nsum       x_eff = {}  ({:?})", fmt_vec(&p2.x_eff), p2.certification);
    let _ = writeln!(s, "          objectives  {}", fmt_vec(&p2.mu_objectives));
    let _ = writeln!(s, "          constraints {}", fmt_vec(&p2.mu_constraints));
    let _ = writeln!(s, "          upper       {}", fmt_vec(&p2.mu_upper));
    let _ = writeln!(s, "          lower       {}", fmt_vec(&p2.mu_lower));
    let _ = writeln!(s, "          Z(x_eff)    {}", fmt_vec(&p2.objective_values));
    let _ = writeln!(s, "          sum = {:.7}", p2.sum_memberships);
    let verdict = match &report.efficiency {
        EfficiencyVerdict::Efficient { points_examined, .. } => {
            format!("efficient at grid resolution ({points_examined} points)")
        }
        EfficiencyVerdict::Dominated { by, improvement, .. } => {
            format!("dominated by {} (gain {improvement:.3e})", fmt_vec(by))
        }
        EfficiencyVerdict::Inconclusive { reason } => format!("inconclusive: {reason}"),
    };
    let _ = writeln!(s, "\nefficiency: {verdict}");
    if let Some(t) = &report.timings {
        let _ = writeln!(
            s,
            "timings (s): crisp {:.3}  max-min {:.3}  sum {:.3}  efficiency {:.3}  total {:.3}",
            t.crisp, t.phase1, t.phase2, t.efficiency, t.total
        );
    }
    for w in &report.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

fn write_csv(dir: &Path, name: String, samples: &[(f64, f64)]) -> Result<PathBuf> {
    let path = dir.join(name);
    let file = fs::File::create(&path)?;
    write_curve_csv(BufWriter::new(file), samples)?;
    Ok(path)
}

/// Writes one `input,value` CSV per membership function into `out_dir`:
/// objectives over their aspiration interval widened by 10% each side,
/// constraints along a ray from the origin (default all ones) up to the
/// search box, bounds over `anchor ± 2·tol`.
pub fn emit_curves(system: &MembershipSystem, out_dir: impl AsRef<Path>, slice: Option<&[f64]>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (q, mf) in system.objective_mfs.iter().enumerate() {
        let pad = if mf.is_step() { mf.lo.abs().max(1.0) * 0.1 } else { 0.1 * (mf.hi - mf.lo) };
        let samples = sample_curve(mf, &(mf.lo - pad, mf.hi + pad), CURVE_SAMPLES)?;
        written.push(write_csv(dir, format!("objective_{}.csv", q + 1), &samples)?);
    }
    let ones = vec![1.0; system.n()];
    let ray = system.ray_slice(slice.unwrap_or(&ones))?;
    for (i, mf) in system.constraint_mfs.iter().enumerate() {
        let samples = sample_curve(mf, &ray, CURVE_SAMPLES)?;
        written.push(write_csv(dir, format!("constraint_{}.csv", i + 1), &samples)?);
    }
    for (kind, mfs) in [("upper", &system.upper_mfs), ("lower", &system.lower_mfs)] {
        for (j, mf) in mfs.iter().enumerate() {
            let domain = (mf.anchor - 2.0 * mf.tol, mf.anchor + 2.0 * mf.tol);
            let samples = sample_curve(mf, &domain, CURVE_SAMPLES)?;
            written.push(write_csv(dir, format!("{kind}_{}.csv", j + 1), &samples)?);
        }
    }
    Ok(written)
}
