//! Executes an experiment config and assembles the report.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{BackendChoice, ExperimentConfig, Mode, Resolved};
use crate::asymptotics::{coeff_w1, fit_log_coefficient, predict, FitResult, Prediction};
use crate::error::{Error, Result};
use crate::operators::{
    assemble_dense, assemble_torus_with, dense_mesh, write_whop, DiscreteOperator, Resolution,
    TorusGrid,
};
use crate::spectral::{
    commutators, hermitian_eigenvalues, regularized_trace_diff, smooth_sum, trace_norm_matrix,
    trace_powers,
};
use crate::symbols::TestFunction;

const MB: f64 = 1024.0 * 1024.0;

/// Environment variable naming the directory for matrix dumps.
pub const SCRATCH_ENV: &str = "WIDOMLAB_SCRATCH";

pub fn scratch_dir() -> PathBuf {
    std::env::var_os(SCRATCH_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir)
}

/// Discretization actually used at one α.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionUsed {
    /// Torus nodes per side, or Nyström node count.
    pub n: usize,
    pub h: f64,
    pub ppw: f64,
    pub pad_factor: f64,
}

/// One (α, curve) measurement. Failed α points carry `error` and no values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub alpha: f64,
    pub curve: String,
    pub trace: Option<Complex64>,
    pub pred_w0_term: Option<f64>,
    pub pred_w1_term: Option<f64>,
    /// Re trace − predicted terms; the normalized ratio for commutator curves.
    pub residual: Option<f64>,
    pub backend: String,
    pub n_dof: Option<usize>,
    pub seconds: f64,
    pub resolution: Option<ResolutionUsed>,
    /// α · diam Λ · R_Ω
    pub alpha_ell_rho: f64,
    pub spectrum_excursion: Option<f64>,
    pub clamp_delta: Option<f64>,
    pub error: Option<String>,
    pub config_hash: String,
}

impl Record {
    /// Whether this α point was rejected by a resolution or budget guard.
    pub fn is_guard_failure(&self) -> bool {
        self.error.as_deref().is_some_and(|e| e.starts_with("resolution guard"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub curve: String,
    pub prediction: Option<Prediction>,
    pub fit: Option<FitResult>,
    pub fit_imag: Option<FitResult>,
    pub fit_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Geometric coefficients of b ≡ 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    /// |Λ||Ω|/(2π)^d; absent for unbounded Λ.
    pub w0_geometric: Option<f64>,
    pub w1_geometric: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub mode: Mode,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub coefficients: Coefficients,
    pub curves: Vec<CurveReport>,
    pub records: Vec<Record>,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

/// Pre-flight estimate for one α.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointPlan {
    pub alpha: f64,
    pub backend: String,
    pub resolution: ResolutionUsed,
    pub n_dof: usize,
    pub memory_mb: f64,
}

struct Curve {
    label: String,
    g: TestFunction,
}

fn curves(cfg: &ExperimentConfig, r: &Resolved) -> Vec<Curve> {
    match &r.g {
        Some(g) => {
            let label = match g {
                TestFunction::Polynomial(c)
                    if c.iter().filter(|v| **v != 0.0).count() == 1 && c.last() == Some(&1.0) =>
                {
                    format!("p={}", c.len())
                }
                _ => g.label(),
            };
            vec![Curve { label, g: g.clone() }]
        }
        None => (1..=cfg.p_max)
            .map(|p| Curve {
                label: format!("p={p}"),
                g: TestFunction::power(p),
            })
            .collect(),
    }
}

fn backend_of(cfg: &ExperimentConfig) -> BackendChoice {
    match cfg.mode {
        Mode::RegularizedDiff | Mode::CommutatorDiag => BackendChoice::Torus,
        _ => cfg.backend,
    }
}

fn backend_name(b: BackendChoice) -> &'static str {
    match b {
        BackendChoice::Dense => "analytic_dense",
        BackendChoice::Torus => "torus_fft",
    }
}

fn resolution_for<'a>(cfg: &'a ExperimentConfig, b: BackendChoice) -> &'a Resolution {
    match b {
        BackendChoice::Dense => &cfg.resolution,
        BackendChoice::Torus => cfg.torus_resolution(),
    }
}

enum Discretization {
    Dense,
    Torus(TorusGrid),
}

fn plan_with(
    cfg: &ExperimentConfig,
    r: &Resolved,
    alpha: f64,
    backend: BackendChoice,
) -> Result<(PointPlan, Discretization)> {
    let res = resolution_for(cfg, backend);
    let (used, n_dof, copies, disc) = match backend {
        BackendChoice::Dense => {
            let mesh = dense_mesh(&r.lambda, &r.omega, alpha, res)?;
            let h = 2.0 * PI / (res.ppw * alpha * r.omega.sup_norm_radius());
            let used = ResolutionUsed {
                n: mesh.len(),
                h,
                ppw: res.ppw,
                pad_factor: res.pad_factor,
            };
            (used, mesh.len(), 3.0, Discretization::Dense)
        }
        BackendChoice::Torus => {
            let grid = TorusGrid::plan(&r.lambda, &r.omega, alpha, Some(&r.symbol), res)?;
            let (n_dof, copies) = match cfg.mode {
                Mode::CommutatorDiag => (grid.len(), 4.0),
                Mode::RegularizedDiff => {
                    let set = r.lambda.complement_inner().unwrap_or(&r.lambda);
                    (grid.indices_in(set).len(), cfg.p_max as f64 + 2.0)
                }
                _ => (grid.indices_in(&r.lambda).len(), 3.0),
            };
            let used = ResolutionUsed {
                n: grid.n,
                h: grid.h,
                ppw: res.ppw,
                pad_factor: res.pad_factor,
            };
            (used, n_dof, copies, Discretization::Torus(grid))
        }
    };
    let memory_mb = 16.0 * (n_dof as f64).powi(2) * copies / MB;
    if memory_mb > cfg.memory_budget_mb {
        return Err(Error::guard(
            "memory_budget",
            format!(
                "alpha = {alpha} needs about {memory_mb:.0} MB for {n_dof} unknowns, budget is {} MB",
                cfg.memory_budget_mb
            ),
        ));
    }
    let plan = PointPlan {
        alpha,
        backend: backend_name(backend).into(),
        resolution: used,
        n_dof,
        memory_mb,
    };
    Ok((plan, disc))
}

/// Resolution, unknown count and memory estimate for every α, without
/// assembling anything. Fails with the first guard violation.
pub fn validate(cfg: &ExperimentConfig) -> Result<Vec<PointPlan>> {
    let r = cfg.resolve()?;
    check_mode(cfg, &r)?;
    if cfg.mode == Mode::CoeffOnly {
        return Ok(Vec::new());
    }
    let b = backend_of(cfg);
    let plans: Vec<PointPlan> = r
        .alphas
        .iter()
        .map(|&a| plan_with(cfg, &r, a, b).map(|p| p.0))
        .collect::<Result<_>>()?;
    if b == BackendChoice::Torus {
        let res = cfg.torus_resolution();
        for &a in &r.alphas {
            let grid = TorusGrid::plan(&r.lambda, &r.omega, a, Some(&r.symbol), res)?;
            let lambda = (cfg.mode != Mode::CommutatorDiag).then_some(&r.lambda);
            grid.check(lambda, &r.omega, &r.symbol)?;
        }
    }
    Ok(plans)
}

fn check_mode(cfg: &ExperimentConfig, r: &Resolved) -> Result<()> {
    match cfg.mode {
        Mode::TraceSweep if cfg.backend == BackendChoice::Dense && !r.symbol.is_constant() => Err(
            Error::Config("the dense backend handles constant symbols only".into()),
        ),
        _ => Ok(()),
    }
}

fn alpha_ell_rho(r: &Resolved, alpha: f64) -> f64 {
    alpha * r.lambda.diam() * r.omega.sup_norm_radius()
}

fn predictions(cfg: &ExperimentConfig, r: &Resolved, curves: &[Curve]) -> Vec<Result<Prediction>> {
    curves
        .iter()
        .map(|c| {
            let p = predict(&c.g, &r.symbol, &r.lambda, &r.omega, cfg.symmetrized, cfg.quadrature.level)?;
            let finite = p.w1.re.is_finite()
                && p.w1.im.is_finite()
                && p.w0.is_none_or(|w| w.re.is_finite() && w.im.is_finite());
            if finite {
                Ok(p)
            } else {
                Err(Error::Unsupported(format!("non-finite prediction for {}", c.label)))
            }
        })
        .collect()
}

fn coefficients(cfg: &ExperimentConfig, r: &Resolved) -> Result<Coefficients> {
    let d = cfg.dimension as i32;
    let w0 = (!r.lambda.is_complement())
        .then(|| r.lambda.volume() * r.omega.volume() / (2.0 * PI).powi(d));
    let w1 = coeff_w1(
        |_, _| Ok(Complex64::new(1.0, 0.0)),
        &r.lambda.boundary_patches(),
        &r.omega.boundary_patches(),
        cfg.quadrature.level,
    )?;
    Ok(Coefficients {
        w0_geometric: w0,
        w1_geometric: w1.re,
    })
}

fn dump(cfg: &ExperimentConfig, op: &DiscreteOperator) -> Result<()> {
    if cfg.output.dump_matrices {
        let dir = scratch_dir();
        std::fs::create_dir_all(&dir)?;
        write_whop(op, dir.join(format!("{}_alpha{}.whop", cfg.name, op.alpha)))?;
    }
    Ok(())
}

struct PointValues {
    traces: Vec<Complex64>,
    excursion: Option<f64>,
    clamp_delta: Option<f64>,
    n_dof: usize,
}

fn trace_point(
    cfg: &ExperimentConfig,
    r: &Resolved,
    curves: &[Curve],
    alpha: f64,
    disc: &Discretization,
) -> Result<PointValues> {
    let op = match disc {
        Discretization::Dense => assemble_dense(&r.symbol, &r.lambda, &r.omega, alpha, &cfg.resolution)?,
        Discretization::Torus(grid) => {
            assemble_torus_with(&r.symbol, &r.lambda, &r.omega, alpha, grid, cfg.quantization)?
        }
    };
    let op = if cfg.symmetrized { op.symmetrize() } else { op };
    dump(cfg, &op)?;
    let torus_unit = matches!(disc, Discretization::Torus(_)) && op.unit_symbol;
    let need_smooth = curves.iter().any(|c| !c.g.is_polynomial());
    let need_eig = need_smooth || (torus_unit && cfg.check_spectrum);
    let eig = if need_eig {
        let defect = op.hermitian_defect();
        if !op.hermitian || defect > 1e-10 {
            return Err(Error::NotHermitian { defect });
        }
        Some(hermitian_eigenvalues(&op.matrix))
    } else {
        None
    };
    let excursion = match (&eig, torus_unit && cfg.check_spectrum) {
        (Some(ev), true) => {
            let lo = ev.first().copied().unwrap_or(0.0);
            let hi = ev.last().copied().unwrap_or(0.0);
            Some((-lo).max(hi - 1.0).max(0.0))
        }
        _ => None,
    };
    let max_deg = curves.iter().filter_map(|c| c.g.degree()).max().unwrap_or(0);
    let powers = if max_deg > 0 { trace_powers(&op.matrix, max_deg) } else { Vec::new() };
    let mut clamp_delta: Option<f64> = None;
    let traces = curves
        .iter()
        .map(|c| match &c.g {
            TestFunction::Polynomial(coeffs) => coeffs
                .iter()
                .zip(&powers)
                .map(|(k, t)| *k * t)
                .sum(),
            g => {
                let s = smooth_sum(eig.as_deref().unwrap_or(&[]), g, op.unit_symbol);
                clamp_delta = Some(clamp_delta.unwrap_or(0.0).max(s.clamp_delta));
                Complex64::new(s.value, 0.0)
            }
        })
        .collect();
    Ok(PointValues {
        traces,
        excursion,
        clamp_delta,
        n_dof: op.dim(),
    })
}

fn regularized_point(
    r: &Resolved,
    curves: &[Curve],
    alpha: f64,
    grid: &TorusGrid,
) -> Result<PointValues> {
    let max_deg = curves.iter().filter_map(|c| c.g.degree()).max().unwrap_or(0);
    let diffs: Vec<Complex64> = (1..=max_deg)
        .map(|p| regularized_trace_diff(&r.symbol, &r.lambda, &r.omega, alpha, p, grid))
        .collect::<Result<_>>()?;
    let traces = curves
        .iter()
        .map(|c| match &c.g {
            TestFunction::Polynomial(coeffs) => coeffs.iter().zip(&diffs).map(|(k, t)| *k * t).sum(),
            _ => unreachable!("regularized curves are polynomial"),
        })
        .collect();
    let set = r.lambda.complement_inner().unwrap_or(&r.lambda);
    Ok(PointValues {
        traces,
        excursion: None,
        clamp_delta: None,
        n_dof: grid.indices_in(set).len(),
    })
}

fn commutator_point(r: &Resolved, grid: &TorusGrid) -> Result<PointValues> {
    let (cl, co) = commutators(&r.symbol, &r.lambda, &r.omega, grid)?;
    Ok(PointValues {
        traces: vec![
            Complex64::new(trace_norm_matrix(&cl), 0.0),
            Complex64::new(trace_norm_matrix(&co), 0.0),
        ],
        excursion: None,
        clamp_delta: None,
        n_dof: grid.len(),
    })
}

fn relative_check(name: String, fitted: f64, predicted: f64, tol: f64) -> Verdict {
    let (err, kind) = if predicted.abs() > 1e-12 {
        ((fitted - predicted).abs() / predicted.abs(), "relative")
    } else {
        ((fitted - predicted).abs(), "absolute")
    };
    Verdict {
        name,
        pass: err <= tol,
        detail: format!("fitted {fitted:.6e}, predicted {predicted:.6e}, {kind} error {err:.3e} (tolerance {tol:.3e})"),
    }
}

/// Runs the experiment. Per-α failures become error records; only config
/// problems are returned as errors.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let r = cfg.resolve()?;
    check_mode(cfg, &r)?;
    let coefficients = coefficients(cfg, &r)?;
    let curve_list: Vec<Curve> = match cfg.mode {
        Mode::CommutatorDiag => vec![
            Curve {
                label: "commutator_lambda".into(),
                g: TestFunction::power(1),
            },
            Curve {
                label: "commutator_omega".into(),
                g: TestFunction::power(1),
            },
        ],
        _ => curves(cfg, &r),
    };
    let preds: Vec<Option<Result<Prediction>>> = if cfg.mode == Mode::CommutatorDiag {
        curve_list.iter().map(|_| None).collect()
    } else {
        predictions(cfg, &r, &curve_list).into_iter().map(Some).collect()
    };

    let hash = cfg.hash();
    let mut records = Vec::new();
    if cfg.mode != Mode::CoeffOnly {
        let backend = backend_of(cfg);
        for &alpha in &r.alphas {
            let start = Instant::now();
            let outcome = plan_with(cfg, &r, alpha, backend).and_then(|(plan, disc)| {
                let values = match (cfg.mode, &disc) {
                    (Mode::TraceSweep, _) => trace_point(cfg, &r, &curve_list, alpha, &disc),
                    (Mode::RegularizedDiff, Discretization::Torus(g)) => {
                        regularized_point(&r, &curve_list, alpha, g)
                    }
                    (Mode::CommutatorDiag, Discretization::Torus(g)) => commutator_point(&r, g),
                    _ => Err(Error::Config("mode needs the torus backend".into())),
                }?;
                Ok((plan, values))
            });
            let seconds = start.elapsed().as_secs_f64();
            let aer = alpha_ell_rho(&r, alpha);
            for (k, c) in curve_list.iter().enumerate() {
                let base = Record {
                    alpha,
                    curve: c.label.clone(),
                    trace: None,
                    pred_w0_term: None,
                    pred_w1_term: None,
                    residual: None,
                    backend: backend_name(backend).into(),
                    n_dof: None,
                    seconds,
                    resolution: None,
                    alpha_ell_rho: aer,
                    spectrum_excursion: None,
                    clamp_delta: None,
                    error: None,
                    config_hash: hash.clone(),
                };
                let rec = match &outcome {
                    Err(e) => Record {
                        error: Some(e.to_string()),
                        ..base
                    },
                    Ok((plan, v)) => {
                        let t = v.traces[k];
                        let pred = preds[k].as_ref().and_then(|p| p.as_ref().ok());
                        let w0 = pred.and_then(|p| p.w0.map(|_| p.w0_term(alpha).re));
                        let w1 = pred.map(|p| p.w1_term(alpha).re);
                        let residual = match cfg.mode {
                            Mode::CommutatorDiag => t.re / alpha.powi(cfg.dimension as i32 - 1),
                            _ => t.re - w0.unwrap_or(0.0) - w1.unwrap_or(0.0),
                        };
                        Record {
                            trace: Some(t),
                            pred_w0_term: w0,
                            pred_w1_term: w1,
                            residual: Some(residual),
                            n_dof: Some(v.n_dof),
                            resolution: Some(plan.resolution.clone()),
                            spectrum_excursion: v.excursion,
                            clamp_delta: v.clamp_delta,
                            ..base
                        }
                    }
                };
                records.push(rec);
            }
        }
    }

    let mut verdicts = Vec::new();
    let mut curve_reports = Vec::new();
    let tol = cfg.verdict.tolerance;
    for (k, c) in curve_list.iter().enumerate() {
        let mut report = CurveReport {
            curve: c.label.clone(),
            prediction: None,
            fit: None,
            fit_imag: None,
            fit_error: None,
        };
        match &preds[k] {
            Some(Ok(p)) => report.prediction = Some(p.clone()),
            Some(Err(e)) => {
                report.fit_error = Some(e.to_string());
                verdicts.push(Verdict {
                    name: format!("prediction[{}]", c.label),
                    pass: false,
                    detail: e.to_string(),
                });
            }
            None => {}
        }
        let pts: Vec<(f64, Complex64)> = records
            .iter()
            .filter(|rec| rec.curve == c.label)
            .filter_map(|rec| rec.trace.map(|t| (rec.alpha, t)))
            .collect();
        match cfg.mode {
            Mode::CoeffOnly => {
                if let Some(p) = &report.prediction {
                    verdicts.push(Verdict {
                        name: format!("prediction[{}]", c.label),
                        pass: true,
                        detail: format!("W1 = {:.12e}{:+.12e}i", p.w1.re, p.w1.im),
                    });
                }
            }
            Mode::CommutatorDiag => {
                let d = cfg.dimension as i32;
                let ratios: Vec<f64> = pts.iter().map(|(a, t)| t.re / a.powi(d - 1)).collect();
                let max = ratios.iter().copied().fold(0.0, f64::max);
                let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
                let (pass, detail) = if ratios.is_empty() {
                    (false, "no successful alpha points".to_string())
                } else if max <= 1e-10 {
                    (true, format!("commutator vanishes (max ratio {max:.3e})"))
                } else {
                    let spread = max / min;
                    (
                        spread <= cfg.verdict.max_ratio_spread,
                        format!(
                            "ratios {min:.4e}..{max:.4e}, spread {spread:.4} (limit {})",
                            cfg.verdict.max_ratio_spread
                        ),
                    )
                };
                verdicts.push(Verdict {
                    name: format!("growth[{}]", c.label),
                    pass,
                    detail,
                });
            }
            Mode::TraceSweep | Mode::RegularizedDiff => {
                let Some(pred) = report.prediction.clone() else {
                    curve_reports.push(report);
                    continue;
                };
                let window = cfg.fit.window.map(|[a, b]| (a, b));
                let w0 = |part: fn(Complex64) -> f64| -> Option<f64> {
                    if cfg.fit.fit_w0 {
                        None
                    } else if cfg.mode == Mode::RegularizedDiff {
                        Some(0.0)
                    } else {
                        pred.w0.map(part)
                    }
                };
                let re: Vec<(f64, f64)> = pts.iter().map(|(a, t)| (*a, t.re)).collect();
                match fit_log_coefficient(&re, w0(|z| z.re), cfg.dimension, window) {
                    Ok(f) => {
                        verdicts.push(relative_check(
                            format!("log_coefficient[{}]", c.label),
                            f.c_log,
                            pred.w1.re,
                            tol,
                        ));
                        report.fit = Some(f);
                    }
                    Err(e) => {
                        verdicts.push(Verdict {
                            name: format!("log_coefficient[{}]", c.label),
                            pass: false,
                            detail: e.to_string(),
                        });
                        report.fit_error = Some(e.to_string());
                    }
                }
                let scale = pts.iter().map(|(_, t)| t.norm()).fold(0.0, f64::max);
                let has_imag = pts.iter().any(|(_, t)| t.im.abs() > 1e-12 * scale.max(1.0))
                    || pred.w1.im.abs() > 1e-14;
                if has_imag {
                    let im: Vec<(f64, f64)> = pts.iter().map(|(a, t)| (*a, t.im)).collect();
                    match fit_log_coefficient(&im, w0(|z| z.im), cfg.dimension, window) {
                        Ok(f) => {
                            verdicts.push(relative_check(
                                format!("log_coefficient_imag[{}]", c.label),
                                f.c_log,
                                pred.w1.im,
                                tol,
                            ));
                            report.fit_imag = Some(f);
                        }
                        Err(e) => verdicts.push(Verdict {
                            name: format!("log_coefficient_imag[{}]", c.label),
                            pass: false,
                            detail: e.to_string(),
                        }),
                    }
                }
            }
        }
        curve_reports.push(report);
    }

    let excursions: Vec<f64> = records.iter().filter_map(|r| r.spectrum_excursion).collect();
    if !excursions.is_empty() {
        let worst = excursions.iter().copied().fold(0.0, f64::max);
        verdicts.push(Verdict {
            name: "spectrum_in_unit_interval".into(),
            pass: worst <= cfg.verdict.spectrum_tolerance,
            detail: format!(
                "largest excursion {worst:.3e} (tolerance {:.1e})",
                cfg.verdict.spectrum_tolerance
            ),
        });
    }
    if cfg.mode != Mode::CoeffOnly {
        let failed: Vec<f64> = {
            let mut v: Vec<f64> = records.iter().filter(|r| r.error.is_some()).map(|r| r.alpha).collect();
            v.dedup();
            v
        };
        verdicts.push(Verdict {
            name: "all_alphas_succeeded".into(),
            pass: failed.is_empty(),
            detail: if failed.is_empty() {
                format!("{} alpha points", r.alphas.len())
            } else {
                format!("failed at alpha = {failed:?}")
            },
        });
    }

    let pass = verdicts.iter().all(|v| v.pass);
    Ok(Report {
        name: cfg.name.clone(),
        mode: cfg.mode,
        config_hash: hash,
        config: cfg.clone(),
        coefficients,
        curves: curve_reports,
        records,
        verdicts,
        pass,
    })
}

/// One α of [`compare_backends`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub alpha: f64,
    pub p: usize,
    pub dense: Complex64,
    pub torus: Complex64,
    pub relative_difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<CompareRow>,
    pub max_relative_difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// tr T^p, p = 1..=p_max, on both backends at every α.
pub fn compare_backends(cfg: &ExperimentConfig) -> Result<Comparison> {
    let r = cfg.resolve()?;
    if !r.symbol.is_constant() {
        return Err(Error::Config("backends-compare needs a constant symbol".into()));
    }
    if r.lambda.is_complement() {
        return Err(Error::Config("backends-compare needs a bounded lambda".into()));
    }
    let mut rows = Vec::new();
    for &alpha in &r.alphas {
        let (_, dense_disc) = plan_with(cfg, &r, alpha, BackendChoice::Dense)?;
        let (_, torus_disc) = plan_with(cfg, &r, alpha, BackendChoice::Torus)?;
        let single = |disc: &Discretization| -> Result<Vec<Complex64>> {
            let op = match disc {
                Discretization::Dense => {
                    assemble_dense(&r.symbol, &r.lambda, &r.omega, alpha, &cfg.resolution)?
                }
                Discretization::Torus(g) => {
                    assemble_torus_with(&r.symbol, &r.lambda, &r.omega, alpha, g, cfg.quantization)?
                }
            };
            Ok(trace_powers(&op.matrix, cfg.p_max))
        };
        let d = single(&dense_disc)?;
        let t = single(&torus_disc)?;
        for p in 1..=cfg.p_max {
            let (a, b) = (d[p - 1], t[p - 1]);
            rows.push(CompareRow {
                alpha,
                p,
                dense: a,
                torus: b,
                relative_difference: (a - b).norm() / a.norm().max(f64::MIN_POSITIVE),
            });
        }
    }
    let max = rows.iter().map(|r| r.relative_difference).fold(0.0, f64::max);
    Ok(Comparison {
        rows,
        max_relative_difference: max,
        tolerance: cfg.verdict.compare_tolerance,
        pass: max <= cfg.verdict.compare_tolerance,
    })
}
