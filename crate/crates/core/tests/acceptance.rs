//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use widomlab::asymptotics::{coeff_a, coeff_a_quadrature, coeff_w1, fit_log_coefficient, harmonic, predict};
use widomlab::geometry::{Domain, Point};
use widomlab::operators::{
    assemble_dense, assemble_torus, DiscreteOperator, Resolution, TorusGrid,
};
use widomlab::spectral::{
    commutator_growth, eigenvalues, regularized_trace_diff, trace_poly, trace_smooth_with,
};
use widomlab::symbols::{Factor, Symbol, TestFunction};
use widomlab::{Complex64, Result};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

/// Spectrum check applied to every torus a ≡ 1 operator built below.
#[derive(Default)]
struct SpectrumLog {
    checked: usize,
    worst: f64,
}

impl SpectrumLog {
    fn record(&mut self, op: &DiscreteOperator) -> Result<()> {
        let ev = eigenvalues(op)?;
        let lo = ev.first().copied().unwrap_or(0.0);
        let hi = ev.last().copied().unwrap_or(0.0);
        self.worst = self.worst.max(-lo).max(hi - 1.0);
        self.checked += 1;
        Ok(())
    }
}

fn one_dim() -> (Domain, Domain) {
    (
        Domain::interval(0.0, 1.0).unwrap(),
        Domain::interval(-1.0, 1.0).unwrap(),
    )
}

fn re_trace(op: &DiscreteOperator) -> f64 {
    op.matrix.diagonal().iter().map(|z| z.re).sum()
}

fn a_closed_form() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for p in 1..=8 {
        let g = TestFunction::power(p);
        for s in [1.0, 0.5, -1.0] {
            let s = Complex64::new(s, 0.0);
            let q = coeff_a_quadrature(&g, s)?;
            let exact = -s.powi(p as i32) * harmonic(p - 1) / (4.0 * PI * PI);
            worst = worst.max((q - exact).norm());
            worst = worst.max((coeff_a(&g, s)? - exact).norm());
        }
    }
    outcome(worst < 1e-10, format!("max |A_quad - A_closed| = {worst:.2e}"))
}

fn w1_oracles() -> Result<Outcome> {
    let one = |_: Point, _: Point| Ok(Complex64::new(1.0, 0.0));
    let sq = Domain::rect([0.0, 0.0], [1.0, 1.0])?;
    let disk = Domain::disk([0.0, 0.0], 1.0)?;
    let (l, o) = one_dim();
    let squares = coeff_w1(one, &sq.boundary_patches(), &sq.boundary_patches(), 4)?.re;
    let disks = coeff_w1(one, &disk.boundary_patches(), &disk.boundary_patches(), 4)?.re;
    let points = coeff_w1(one, &l.boundary_patches(), &o.boundary_patches(), 1)?.re;
    let pass = (squares - 4.0 / PI).abs() < 1e-6 && (disks - 4.0).abs() < 1e-6 && points == 4.0;
    outcome(
        pass,
        format!("squares {squares:.10} (4/pi), disks {disks:.10} (4), interval pair {points}"),
    )
}

fn landau_widom() -> Result<Outcome> {
    let (l, o) = one_dim();
    let a = Symbol::one(1);
    let g = TestFunction::polynomial(vec![1.0, -1.0]);
    let pred = predict(&g, &a, &l, &o, false, 4)?;
    let mut pts = Vec::new();
    for alpha in [200.0, 400.0, 800.0, 1600.0] {
        let op = assemble_dense(&a, &l, &o, alpha, &Resolution::default())?;
        let t = trace_poly(&op, 2);
        pts.push((alpha, (t[0] - t[1]).re));
    }
    let fit = fit_log_coefficient(&pts, Some(pred.w0.unwrap().re), 1, None)?;
    let target = 1.0 / (PI * PI);
    let rel = (fit.c_log - target).abs() / target;
    outcome(
        rel < 0.05,
        format!("c_log = {:.6} vs 1/pi^2 = {target:.6} (rel {rel:.2e})", fit.c_log),
    )
}

fn first_trace(spec: &mut SpectrumLog) -> Result<Outcome> {
    let (l, o) = one_dim();
    let a = Symbol::one(1);
    let alpha = 100.0;
    let exact = alpha / PI;
    let dense = re_trace(&assemble_dense(&a, &l, &o, alpha, &Resolution::default())?);
    let grid = TorusGrid::plan(&l, &o, alpha, None, &Resolution::default())?;
    let torus_op = assemble_torus(&a, &l, &o, alpha, &grid)?;
    spec.record(&torus_op)?;
    let torus = re_trace(&torus_op);
    let rd = (dense - exact).abs() / exact;
    let rt = (torus - exact).abs() / exact;
    outcome(
        rd < 1e-3 && rt < 2.0 / alpha,
        format!("dense rel err {rd:.2e} (< 1e-3), torus rel err {rt:.2e} (< {:.0e}, N = {})", 2.0 / alpha, grid.n),
    )
}

fn cross_backends(spec: &mut SpectrumLog) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    let cases: [(Domain, Domain, f64, Resolution); 2] = [
        {
            let (l, o) = one_dim();
            (
                l,
                o,
                50.0,
                Resolution {
                    ppw: 8.0,
                    pad_factor: 4.0,
                    ..Resolution::default()
                },
            )
        },
        (
            Domain::rect([0.0, 0.0], [1.0, 1.0])?,
            Domain::rect([-1.0, -1.0], [1.0, 1.0])?,
            16.0,
            Resolution {
                ppw: 12.0,
                pad_factor: 6.0,
                ..Resolution::default()
            },
        ),
    ];
    for (l, o, alpha, torus_res) in cases {
        let a = Symbol::one(l.dim());
        let dense = trace_poly(&assemble_dense(&a, &l, &o, alpha, &Resolution::default())?, 3);
        let grid = TorusGrid::plan(&l, &o, alpha, None, &torus_res)?;
        let op = assemble_torus(&a, &l, &o, alpha, &grid)?;
        spec.record(&op)?;
        let torus = trace_poly(&op, 3);
        let rel: Vec<f64> = dense
            .iter()
            .zip(&torus)
            .map(|(d, t)| (d - t).norm() / d.norm())
            .collect();
        worst = rel.iter().fold(worst, |m, r| m.max(*r));
        parts.push(format!(
            "d={} alpha={alpha}: {:.2e}/{:.2e}/{:.2e}",
            l.dim(),
            rel[0],
            rel[1],
            rel[2]
        ));
    }
    outcome(worst < 0.01, format!("{} (p = 1/2/3)", parts.join("; ")))
}

fn squares_2d() -> Result<Outcome> {
    let l = Domain::rect([0.0, 0.0], [1.0, 1.0])?;
    let o = Domain::rect([-0.5, -0.5], [0.5, 0.5])?;
    let a = Symbol::one(2);
    let g = TestFunction::power(2);
    let pred = predict(&g, &a, &l, &o, false, 4)?;
    let mut pts = Vec::new();
    let mut largest = 0;
    for alpha in [8.0, 12.0, 16.0, 24.0, 32.0, 48.0] {
        let op = assemble_dense(&a, &l, &o, alpha, &Resolution::default())?;
        largest = largest.max(op.dim());
        pts.push((alpha, trace_poly(&op, 2)[1].re));
    }
    let fit = fit_log_coefficient(&pts, Some(pred.w0.unwrap().re), 2, None)?;
    let target = -1.0 / PI.powi(3);
    let rel = (fit.c_log - target).abs() / target.abs();
    outcome(
        rel < 0.2 && (pred.w1.re - target).abs() < 1e-12,
        format!(
            "c_log = {:.6} vs -1/pi^3 = {target:.6} (rel {rel:.3}), largest matrix {largest}^2",
            fit.c_log
        ),
    )
}

fn regularized(spec: &mut SpectrumLog) -> Result<Outcome> {
    let inner = Domain::rect([0.0, 0.0], [1.0, 1.0])?;
    let l = Domain::complement(inner.clone(), [-2.0, -2.0], [3.0, 3.0])?;
    let o = Domain::disk([0.0, 0.0], 1.0)?;
    let a = Symbol::one(2);
    let pred = predict(&TestFunction::power(2), &a, &l, &o, false, 4)?;
    let mut zero_ok = true;
    let mut negative = true;
    let mut pts = Vec::new();
    let mut ratios = Vec::new();
    for alpha in [8.0, 12.0, 16.0, 24.0, 32.0] {
        let grid = TorusGrid::plan(&l, &o, alpha, None, &Resolution::default())?;
        zero_ok &= regularized_trace_diff(&a, &l, &o, alpha, 1, &grid)? == Complex64::new(0.0, 0.0);
        let v = regularized_trace_diff(&a, &l, &o, alpha, 2, &grid)?.re;
        negative &= v < 0.0;
        ratios.push(v / (alpha * alpha.ln()));
        pts.push((alpha, v));
        if alpha == 8.0 {
            spec.record(&assemble_torus(&a, &inner, &o, alpha, &grid)?)?;
        }
    }
    let fit = fit_log_coefficient(&pts, Some(0.0), 2, None)?;
    let rel = (fit.c_log - pred.w1.re).abs() / pred.w1.re.abs();
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    outcome(
        zero_ok && negative && rel < 0.3,
        format!(
            "p=1 zero: {zero_ok}; p=2 negative: {negative}; c_log = {:.5} vs W1 = {:.5} (rel {rel:.3}); value/(a log a) = [{}]",
            fit.c_log,
            pred.w1.re,
            ratio_text.join(", ")
        ),
    )
}

fn commutators() -> Result<Outcome> {
    let (l, o) = one_dim();
    let bump = |c: f64, w: f64| Factor::Gaussian {
        center: [c, 0.0],
        width: w,
    };
    let res = Resolution::default();
    let alphas = [10.0, 20.0, 40.0];
    let b = Symbol::separable(1, bump(0.0, 0.2), bump(0.0, 0.5));
    let rows = commutator_growth(&b, &l, &o, &alphas, &res)?;
    let ratios: Vec<f64> = rows.iter().map(|r| r.lambda_ratio).collect();
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max) / ratios.iter().cloned().fold(f64::MAX, f64::min);
    let pure_x = Symbol::separable(1, bump(0.0, 0.2), Factor::Constant(1.0));
    let pure_xi = Symbol::separable(1, Factor::Constant(1.0), bump(0.0, 0.5));
    let zx = commutator_growth(&pure_x, &l, &o, &alphas, &res)?
        .iter()
        .map(|r| r.lambda_norm)
        .fold(0.0, f64::max);
    let zxi = commutator_growth(&pure_xi, &l, &o, &alphas, &res)?
        .iter()
        .map(|r| r.omega_norm)
        .fold(0.0, f64::max);
    let text: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    outcome(
        spread < 2.0 && zx < 1e-12 && zxi < 1e-12,
        format!(
            "ratios [{}] spread {spread:.3}; pure-x {zx:.1e}, pure-xi {zxi:.1e}",
            text.join(", ")
        ),
    )
}

fn smooth_path(spec: &mut SpectrumLog) -> Result<Outcome> {
    let (l, o) = one_dim();
    let a = Symbol::one(1);
    let alpha = 200.0;
    let g = TestFunction::named("t_minus_t2")?;
    let grid = TorusGrid::plan(&l, &o, alpha, None, &Resolution::default())?;
    let torus = assemble_torus(&a, &l, &o, alpha, &grid)?;
    spec.record(&torus)?;
    let dense = assemble_dense(&a, &l, &o, alpha, &Resolution::default())?;
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    // the torus operator uses the default clamp; Nystrom eigenvalues may leave
    // [0, 1] by ~1e-8, so the dense operator is compared unclamped
    for (name, op, clamp) in [("torus", &torus, true), ("dense", &dense, false)] {
        let smooth = trace_smooth_with(op, &g, clamp)?;
        let t = trace_poly(op, 2);
        let poly = (t[0] - t[1]).re;
        let rel = (smooth.value - poly).abs() / poly.abs();
        worst = worst.max(rel);
        parts.push(format!("{name}: eigen {:.12} vs poly {poly:.12} (rel {rel:.1e})", smooth.value));
    }
    outcome(worst < 1e-9, parts.join("; "))
}

fn main() {
    let mut spec = SpectrumLog::default();
    let mut results: Vec<(usize, &str, Result<Outcome>, f64)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Result<Outcome>| {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        let line = match &r {
            Ok(o) => format!("{} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail),
            Err(e) => format!("FAIL error: {e}"),
        };
        println!("criterion {n:>2} [{name}] {line} ({secs:.1}s)");
        results.push((n, name, r, secs));
    };
    run(1, "A closed form", &mut a_closed_form);
    run(2, "W1 oracles", &mut w1_oracles);
    run(3, "Landau-Widom 1-D", &mut landau_widom);
    run(4, "first trace", &mut || first_trace(&mut spec));
    run(5, "backend equivalence", &mut || cross_backends(&mut spec));
    run(6, "2-D squares p=2", &mut squares_2d);
    run(8, "regularized difference", &mut || regularized(&mut spec));
    run(9, "commutator growth", &mut commutators);
    run(10, "smooth g path", &mut || smooth_path(&mut spec));
    let spec_pass = spec.checked > 0 && spec.worst <= 1e-12;
    println!(
        "criterion  7 [unit-symbol spectrum] {} {} torus operators, max excursion outside [0,1] = {:.1e}",
        if spec_pass { "PASS" } else { "FAIL" },
        spec.checked,
        spec.worst.max(0.0)
    );
    let failed: Vec<usize> = results
        .iter()
        .filter(|(_, _, r, _)| !matches!(r, Ok(o) if o.pass))
        .map(|(n, ..)| *n)
        .chain((!spec_pass).then_some(7))
        .collect();
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
