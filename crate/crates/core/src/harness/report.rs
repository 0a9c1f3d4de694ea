//! CSV, JSON and plot-data emitters.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::Format;
use super::run::Report;
use crate::error::Result;

pub const CSV_HEADER: [&str; 10] = [
    "alpha",
    "p_or_g",
    "trace_re",
    "trace_im",
    "pred_w0_term",
    "pred_w1_term",
    "residual",
    "backend",
    "N_dof",
    "seconds",
];

fn opt(v: Option<f64>) -> String {
    v.filter(|x| x.is_finite()).map(|x| format!("{x:.17e}")).unwrap_or_default()
}

/// One row per record; failed α points keep their row with empty values.
pub fn write_csv(report: &Report, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in &report.records {
        w.write_record([
            format!("{}", r.alpha),
            r.curve.clone(),
            opt(r.trace.map(|t| t.re)),
            opt(r.trace.map(|t| t.im)),
            opt(r.pred_w0_term),
            opt(r.pred_w1_term),
            opt(r.residual),
            r.backend.clone(),
            r.n_dof.map(|n| n.to_string()).unwrap_or_default(),
            format!("{:.6}", r.seconds),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(report: &Report, path: &Path) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(report)?)?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<Report> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// Per-curve two-column `.dat` files of (α, (tr − α^d W0)/(α^{d−1} log α))
/// plus a gnuplot script overlaying the predicted W1.
pub fn write_plotdata(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    let d = report.config.dimension as i32;
    let mut files = Vec::new();
    let mut plots = Vec::new();
    for c in &report.curves {
        let mut text = String::from("# alpha normalized_remainder\n");
        for r in report.records.iter().filter(|r| r.curve == c.curve) {
            let Some(t) = r.trace else { continue };
            let norm = (t.re - r.pred_w0_term.unwrap_or(0.0)) / (r.alpha.powi(d - 1) * r.alpha.ln());
            if norm.is_finite() {
                writeln!(text, "{} {:.17e}", r.alpha, norm).expect("string write");
            }
        }
        let name = format!("{}_{}.dat", slug(&report.name), slug(&c.curve));
        let path = dir.join(&name);
        std::fs::write(&path, text)?;
        plots.push(format!("'{name}' using 1:2 with linespoints title '{}'", c.curve));
        if let Some(p) = &c.prediction {
            plots.push(format!("{:.17e} with lines dashtype 2 title '{} W1'", p.w1.re, c.curve));
        }
        files.push(path);
    }
    let script = format!(
        "set logscale x\nset xlabel 'alpha'\nset ylabel '(trace - alpha^d W0) / (alpha^(d-1) log alpha)'\nset key outside\nset terminal pngcairo size 900,600\nset output '{}.png'\nplot {}\n",
        slug(&report.name),
        if plots.is_empty() { "0 notitle".to_string() } else { plots.join(", \\\n     ") }
    );
    let gp = dir.join(format!("{}.gp", slug(&report.name)));
    std::fs::write(&gp, script)?;
    files.push(gp);
    Ok(files)
}

/// Writes every requested format into `dir`; returns the files written.
pub fn emit(report: &Report, formats: &[Format], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for f in formats {
        match f {
            Format::Csv => {
                let p = dir.join(format!("{}.csv", slug(&report.name)));
                write_csv(report, &p)?;
                out.push(p);
            }
            Format::Json => {
                let p = dir.join(format!("{}.json", slug(&report.name)));
                write_json(report, &p)?;
                out.push(p);
            }
            Format::Plotdata => out.extend(write_plotdata(report, dir)?),
        }
    }
    Ok(out)
}
