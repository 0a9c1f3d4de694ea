//! Command-line front end. Exit codes: 0 pass, 1 verdict failure,
//! 2 config or guard error (including usage errors).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::config::{ExperimentConfig, Format, Mode, PRESETS};
use super::report::emit;
use super::run::{compare_backends, run, validate};
use crate::error::Error;

/// Environment variable setting the worker thread count.
pub const THREADS_ENV: &str = "WIDOMLAB_THREADS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "widomlab", version, about = "Trace asymptotics of truncated Wiener-Hopf operators")]
struct Cli {
    /// Worker threads (overrides WIDOMLAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment and write its reports.
    Run {
        /// Config file or preset name.
        config: PathBuf,
        /// Output directory (defaults to the config's, then widomlab-out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated formats: csv, json, plotdata.
        #[arg(long, value_delimiter = ',', value_parser = parse_format)]
        format: Option<Vec<Format>>,
        /// Override the verdict tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Print predicted coefficients without assembling operators.
    Coeffs {
        config: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check resolutions, guards and memory for every alpha.
    Validate { config: PathBuf },
    /// Compare tr T^p between the dense and torus backends.
    BackendsCompare {
        config: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List bundled presets.
    Presets,
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s.trim() {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        "plotdata" => Ok(Format::Plotdata),
        other => Err(format!("unknown format `{other}` (csv, json, plotdata)")),
    }
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()));
    if let Some(n) = n.filter(|n| *n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_ERROR
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, i32> {
    ExperimentConfig::load(path).map_err(|e| fail(&e))
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
        }
    };
    init_threads(cli.threads);
    match cli.command {
        Command::Run {
            config,
            out,
            format,
            tolerance,
        } => {
            let mut cfg = match load(&config) {
                Ok(c) => c,
                Err(code) => return code,
            };
            if let Some(t) = tolerance {
                cfg.verdict.tolerance = t;
            }
            let report = match run(&cfg) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            let dir = out
                .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("widomlab-out").join(&cfg.name));
            let formats = format.unwrap_or_else(|| cfg.output.formats.clone());
            match emit(&report, &formats, &dir) {
                Ok(files) => {
                    for f in files {
                        println!("wrote {}", f.display());
                    }
                }
                Err(e) => return fail(&e),
            }
            for v in &report.verdicts {
                println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
            }
            println!("config hash {}", report.config_hash);
            if let Some(r) = report.records.iter().find(|r| r.is_guard_failure()) {
                eprintln!("error: alpha = {}: {}", r.alpha, r.error.as_deref().unwrap_or(""));
                EXIT_ERROR
            } else if report.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Command::Coeffs { config, json } => {
            let mut cfg = match load(&config) {
                Ok(c) => c,
                Err(code) => return code,
            };
            cfg.mode = Mode::CoeffOnly;
            let report = match run(&cfg) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            if json {
                match serde_json::to_string_pretty(&report) {
                    Ok(s) => println!("{s}"),
                    Err(e) => return fail(&e.into()),
                }
            } else {
                let c = &report.coefficients;
                match c.w0_geometric {
                    Some(w) => println!("W0(1) = {w:.15e}"),
                    None => println!("W0(1) = (unbounded lambda)"),
                }
                println!("W1(1) = {:.15e}", c.w1_geometric);
                for curve in &report.curves {
                    if let Some(p) = &curve.prediction {
                        let w0 = p.w0.map_or("-".to_string(), |w| format!("{:.15e}{:+.3e}i", w.re, w.im));
                        println!("{}: W0 = {w0}, W1 = {:.15e}{:+.3e}i", curve.curve, p.w1.re, p.w1.im);
                    }
                }
            }
            if report.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Command::Validate { config } => {
            let cfg = match load(&config) {
                Ok(c) => c,
                Err(code) => return code,
            };
            match validate(&cfg) {
                Ok(plans) => {
                    println!("config {} ok, hash {}", cfg.name, cfg.hash());
                    for p in plans {
                        println!(
                            "alpha {:>10}  {:<14} N {:>6}  h {:.4e}  dof {:>7}  ~{:.1} MB",
                            p.alpha, p.backend, p.resolution.n, p.resolution.h, p.n_dof, p.memory_mb
                        );
                    }
                    EXIT_PASS
                }
                Err(e) => fail(&e),
            }
        }
        Command::BackendsCompare { config, json } => {
            let cfg = match load(&config) {
                Ok(c) => c,
                Err(code) => return code,
            };
            let cmp = match compare_backends(&cfg) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            if json {
                match serde_json::to_string_pretty(&cmp) {
                    Ok(s) => println!("{s}"),
                    Err(e) => return fail(&e.into()),
                }
            } else {
                for r in &cmp.rows {
                    println!(
                        "alpha {:>8} p {}  dense {:.10e}  torus {:.10e}  rel {:.3e}",
                        r.alpha, r.p, r.dense.re, r.torus.re, r.relative_difference
                    );
                }
                println!(
                    "{} max relative difference {:.3e} (tolerance {:.1e})",
                    if cmp.pass { "PASS" } else { "FAIL" },
                    cmp.max_relative_difference,
                    cmp.tolerance
                );
            }
            if cmp.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Command::Presets => {
            for (name, _) in PRESETS {
                println!("{name}");
            }
            EXIT_PASS
        }
    }
}
