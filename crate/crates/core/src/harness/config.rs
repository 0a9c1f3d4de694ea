//! Declarative experiment configuration (TOML).

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::operators::{Quantization, Resolution};
use crate::symbols::{Factor, Symbol, Term, TestFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    TraceSweep,
    RegularizedDiff,
    CommutatorDiag,
    CoeffOnly,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendChoice {
    #[default]
    Dense,
    Torus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Interval {
        lo: f64,
        hi: f64,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Complement {
        inner: Box<DomainSpec>,
        bbox_lo: Vec<f64>,
        bbox_hi: Vec<f64>,
    },
}

fn point(v: &[f64], dim: usize, what: &str) -> Result<Point> {
    if v.len() != dim {
        return Err(Error::Config(format!(
            "{what} has {} coordinates, expected {dim}",
            v.len()
        )));
    }
    let mut p = [0.0; 2];
    p[..dim].copy_from_slice(v);
    Ok(p)
}

impl DomainSpec {
    pub fn build(&self, dim: usize) -> Result<Domain> {
        let d = match self {
            DomainSpec::Interval { lo, hi } => {
                if dim != 1 {
                    return Err(Error::Config("interval domains need dimension 1".into()));
                }
                Domain::interval(*lo, *hi)?
            }
            DomainSpec::Box { lo, hi } => {
                let (lo, hi) = (point(lo, dim, "box lo")?, point(hi, dim, "box hi")?);
                if dim == 1 {
                    Domain::interval(lo[0], hi[0])?
                } else {
                    Domain::rect(lo, hi)?
                }
            }
            DomainSpec::Ball { center, radius } => {
                if dim != 2 {
                    return Err(Error::Config("ball domains need dimension 2".into()));
                }
                Domain::disk(point(center, 2, "ball center")?, *radius)?
            }
            DomainSpec::Polygon { vertices } => {
                if dim != 2 {
                    return Err(Error::Config("polygon domains need dimension 2".into()));
                }
                Domain::polygon(vertices.clone())?
            }
            DomainSpec::Complement {
                inner,
                bbox_lo,
                bbox_hi,
            } => Domain::complement(
                inner.build(dim)?,
                point(bbox_lo, dim, "bbox_lo")?,
                point(bbox_hi, dim, "bbox_hi")?,
            )?,
        };
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FactorSpec {
    Constant {
        value: f64,
    },
    Gaussian {
        center: Vec<f64>,
        width: f64,
    },
    CosineWindow {
        center: Vec<f64>,
        half_width: f64,
    },
    PolyBump {
        center: Vec<f64>,
        width: f64,
        powers: Vec<u32>,
    },
}

impl FactorSpec {
    fn build(&self, dim: usize) -> Result<Factor> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Config(format!("{what} must be positive, got {v}")))
            }
        };
        Ok(match self {
            FactorSpec::Constant { value } => Factor::Constant(*value),
            FactorSpec::Gaussian { center, width } => Factor::Gaussian {
                center: point(center, dim, "factor center")?,
                width: positive(*width, "width")?,
            },
            FactorSpec::CosineWindow { center, half_width } => Factor::CosineWindow {
                center: point(center, dim, "factor center")?,
                half_width: positive(*half_width, "half_width")?,
            },
            FactorSpec::PolyBump {
                center,
                width,
                powers,
            } => {
                let mut p = [0u32; 2];
                if powers.len() != dim {
                    return Err(Error::Config("poly_bump powers must have one entry per axis".into()));
                }
                p[..dim].copy_from_slice(powers);
                Factor::PolyBump {
                    center: point(center, dim, "factor center")?,
                    width: positive(*width, "width")?,
                    powers: p,
                }
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default = "one_f64")]
    pub coeff: f64,
    #[serde(default)]
    pub coeff_imag: f64,
    pub spatial: FactorSpec,
    pub frequency: FactorSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    Constant {
        value: f64,
        #[serde(default)]
        imag: f64,
    },
    Separable {
        #[serde(default = "one_f64")]
        coeff: f64,
        #[serde(default)]
        coeff_imag: f64,
        spatial: FactorSpec,
        frequency: FactorSpec,
    },
    Sum {
        terms: Vec<TermSpec>,
    },
}

impl Default for SymbolSpec {
    fn default() -> Self {
        SymbolSpec::Constant {
            value: 1.0,
            imag: 0.0,
        }
    }
}

impl SymbolSpec {
    pub fn build(&self, dim: usize) -> Result<Symbol> {
        let term = |c: f64, ci: f64, s: &FactorSpec, f: &FactorSpec| -> Result<Term> {
            Ok(Term {
                coeff: Complex64::new(c, ci),
                spatial: s.build(dim)?,
                frequency: f.build(dim)?,
            })
        };
        match self {
            SymbolSpec::Constant { value, imag } => Ok(Symbol::constant(dim, Complex64::new(*value, *imag))),
            SymbolSpec::Separable {
                coeff,
                coeff_imag,
                spatial,
                frequency,
            } => Symbol::sum(dim, vec![term(*coeff, *coeff_imag, spatial, frequency)?]),
            SymbolSpec::Sum { terms } => Symbol::sum(
                dim,
                terms
                    .iter()
                    .map(|t| term(t.coeff, t.coeff_imag, &t.spatial, &t.frequency))
                    .collect::<Result<_>>()?,
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GSpec {
    /// Σ coeffs[k] t^{k+1}
    Poly { coeffs: Vec<f64> },
    Power { p: usize },
    Named { name: String },
}

impl GSpec {
    pub fn build(&self) -> Result<TestFunction> {
        match self {
            GSpec::Poly { coeffs } => {
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Config("poly coefficients must be finite and non-empty".into()));
                }
                Ok(TestFunction::polynomial(coeffs.clone()))
            }
            GSpec::Power { p } => {
                if *p == 0 {
                    return Err(Error::Config("power g needs p >= 1".into()));
                }
                Ok(TestFunction::power(*p))
            }
            GSpec::Named { name } => TestFunction::named(name),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    List(Vec<f64>),
    Geometric { start: f64, stop: f64, count: usize },
}

impl AlphaSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            AlphaSpec::List(v) => v.clone(),
            AlphaSpec::Geometric { start, stop, count } => {
                if *count < 2 || !(*start > 0.0) || !(stop > start) {
                    return Err(Error::Config("geometric alphas need 0 < start < stop and count >= 2".into()));
                }
                let r = (stop / start).powf(1.0 / (*count - 1) as f64);
                (0..*count).map(|k| start * r.powi(k as i32)).collect()
            }
        };
        if v.is_empty() || v.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::Config("alphas must be positive and finite".into()));
        }
        if v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("alphas must be strictly increasing".into()));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub level: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { level: 4 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    pub window: Option<[f64; 2]>,
    /// Fit the α^d coefficient instead of using the predicted W0.
    pub fit_w0: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerdictConfig {
    /// Relative tolerance between fitted and predicted log coefficients.
    pub tolerance: f64,
    /// Relative tolerance for backends-compare.
    pub compare_tolerance: f64,
    /// Largest admissible max/min ratio of commutator norms / α^{d−1}.
    pub max_ratio_spread: f64,
    /// Largest admissible spectrum excursion outside [0, 1] for torus a ≡ 1 operators.
    pub spectrum_tolerance: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            tolerance: 0.05,
            compare_tolerance: 0.01,
            max_ratio_spread: 2.0,
            spectrum_tolerance: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Plotdata,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<String>,
    pub formats: Vec<Format>,
    /// Write every assembled matrix as a WHOP dump into the scratch directory.
    pub dump_matrices: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: None,
            formats: vec![Format::Csv, Format::Json, Format::Plotdata],
            dump_matrices: false,
        }
    }
}

fn one_f64() -> f64 {
    1.0
}
fn default_p_max() -> usize {
    2
}
fn default_budget() -> f64 {
    4096.0
}
fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub dimension: usize,
    pub mode: Mode,
    #[serde(default)]
    pub backend: BackendChoice,
    pub lambda: DomainSpec,
    pub omega: DomainSpec,
    #[serde(default)]
    pub symbol: SymbolSpec,
    /// Test function; when absent the sweep covers g_p for p = 1..=p_max.
    #[serde(default)]
    pub g: Option<GSpec>,
    #[serde(default = "default_p_max")]
    pub p_max: usize,
    pub alphas: AlphaSpec,
    #[serde(default)]
    pub resolution: Resolution,
    /// Overrides `resolution` for the torus backend.
    #[serde(default)]
    pub torus_resolution: Option<Resolution>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub fit: FitConfig,
    #[serde(default)]
    pub verdict: VerdictConfig,
    #[serde(default)]
    pub symmetrized: bool,
    #[serde(default)]
    pub quantization: Quantization,
    /// Check the spectrum of torus a ≡ 1 operators.
    #[serde(default = "default_true")]
    pub check_spectrum: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub memory_budget_mb: f64,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Bundled preset configurations, by name.
pub const PRESETS: &[(&str, &str)] = &[
    ("landau_widom_1d", include_str!("../../configs/landau_widom_1d.toml")),
    ("squares_2d_p2", include_str!("../../configs/squares_2d_p2.toml")),
    ("disks_2d_p2", include_str!("../../configs/disks_2d_p2.toml")),
    (
        "complement_box_regularized",
        include_str!("../../configs/complement_box_regularized.toml"),
    ),
    ("commutator_growth", include_str!("../../configs/commutator_growth.toml")),
];

/// Everything derived from a config that the runner needs.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub lambda: Domain,
    pub omega: Domain,
    pub symbol: Symbol,
    pub g: Option<TestFunction>,
    pub alphas: Vec<f64>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.resolve()?;
        Ok(cfg)
    }

    /// Reads a config file, or a bundled preset when `path` names one.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            if let Some((_, text)) = PRESETS.iter().find(|(n, _)| Path::new(n) == path) {
                return Self::from_toml(text);
            }
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn preset(name: &str) -> Result<Self> {
        PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::Config(format!("unknown preset `{name}`")))
            .and_then(|(_, t)| Self::from_toml(t))
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let dim = self.dimension;
        if !(1..=2).contains(&dim) {
            return Err(Error::Config(format!("dimension must be 1 or 2, got {dim}")));
        }
        if self.p_max == 0 {
            return Err(Error::Config("p_max must be at least 1".into()));
        }
        if self.quadrature.level == 0 {
            return Err(Error::Config("quadrature level must be at least 1".into()));
        }
        let alphas = self.alphas.values()?;
        let fit_mode = matches!(self.mode, Mode::TraceSweep | Mode::RegularizedDiff);
        if fit_mode && alphas.len() < 3 {
            return Err(Error::Config("fit modes need at least 3 alphas".into()));
        }
        let lambda = self.lambda.build(dim)?;
        let omega = self.omega.build(dim)?;
        if omega.is_complement() {
            return Err(Error::Config("omega must be bounded".into()));
        }
        if lambda.is_complement() && self.mode == Mode::TraceSweep {
            return Err(Error::Config(
                "an unbounded lambda needs mode = \"regularized_diff\"".into(),
            ));
        }
        let symbol = self.symbol.build(dim)?;
        let g = self.g.as_ref().map(GSpec::build).transpose()?;
        if self.mode == Mode::RegularizedDiff && g.as_ref().is_some_and(|g| !g.is_polynomial()) {
            return Err(Error::Config("regularized_diff needs a polynomial g".into()));
        }
        Ok(Resolved {
            lambda,
            omega,
            symbol,
            g,
            alphas,
        })
    }

    pub fn torus_resolution(&self) -> &Resolution {
        self.torus_resolution.as_ref().unwrap_or(&self.resolution)
    }

    /// SHA-256 of the canonical serialization, excluding output settings.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = OutputConfig::default();
        let canonical = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
