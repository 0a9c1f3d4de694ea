use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fft::FftNd;
use super::{
    hermitian_part, Backend, DiscreteOperator, GridInfo, Quantization, Resolution, MIN_PAD,
    MIN_PPW,
};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::symbols::{Factor, Symbol};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Periodic lattice of N^d nodes x = origin + h·i with dual frequencies
/// ξ_k = 2πk/(αL), k in the centered range, L = N h.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusGrid {
    pub dim: usize,
    pub n: usize,
    pub h: f64,
    pub origin: Point,
    pub alpha: f64,
}

impl TorusGrid {
    pub fn new(dim: usize, n: usize, h: f64, origin: Point, alpha: f64) -> Result<Self> {
        if !(1..=2).contains(&dim) || n < 2 || !(h > 0.0) || !(alpha > 0.0) {
            return Err(Error::Config(format!(
                "invalid torus grid: dim {dim}, n {n}, h {h}, alpha {alpha}"
            )));
        }
        Ok(TorusGrid {
            dim,
            n,
            h,
            origin,
            alpha,
        })
    }

    /// Plans a grid for T_α(a; Λ, Ω) from the resolution parameters.
    ///
    /// Bounded Λ: nodes sit at half-cell offsets from the lower corner of
    /// bbox(Λ) so box faces fall midway between nodes; the side covers
    /// `pad_factor · diam(Λ ∪ supp u)`. With `tune_lattice`, N is chosen in a
    /// short window above the minimum to make the lattice count of tr T_α(1)
    /// closest to α^d|Λ||Ω|/(2π)^d.
    ///
    /// Complement Λ: the torus is exactly its (square) bounding box, with N
    /// chosen so that the inner shape's bounding box is cell-aligned.
    pub fn plan(
        lambda: &Domain,
        omega: &Domain,
        alpha: f64,
        symbol: Option<&Symbol>,
        res: &Resolution,
    ) -> Result<Self> {
        let dim = lambda.dim();
        if omega.dim() != dim {
            return Err(Error::Config("Λ and Ω have different dimensions".into()));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be positive, got {alpha}")));
        }
        if res.ppw < MIN_PPW {
            return Err(Error::guard(
                "ppw",
                format!("ppw = {} is below {MIN_PPW}", res.ppw),
            ));
        }
        if res.pad_factor < MIN_PAD {
            return Err(Error::guard(
                "pad_factor",
                format!("pad_factor = {} is below {MIN_PAD}", res.pad_factor),
            ));
        }
        let r = effective_radius(omega, symbol);
        let h_max = 2.0 * PI / (res.ppw * alpha * r);

        if let Some(inner) = lambda.complement_inner() {
            let (blo, bhi) = lambda.bbox();
            let side = bhi[0] - blo[0];
            if dim == 2 && ((bhi[1] - blo[1]) - side).abs() > 1e-12 * side {
                return Err(Error::Unsupported(
                    "the torus of a complement domain must be a square bounding box".into(),
                ));
            }
            let n_min = (side / h_max).ceil() as usize;
            let n = match res.n_override {
                Some(n) => n,
                None => {
                    let (ilo, ihi) = inner.bbox();
                    let aligned = |n: usize| {
                        (0..dim).all(|j| {
                            [ilo[j], ihi[j]].iter().all(|&v| {
                                let c = (v - blo[j]) * n as f64 / side;
                                (c - c.round()).abs() < 1e-9
                            })
                        })
                    };
                    (n_min..=4 * n_min).find(|&n| aligned(n)).unwrap_or(n_min)
                }
            };
            let h = side / n as f64;
            return TorusGrid::new(dim, n, h, [blo[0] + 0.5 * h, blo[1] + 0.5 * h], alpha);
        }

        let (lo, hi) = lambda.bbox();
        let extent = (0..dim).map(|j| hi[j] - lo[j]).fold(0.0, f64::max);
        let h = extent / (extent / h_max).ceil();
        let (ulo, uhi) = padded_region(lambda, symbol);
        let diam = (0..dim).map(|j| (uhi[j] - ulo[j]).powi(2)).sum::<f64>().sqrt();
        let n_min = ((res.pad_factor * diam / h).ceil() as usize).max(2);

        // cell indices (relative to lo) spanned by the region, and its center
        let mut center = [0i64; 2];
        for j in 0..dim {
            let a = ((ulo[j] - lo[j]) / h).floor() as i64;
            let b = ((uhi[j] - lo[j]) / h).ceil() as i64;
            center[j] = (a + b).div_euclid(2);
        }
        let origin_for = |n: usize| {
            let mut o = [0.0; 2];
            for j in 0..dim {
                o[j] = lo[j] + 0.5 * h + (center[j] - (n / 2) as i64) as f64 * h;
            }
            o
        };

        let n = match res.n_override {
            Some(n) => n,
            None if res.tune_lattice => {
                let target = (alpha / (2.0 * PI)).powi(dim as i32) * lambda.volume() * omega.volume();
                let probe = TorusGrid::new(dim, n_min, h, origin_for(n_min), alpha)?;
                let n_lambda = probe.indices_in(lambda).len() as f64;
                let mut best = (f64::INFINITY, n_min);
                for n in n_min..=n_min + (n_min / 4).max(4) {
                    let g = TorusGrid::new(dim, n, h, origin_for(n), alpha)?;
                    let count = n_lambda * g.count_frequencies_in(omega) as f64
                        / (n as f64).powi(dim as i32);
                    let err = (count - target).abs();
                    if err < best.0 - 1e-12 * target {
                        best = (err, n);
                    }
                }
                best.1
            }
            None => n_min,
        };
        TorusGrid::new(dim, n, h, origin_for(n), alpha)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Side length L = N h.
    pub fn side(&self) -> f64 {
        self.n as f64 * self.h
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    /// Largest representable |ξ|_∞, πN/(αL).
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / (self.alpha * self.side())
    }

    /// Lower corner of the periodic cell.
    pub fn box_lo(&self) -> Point {
        [self.origin[0] - 0.5 * self.h, self.origin[1] - 0.5 * self.h]
    }

    fn split(&self, flat: usize) -> [usize; 2] {
        if self.dim == 1 {
            [flat, 0]
        } else {
            [flat % self.n, flat / self.n]
        }
    }

    pub fn node(&self, flat: usize) -> Point {
        let i = self.split(flat);
        let mut x = [0.0; 2];
        for j in 0..self.dim {
            x[j] = self.origin[j] + i[j] as f64 * self.h;
        }
        x
    }

    fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n - self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Frequency ξ_k of DFT coefficient `flat`.
    pub fn frequency(&self, flat: usize) -> Point {
        let i = self.split(flat);
        let s = 2.0 * PI / (self.alpha * self.side());
        let mut xi = [0.0; 2];
        for j in 0..self.dim {
            xi[j] = s * self.wavenumber(i[j]) as f64;
        }
        xi
    }

    /// Flat indices of the nodes lying in `domain`.
    pub fn indices_in(&self, domain: &Domain) -> Vec<usize> {
        (0..self.len()).filter(|&i| domain.contains(self.node(i))).collect()
    }

    /// #{k : ξ_k ∈ Ω}.
    pub fn count_frequencies_in(&self, omega: &Domain) -> usize {
        let s = 2.0 * PI / (self.alpha * self.side());
        let kmax = ((omega.sup_norm_radius() / s).ceil() as i64).min(self.n as i64 / 2);
        let lo = -(self.n as i64 / 2);
        let hi = (self.n - self.n / 2) as i64 - 1;
        let range = (-kmax).max(lo)..=kmax.min(hi);
        let mut count = 0;
        for k0 in range.clone() {
            if self.dim == 1 {
                count += omega.contains([s * k0 as f64, 0.0]) as usize;
            } else {
                for k1 in range.clone() {
                    count += omega.contains([s * k0 as f64, s * k1 as f64]) as usize;
                }
            }
        }
        count
    }

    /// Resolution guards for an operator with frequency cut-off Ω, symbol
    /// `symbol` and spatial truncation `lambda` (if any).
    pub fn check(&self, lambda: Option<&Domain>, omega: &Domain, symbol: &Symbol) -> Result<()> {
        if omega.dim() != self.dim || symbol.dim() != self.dim {
            return Err(Error::Config("grid, symbol and domain dimensions differ".into()));
        }
        let r_omega = omega.sup_norm_radius();
        if self.nyquist() <= r_omega {
            return Err(Error::guard(
                "nyquist",
                format!(
                    "πN/(αL) = {:.6} does not exceed sup|ξ| = {r_omega} over Ω",
                    self.nyquist()
                ),
            ));
        }
        let r = effective_radius(omega, Some(symbol));
        let needed = MIN_PPW * self.alpha * self.side() * r / (2.0 * PI);
        if (self.n as f64) < needed * (1.0 - 1e-12) {
            return Err(Error::guard(
                "ppw",
                format!(
                    "N = {} is below ppw·αL·R/(2π) = {needed:.1}; need N >= {}",
                    self.n,
                    needed.ceil()
                ),
            ));
        }
        let Some(lambda) = lambda else { return Ok(()) };
        if lambda.dim() != self.dim {
            return Err(Error::Config("grid and Λ dimensions differ".into()));
        }
        let blo = self.box_lo();
        let side = self.side();
        let tol = 1e-9 * side;
        let (llo, lhi) = lambda.bbox();
        if let Some(inner) = lambda.complement_inner() {
            for j in 0..self.dim {
                if (llo[j] - blo[j]).abs() > tol || (lhi[j] - blo[j] - side).abs() > tol {
                    return Err(Error::guard(
                        "complement_box",
                        "the torus cell must coincide with the bounding box of a complement domain",
                    ));
                }
            }
            if side < MIN_PAD * inner.diam() * (1.0 - 1e-12) {
                return Err(Error::guard(
                    "pad_factor",
                    format!("L = {side} is below {MIN_PAD}·diam of the excluded set"),
                ));
            }
            return Ok(());
        }
        let (ulo, uhi) = padded_region(lambda, Some(symbol));
        for j in 0..self.dim {
            if ulo[j] < blo[j] - tol || uhi[j] > blo[j] + side + tol {
                return Err(Error::guard(
                    "pad_factor",
                    "Λ or the spatial support of the symbol leaves the torus cell",
                ));
            }
        }
        let diam = (0..self.dim).map(|j| (uhi[j] - ulo[j]).powi(2)).sum::<f64>().sqrt();
        if side < MIN_PAD * diam * (1.0 - 1e-12) {
            return Err(Error::guard(
                "pad_factor",
                format!("L = {side:.4} is below {MIN_PAD}·diam(Λ ∪ supp) = {:.4}", MIN_PAD * diam),
            ));
        }
        Ok(())
    }
}

/// max(R_Ω, sup |ξ|_∞ over the frequency support of the symbol).
fn effective_radius(omega: &Domain, symbol: Option<&Symbol>) -> f64 {
    let mut r = omega.sup_norm_radius();
    if let Some((lo, hi)) = symbol.and_then(|s| s.frequency_support()) {
        for j in 0..omega.dim() {
            r = r.max(lo[j].abs()).max(hi[j].abs());
        }
    }
    r
}

/// Bounding box of Λ together with the spatial support of the symbol.
fn padded_region(lambda: &Domain, symbol: Option<&Symbol>) -> (Point, Point) {
    let (mut lo, mut hi) = lambda.bbox();
    if let Some((slo, shi)) = symbol.and_then(|s| s.spatial_support()) {
        for j in 0..lambda.dim() {
            lo[j] = lo[j].min(slo[j]);
            hi[j] = hi[j].max(shi[j]);
        }
    }
    (lo, hi)
}

#[derive(Clone, Debug)]
struct SampledTerm {
    coeff: Complex64,
    u: Option<Vec<f64>>,
    v: Option<Vec<f64>>,
}

/// Matrix-free P_{Ω,α}, Op_α(a) and their composition on a torus grid.
#[derive(Clone)]
pub struct TorusComposition {
    grid: TorusGrid,
    fft: FftNd,
    mask: Option<Vec<bool>>,
    terms: Vec<SampledTerm>,
    quantization: Quantization,
    constant: Option<Complex64>,
}

impl TorusComposition {
    /// `omega = None` leaves out the frequency projection.
    pub fn new(
        symbol: &Symbol,
        omega: Option<&Domain>,
        grid: &TorusGrid,
        quantization: Quantization,
    ) -> Self {
        let len = grid.len();
        let dim = grid.dim;
        let mask = omega.map(|om| (0..len).map(|k| om.contains(grid.frequency(k))).collect());
        let terms = symbol
            .terms()
            .iter()
            .map(|t| {
                let mut coeff = t.coeff;
                if let Factor::Constant(c) = t.spatial {
                    coeff *= c;
                }
                if let Factor::Constant(c) = t.frequency {
                    coeff *= c;
                }
                SampledTerm {
                    coeff,
                    u: (!t.spatial.is_constant())
                        .then(|| (0..len).map(|i| t.spatial.eval(grid.node(i), dim)).collect()),
                    v: (!t.frequency.is_constant()).then(|| {
                        (0..len).map(|k| t.frequency.eval(grid.frequency(k), dim)).collect()
                    }),
                }
            })
            .collect();
        TorusComposition {
            grid: grid.clone(),
            fft: FftNd::new(dim, grid.n),
            mask,
            terms,
            quantization,
            constant: symbol.constant_value(),
        }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    fn mask_in_place(&self, x: &mut [Complex64]) {
        if let Some(mask) = &self.mask {
            for (z, &keep) in x.iter_mut().zip(mask) {
                if !keep {
                    *z = ZERO;
                }
            }
        }
    }

    /// x ↦ P_{Ω,α} x (identity without Ω).
    pub fn apply_projection(&self, x: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        if self.mask.is_none() {
            return;
        }
        self.fft.forward(x, scratch);
        self.mask_in_place(x);
        self.fft.inverse(x, scratch);
    }

    /// x ↦ Op_α(a) x.
    pub fn apply_symbol(&self, x: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        if let Some(c) = self.constant {
            x.iter_mut().for_each(|z| *z *= c);
            return;
        }
        let len = x.len();
        if self.terms.iter().all(|t| t.v.is_none()) {
            // position multiplier
            for (i, z) in x.iter_mut().enumerate() {
                let w: Complex64 = self
                    .terms
                    .iter()
                    .map(|t| t.coeff * t.u.as_ref().map_or(1.0, |u| u[i]))
                    .sum();
                *z *= w;
            }
            return;
        }
        if self.terms.iter().all(|t| t.u.is_none()) {
            // Fourier multiplier
            self.fft.forward(x, scratch);
            for (k, z) in x.iter_mut().enumerate() {
                let w: Complex64 = self
                    .terms
                    .iter()
                    .map(|t| t.coeff * t.v.as_ref().map_or(1.0, |v| v[k]))
                    .sum();
                *z *= w;
            }
            self.fft.inverse(x, scratch);
            return;
        }
        let mut out = vec![ZERO; len];
        let mut work = vec![ZERO; len];
        match self.quantization {
            Quantization::Left => {
                let mut hat = x.to_vec();
                self.fft.forward(&mut hat, scratch);
                for t in &self.terms {
                    work.copy_from_slice(&hat);
                    if let Some(v) = &t.v {
                        work.iter_mut().zip(v).for_each(|(z, v)| *z *= v);
                    }
                    self.fft.inverse(&mut work, scratch);
                    match &t.u {
                        Some(u) => {
                            for ((o, w), u) in out.iter_mut().zip(&work).zip(u) {
                                *o += t.coeff * u * w;
                            }
                        }
                        None => {
                            for (o, w) in out.iter_mut().zip(&work) {
                                *o += t.coeff * w;
                            }
                        }
                    }
                }
            }
            Quantization::Right => {
                for t in &self.terms {
                    match &t.u {
                        Some(u) => {
                            for ((w, z), u) in work.iter_mut().zip(x.iter()).zip(u) {
                                *w = z * u;
                            }
                        }
                        None => work.copy_from_slice(x),
                    }
                    self.fft.forward(&mut work, scratch);
                    match &t.v {
                        Some(v) => {
                            for ((o, w), v) in out.iter_mut().zip(&work).zip(v) {
                                *o += t.coeff * v * w;
                            }
                        }
                        None => {
                            for (o, w) in out.iter_mut().zip(&work) {
                                *o += t.coeff * w;
                            }
                        }
                    }
                }
                self.fft.inverse(&mut out, scratch);
            }
        }
        x.copy_from_slice(&out);
    }

    /// x ↦ P Op_α(a) P x.
    pub fn apply(&self, x: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        if self.constant.is_some() {
            self.apply_projection(x, scratch);
            self.apply_symbol(x, scratch);
            return;
        }
        self.apply_projection(x, scratch);
        self.apply_symbol(x, scratch);
        self.apply_projection(x, scratch);
    }

    /// Matrix with entries (f(e_{cols[c]}))[rows[r]], columns computed in parallel.
    pub fn columns<F>(&self, cols: &[usize], rows: &[usize], f: F) -> DMatrix<Complex64>
    where
        F: Fn(&Self, &mut [Complex64], &mut Vec<Complex64>) + Sync,
    {
        let len = self.grid.len();
        let data: Vec<Vec<Complex64>> = cols
            .par_iter()
            .map_init(
                || (vec![ZERO; len], Vec::new()),
                |(x, scratch), &c| {
                    x.iter_mut().for_each(|z| *z = ZERO);
                    x[c] = Complex64::new(1.0, 0.0);
                    f(self, x, scratch);
                    rows.iter().map(|&r| x[r]).collect()
                },
            )
            .collect();
        DMatrix::from_fn(rows.len(), cols.len(), |r, c| data[c][r])
    }
}

/// Compression of χ_Λ P Op^l_α(a) P χ_Λ to the lattice nodes inside Λ.
pub fn assemble_torus(
    a: &Symbol,
    lambda: &Domain,
    omega: &Domain,
    alpha: f64,
    grid: &TorusGrid,
) -> Result<DiscreteOperator> {
    assemble_torus_with(a, lambda, omega, alpha, grid, Quantization::Left)
}

/// [`assemble_torus`] with an explicit quantization.
pub fn assemble_torus_with(
    a: &Symbol,
    lambda: &Domain,
    omega: &Domain,
    alpha: f64,
    grid: &TorusGrid,
    quantization: Quantization,
) -> Result<DiscreteOperator> {
    check_alpha(grid, alpha)?;
    grid.check(Some(lambda), omega, a)?;
    let dofs = grid.indices_in(lambda);
    build(a, omega, grid, dofs, quantization)
}

/// P Op^l_α(a) P on every lattice node (no spatial truncation).
pub fn assemble_fullspace(
    a: &Symbol,
    omega: &Domain,
    alpha: f64,
    grid: &TorusGrid,
) -> Result<DiscreteOperator> {
    check_alpha(grid, alpha)?;
    grid.check(None, omega, a)?;
    build(a, omega, grid, (0..grid.len()).collect(), Quantization::Left)
}

fn check_alpha(grid: &TorusGrid, alpha: f64) -> Result<()> {
    if (grid.alpha - alpha).abs() > 1e-12 * alpha {
        return Err(Error::Config(format!(
            "grid was planned for alpha = {}, not {alpha}",
            grid.alpha
        )));
    }
    Ok(())
}

fn build(
    a: &Symbol,
    omega: &Domain,
    grid: &TorusGrid,
    dofs: Vec<usize>,
    quantization: Quantization,
) -> Result<DiscreteOperator> {
    if omega.is_complement() {
        return Err(Error::Unsupported("unbounded frequency domain".into()));
    }
    let comp = TorusComposition::new(a, Some(omega), grid, quantization);
    let mut matrix = comp.columns(&dofs, &dofs, |c, x, s| c.apply(x, s));
    let self_adjoint = a.is_real() && (a.is_constant() || a.is_frequency_only() || a.is_position_only());
    if self_adjoint {
        matrix = hermitian_part(&matrix);
    }
    Ok(DiscreteOperator {
        matrix,
        alpha: grid.alpha,
        grid: GridInfo::Torus {
            grid: grid.clone(),
            dofs,
        },
        backend: Backend::TorusFft,
        hermitian: self_adjoint,
        unit_symbol: a.constant_value() == Some(Complex64::new(1.0, 0.0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eig(m: &DMatrix<Complex64>) -> Vec<f64> {
        nalgebra::SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect()
    }

    #[test]
    fn planned_grid_satisfies_guards() {
        let l = Domain::interval(0.0, 1.0).unwrap();
        let o = Domain::interval(-1.0, 1.0).unwrap();
        let g = TorusGrid::plan(&l, &o, 50.0, None, &Resolution::default()).unwrap();
        g.check(Some(&l), &o, &Symbol::one(1)).unwrap();
        assert!(g.side() >= 3.0);
        // box faces fall between nodes
        let idx = g.indices_in(&l);
        let first = g.node(idx[0])[0];
        assert!((first - 0.5 * g.h).abs() < 1e-12, "{first} {}", g.h);
    }

    #[test]
    fn unit_symbol_spectrum_in_unit_interval() {
        let l = Domain::rect([0.0, 0.0], [1.0, 1.0]).unwrap();
        let o = Domain::disk([0.0, 0.0], 1.0).unwrap();
        let g = TorusGrid::plan(&l, &o, 8.0, None, &Resolution::default()).unwrap();
        let op = assemble_torus(&Symbol::one(2), &l, &o, 8.0, &g).unwrap();
        assert!(op.hermitian);
        for ev in eig(&op.matrix) {
            assert!((-1e-12..=1.0 + 1e-12).contains(&ev), "{ev}");
        }
    }

    #[test]
    fn whole_cell_gives_frequency_count() {
        let o = Domain::interval(-1.0, 1.0).unwrap();
        let g = TorusGrid::new(1, 64, 0.05, [0.0, 0.0], 10.0).unwrap();
        let comp = TorusComposition::new(&Symbol::one(1), Some(&o), &g, Quantization::Left);
        let all: Vec<usize> = (0..g.len()).collect();
        let m = comp.columns(&all, &all, |c, x, s| c.apply(x, s));
        let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
        assert!((tr - g.count_frequencies_in(&o) as f64).abs() < 1e-10);
    }

    #[test]
    fn fullspace_is_idempotent_projection() {
        let l = Domain::interval(0.0, 1.0).unwrap();
        let o = Domain::interval(-1.0, 1.0).unwrap();
        let g = TorusGrid::plan(&l, &o, 20.0, None, &Resolution::default()).unwrap();
        let p = assemble_fullspace(&Symbol::one(1), &o, 20.0, &g).unwrap();
        let p2 = &p.matrix * &p.matrix;
        assert!((&p2 - &p.matrix).camax() < 1e-12);
        for ev in eig(&p.matrix) {
            assert!(ev.abs() < 1e-12 || (ev - 1.0).abs() < 1e-12);
        }
        // cyclicity with the diagonal χ_Λ
        let t = assemble_torus(&Symbol::one(1), &l, &o, 20.0, &g).unwrap();
        let GridInfo::Torus { dofs, .. } = &t.grid else { unreachable!() };
        let tr_full: f64 = dofs.iter().map(|&i| p.matrix[(i, i)].re).sum();
        let tr: f64 = t.matrix.diagonal().iter().map(|z| z.re).sum();
        assert!((tr - tr_full).abs() < 1e-12 * tr);
    }

    #[test]
    fn guards_reject_coarse_or_small_grids() {
        let l = Domain::interval(0.0, 1.0).unwrap();
        let o = Domain::interval(-1.0, 1.0).unwrap();
        let coarse = TorusGrid::new(1, 20, 0.2, [-1.0, 0.0], 50.0).unwrap();
        assert!(assemble_torus(&Symbol::one(1), &l, &o, 50.0, &coarse)
            .unwrap_err()
            .is_guard());
        let tight = TorusGrid::new(1, 200, 0.0075, [-0.2, 0.0], 50.0).unwrap();
        let err = assemble_torus(&Symbol::one(1), &l, &o, 50.0, &tight).unwrap_err();
        assert!(err.is_guard(), "{err}");
        let res = Resolution {
            ppw: 4.0,
            ..Resolution::default()
        };
        assert!(TorusGrid::plan(&l, &o, 50.0, None, &res).unwrap_err().is_guard());
    }

    #[test]
    fn constant_real_symbol_is_a_scaled_projection_compression() {
        let l = Domain::interval(0.0, 1.0).unwrap();
        let o = Domain::interval(-1.0, 1.0).unwrap();
        let g = TorusGrid::plan(&l, &o, 20.0, None, &Resolution::default()).unwrap();
        let one = assemble_torus(&Symbol::one(1), &l, &o, 20.0, &g).unwrap();
        let three = assemble_torus(&Symbol::constant(1, Complex64::new(3.0, 0.0)), &l, &o, 20.0, &g)
            .unwrap();
        assert!((&three.matrix - &one.matrix * Complex64::new(3.0, 0.0)).camax() < 1e-12);
        let sym = three.symmetrize();
        assert!((&sym.matrix - &three.matrix).camax() < 1e-12);
    }

    #[test]
    fn left_and_right_quantizations_are_adjoint_for_real_symbols() {
        // (P Op^l(a) P)* = P Op^r(ā) P
        let l = Domain::interval(0.0, 1.0).unwrap();
        let o = Domain::interval(-1.0, 1.0).unwrap();
        let a = Symbol::separable(
            1,
            Factor::Gaussian {
                center: [0.4, 0.0],
                width: 0.3,
            },
            Factor::Gaussian {
                center: [0.2, 0.0],
                width: 0.5,
            },
        );
        let g = TorusGrid::plan(&l, &o, 20.0, Some(&a), &Resolution::default()).unwrap();
        let left = assemble_torus_with(&a, &l, &o, 20.0, &g, Quantization::Left).unwrap();
        let right = assemble_torus_with(&a, &l, &o, 20.0, &g, Quantization::Right).unwrap();
        assert!(!left.hermitian);
        assert!((&left.matrix.adjoint() - &right.matrix).camax() < 1e-12);
        let s = left.symmetrize();
        assert!(s.hermitian_defect() < 1e-15);
        let tr: Complex64 = s.matrix.diagonal().iter().sum();
        assert_eq!(tr.im, 0.0);
    }

    #[test]
    fn complement_grid_is_the_bounding_box() {
        let inner = Domain::rect([0.0, 0.0], [1.0, 1.0]).unwrap();
        let l = Domain::complement(inner, [-2.0, -2.0], [3.0, 3.0]).unwrap();
        let o = Domain::disk([0.0, 0.0], 1.0).unwrap();
        let g = TorusGrid::plan(&l, &o, 8.0, None, &Resolution::default()).unwrap();
        assert!((g.side() - 5.0).abs() < 1e-12);
        assert_eq!((g.n * 2) % 5, 0, "inner box aligned: n = {}", g.n);
        g.check(Some(&l), &o, &Symbol::one(2)).unwrap();
        let rect = Domain::complement(
            Domain::rect([0.0, 0.0], [1.0, 1.0]).unwrap(),
            [-2.0, -2.0],
            [3.0, 4.0],
        )
        .unwrap();
        assert!(TorusGrid::plan(&rect, &o, 8.0, None, &Resolution::default()).is_err());
    }
}
