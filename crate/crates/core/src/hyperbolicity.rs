//! Propagation speeds and hyperbolicity of the moment systems.
//!
//! Eigenvalues take the form λ = u_m + c√(gh) where the shifted speeds c only
//! depend on the scaled coefficients s̄ = s/√(gh). Scans therefore fix
//! h = 1, u_m = 0, g = 1 and vary s̄.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Model, PhysicalParams, State};

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedSpectrum {
    /// Sorted by (real part, imaginary part).
    pub eigenvalues: Vec<Complex64>,
    pub max_imag: f64,
    /// c = (λ − u_m)/√(gh) when the spectrum belongs to a model state.
    pub shifted_speeds: Option<Vec<Complex64>>,
}

impl SpeedSpectrum {
    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag <= tol
    }

    /// max |Re λ| + |Im λ| over all eigenvalues.
    pub fn spectral_speed(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.re.abs() + z.im.abs()).fold(0.0, f64::max)
    }
}

/// All eigenvalues of a real square matrix (dense Schur decomposition).
pub fn spectrum(a: &DMatrix<f64>) -> Result<SpeedSpectrum> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("spectrum of a non-square matrix".into()));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let mut eigenvalues: Vec<Complex64> = if a.nrows() == 0 {
        Vec::new()
    } else {
        a.complex_eigenvalues().iter().copied().collect()
    };
    eigenvalues.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let max_imag = eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(SpeedSpectrum { eigenvalues, max_imag, shifted_speeds: None })
}

/// Spectrum of the model's transport matrix at U, with shifted speeds.
pub fn state_spectrum(model: &Model, u: &State) -> Result<SpeedSpectrum> {
    let p = model.primitive(u)?;
    let mut sp = spectrum(&model.transport_matrix(u)?)?;
    let scale = (model.params().g * p.h).sqrt();
    sp.shifted_speeds = Some(sp.eigenvalues.iter().map(|z| (z - p.u_m) / scale).collect());
    Ok(sp)
}

/// Default tolerance 1e-9·max(1, √(gh)) on imaginary parts.
pub fn default_tolerance(g: f64, h: f64) -> f64 {
    1e-9 * (g * h).sqrt().max(1.0)
}

/// True iff every eigenvalue of the transport matrix has |Im λ| ≤ tol.
///
/// Only the spectrum is checked, not the existence of a full eigenbasis.
pub fn is_hyperbolic(model: &Model, u: &State, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    Ok(state_spectrum(model, u)?.is_real(tol))
}

/// Copy of the model with (g, ν, λ) = (1, 0, 1): the scan normalization.
fn unit_model(model: &Model) -> Result<Model> {
    Ok(Model::new(model.basis().clone(), PhysicalParams::new(1.0, 0.0, 1.0)?)?.with_regularization(model.is_regularized()))
}

/// Transport matrix at (h, u_m, s) = (1, 0, s̄) with g = 1.
fn scaled_matrix(unit: &Model, s_bar: &[f64]) -> Result<DMatrix<f64>> {
    unit.transport_matrix(&State::from_primitive(1.0, 0.0, s_bar))
}

/// Characteristic polynomial det(cI − A) of A_sys(1, 0, s̄), monic, highest power first.
pub fn shifted_char_poly(model: &Model, s_bar: &[f64]) -> Result<Vec<f64>> {
    let unit = unit_model(model)?;
    Ok(char_poly(&scaled_matrix(&unit, s_bar)?))
}

/// Faddeev-LeVerrier recursion; returns monic coefficients, highest power first.
pub fn char_poly(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    let mut mk = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        mk = a * &mk + DMatrix::identity(n, n) * coeffs[k - 1];
        coeffs[k] = -(a * &mk).trace() / k as f64;
    }
    coeffs
}

/// Affine 2-D slice s̄ = origin + a·dir1 + b·dir2 through coefficient space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slice {
    pub origin: Vec<f64>,
    pub dir1: Vec<f64>,
    pub dir2: Vec<f64>,
}

impl Slice {
    /// The (s̄₁, s̄₂) plane for N = 2.
    pub fn plane(n: usize) -> Self {
        let mut dir1 = vec![0.0; n];
        let mut dir2 = vec![0.0; n];
        dir1[0] = 1.0;
        if n > 1 {
            dir2[1] = 1.0;
        }
        Slice { origin: vec![0.0; n], dir1, dir2 }
    }

    pub fn point(&self, a: f64, b: f64) -> Vec<f64> {
        (0..self.origin.len()).map(|i| self.origin[i] + a * self.dir1[i] + b * self.dir2[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanAxes {
    pub range1: (f64, f64),
    pub range2: (f64, f64),
    pub resolution: (usize, usize),
}

impl ScanAxes {
    pub fn square(half_width: f64, resolution: usize) -> Self {
        ScanAxes {
            range1: (-half_width, half_width),
            range2: (-half_width, half_width),
            resolution: (resolution, resolution),
        }
    }

    fn coord(range: (f64, f64), res: usize, i: usize) -> f64 {
        if res == 1 {
            0.5 * (range.0 + range.1)
        } else {
            range.0 + (range.1 - range.0) * i as f64 / (res - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub a: f64,
    pub b: f64,
    pub s_bar: Vec<f64>,
    pub max_imag: f64,
    /// Within half a cell of the linear-profile line s̄ ∝ c.
    pub on_restriction_line: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityMap {
    pub axes: ScanAxes,
    pub slice: Slice,
    /// Row-major over (axis 1, axis 2).
    pub cells: Vec<ScanCell>,
}

impl HyperbolicityMap {
    pub fn hyperbolic_fraction(&self, tol: f64) -> f64 {
        self.cells.iter().filter(|c| c.max_imag <= tol).count() as f64 / self.cells.len() as f64
    }
}

/// Max |Im c| over a grid in the slice at h = 1, u_m = 0, g = 1.
pub fn scan_region(model: &Model, axes: &ScanAxes, slice: &Slice) -> Result<HyperbolicityMap> {
    let n = model.n_moments();
    let (r1, r2) = axes.resolution;
    if r1 == 0 || r2 == 0 {
        return Err(Error::InvalidArgument("scan resolution must be positive".into()));
    }
    if !(axes.range1.0 <= axes.range1.1 && axes.range2.0 <= axes.range2.1) {
        return Err(Error::InvalidArgument("scan range is empty".into()));
    }
    if slice.origin.len() != n || slice.dir1.len() != n || slice.dir2.len() != n {
        return Err(Error::InvalidArgument(format!("slice vectors must have length {n}")));
    }
    let unit = unit_model(model)?;
    let line = model.transform().linear_profile_f64();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let step = |range: (f64, f64), res: usize| if res > 1 { (range.1 - range.0) / (res - 1) as f64 } else { 0.0 };
    let half_cell = 0.5 * (step(axes.range1, r1) * norm(&slice.dir1)).max(step(axes.range2, r2) * norm(&slice.dir2));
    let cl = norm(&line);

    let cells = (0..r1 * r2)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / r2, idx % r2);
            let a = ScanAxes::coord(axes.range1, r1, i);
            let b = ScanAxes::coord(axes.range2, r2, j);
            let s_bar = slice.point(a, b);
            let max_imag = spectrum(&scaled_matrix(&unit, &s_bar)?)?.max_imag;
            let proj: f64 = s_bar.iter().zip(&line).map(|(x, c)| x * c).sum::<f64>() / (cl * cl);
            let dist = norm(&s_bar.iter().zip(&line).map(|(x, c)| x - proj * c).collect::<Vec<_>>());
            Ok(ScanCell { a, b, s_bar, max_imag, on_restriction_line: dist <= half_cell.max(1e-12) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HyperbolicityMap { axes: axes.clone(), slice: slice.clone(), cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSample {
    pub alpha1: f64,
    pub max_imag: f64,
}

/// Max |Im c| of the raw system matrix along s̄ = c·ᾱ₁ for ᾱ₁ in [lo, hi].
pub fn scan_restriction_line(model: &Model, lo: f64, hi: f64, samples: usize) -> Result<Vec<LineSample>> {
    if samples < 2 || !(lo < hi) {
        return Err(Error::InvalidArgument("restriction-line scan needs lo < hi and 2+ samples".into()));
    }
    let unit = unit_model(model)?.with_regularization(false);
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let alpha1 = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            let s_bar = model.linear_coefficients(alpha1);
            let max_imag = spectrum(&scaled_matrix(&unit, &s_bar)?)?.max_imag;
            Ok(LineSample { alpha1, max_imag })
        })
        .collect()
}
