//! Galerkin tensors of a basis and its relation to the Legendre basis.
//!
//! With φᵢ the ansatz functions on [0, 1]:
//!
//! * Mᵢⱼ = ∫ φᵢ φⱼ
//! * V⁰ᵢ = φᵢ(0)
//! * Cᵢⱼ = ∫ φᵢ' φⱼ'
//! * Aᵢⱼₖ = ∫ φᵢ φⱼ φₖ
//! * Bᵢⱼₖ = ∫ φᵢ' (∫₀^ζ φⱼ) φₖ
//!
//! All of them are computed in exact rational arithmetic; an independent
//! floating-point Gauss-Legendre route is kept for cross-checks.

use std::fmt::Write;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{self, RatMatrix, Rational};
use crate::quadrature::GaussLegendre;
use crate::spline_basis::{shifted_legendre, PiecewisePoly, SplineBasis};

/// Exact tensors. Three-index tensors are flattened as `(i·N + j)·N + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactTensors {
    pub m: RatMatrix,
    pub m_inv: RatMatrix,
    pub v0: Vec<Rational>,
    pub c: RatMatrix,
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentTensors {
    n: usize,
    exact: ExactTensors,
    m: DMatrix<f64>,
    m_inv: DMatrix<f64>,
    v0: DVector<f64>,
    c: DMatrix<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl MomentTensors {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn exact(&self) -> &ExactTensors {
        &self.exact
    }

    pub fn m(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn m_inv(&self) -> &DMatrix<f64> {
        &self.m_inv
    }

    pub fn v0(&self) -> &DVector<f64> {
        &self.v0
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn a(&self, i: usize, j: usize, k: usize) -> f64 {
        self.a[(i * self.n + j) * self.n + k]
    }

    pub fn b(&self, i: usize, j: usize, k: usize) -> f64 {
        self.b[(i * self.n + j) * self.n + k]
    }
}

/// Exact M, V⁰, C, A and B of a basis.
pub fn compute_tensors(basis: &SplineBasis) -> Result<MomentTensors> {
    let n = basis.len();
    let phi = basis.functions();
    let m = basis.gram().clone();
    let m_inv = m
        .inverse()
        .ok_or_else(|| Error::ConstructionFailure("singular Gram matrix".into()))?;
    let v0 = phi.iter().map(|f| f.eval_exact(&Rational::zero())).collect::<Result<Vec<_>>>()?;
    let dphi: Vec<PiecewisePoly> = phi.iter().map(PiecewisePoly::derivative).collect();
    let big_phi: Vec<PiecewisePoly> = phi.iter().map(PiecewisePoly::integral_function).collect();

    let mut c = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = dphi[i].inner(&dphi[j]);
            c.set(j, i, v.clone());
            c.set(i, j, v);
        }
    }

    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut a = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        for j in i..n {
            let pij = phi[i].mul(&phi[j]);
            for k in j..n {
                let v = pij.inner(&phi[k]);
                for (x, y, z) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                    a[idx(x, y, z)] = v.clone();
                }
            }
        }
    }

    let mut b = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        for k in 0..n {
            let dik = dphi[i].mul(&phi[k]);
            for j in 0..n {
                b[idx(i, j, k)] = dik.inner(&big_phi[j]);
            }
        }
    }

    let exact = ExactTensors { m, m_inv, v0, c, a, b };
    Ok(MomentTensors {
        n,
        m: exact.m.to_f64(),
        m_inv: exact.m_inv.to_f64(),
        v0: DVector::from_iterator(n, exact.v0.iter().map(exact::to_f64)),
        c: exact.c.to_f64(),
        a: exact.a.iter().map(exact::to_f64).collect(),
        b: exact.b.iter().map(exact::to_f64).collect(),
        exact,
    })
}

/// Floating-point tensors from the quadrature route.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureTensors {
    pub m: DMatrix<f64>,
    pub v0: DVector<f64>,
    pub c: DMatrix<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Points per segment that integrate all tensor integrands exactly: the
/// integrands have degree 3K, so ⌈(3K+1)/2⌉ Gauss points suffice.
pub fn required_points(basis: &SplineBasis) -> usize {
    (3 * basis.degree() + 1).div_ceil(2)
}

/// Tensors by piecewise Gauss-Legendre quadrature with `points` nodes per segment.
pub fn compute_tensors_quadrature(basis: &SplineBasis, points: usize) -> Result<QuadratureTensors> {
    if points < required_points(basis) {
        return Err(Error::InvalidArgument(format!(
            "{points} points per segment are not exact for degree {}",
            basis.degree()
        )));
    }
    let n = basis.len();
    let gl = GaussLegendre::new(points);
    let mut m = DMatrix::zeros(n, n);
    let mut c = DMatrix::zeros(n, n);
    let mut a = vec![0.0; n * n * n];
    let mut b = vec![0.0; n * n * n];
    let phi = basis.functions();
    for seg in basis.grid().nodes_f64().windows(2) {
        for (x, w) in gl.mapped(seg[0], seg[1]) {
            let v: Vec<f64> = phi.iter().map(|f| f.eval(x)).collect::<Result<_>>()?;
            let d: Vec<f64> = phi.iter().map(|f| f.eval_derivative(x)).collect::<Result<_>>()?;
            let big: Vec<f64> = phi.iter().map(|f| f.antiderivative(x)).collect::<Result<_>>()?;
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += w * v[i] * v[j];
                    c[(i, j)] += w * d[i] * d[j];
                    for k in 0..n {
                        a[(i * n + j) * n + k] += w * v[i] * v[j] * v[k];
                        b[(i * n + j) * n + k] += w * d[i] * big[j] * v[k];
                    }
                }
            }
        }
    }
    let v0 = DVector::from_iterator(n, phi.iter().map(|f| f.eval(0.0).expect("0 is in range")));
    Ok(QuadratureTensors { m, v0, c, a, b })
}

/// Cross-Gram matrix M^{LS}ᵢⱼ = ⟨Pᵢ(1−2ζ), φⱼ⟩ for i = 1..=rows.
pub fn legendre_crossgram(basis: &SplineBasis, rows: usize) -> RatMatrix {
    let leg: Vec<PiecewisePoly> = (1..=rows)
        .map(|i| PiecewisePoly::from_global(basis.grid().clone(), &shifted_legendre(i)))
        .collect();
    RatMatrix::from_fn(rows, basis.len(), |i, j| leg[i].inner(basis.function(j)))
}

/// Data linking a basis to the Legendre expansion u = u_m + Σ αᵢPᵢ(1−2ζ).
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTransform {
    /// N splines of degree N without interior nodes: same span as Legendre.
    pub valid_square: bool,
    /// T = M^{LS}(M^S)⁻¹ with φ^{Leg} = T φ^S (square case only).
    pub t: Option<RatMatrix>,
    /// α₁ = alpha_row · s, the best-fit linear Legendre coefficient.
    pub alpha_row: Vec<Rational>,
    /// α₂ = alpha2_row · s.
    pub alpha2_row: Vec<Rational>,
    /// Coefficients c with Σ cᵢφᵢ = 1 − 2ζ (the L² projection, exact for
    /// every basis that contains linear profiles).
    pub linear_profile: Vec<Rational>,
    /// Whether Σ cᵢφᵢ reproduces 1 − 2ζ exactly.
    pub linear_exact: bool,
}

impl BasisTransform {
    pub fn alpha_row_f64(&self) -> Vec<f64> {
        self.alpha_row.iter().map(exact::to_f64).collect()
    }

    pub fn alpha2_row_f64(&self) -> Vec<f64> {
        self.alpha2_row.iter().map(exact::to_f64).collect()
    }

    pub fn linear_profile_f64(&self) -> Vec<f64> {
        self.linear_profile.iter().map(exact::to_f64).collect()
    }

    pub fn t_f64(&self) -> Option<DMatrix<f64>> {
        self.t.as_ref().map(RatMatrix::to_f64)
    }

    /// α₁ of a coefficient vector.
    pub fn alpha1(&self, s: &[f64]) -> f64 {
        self.alpha_row.iter().zip(s).map(|(r, x)| exact::to_f64(r) * x).sum()
    }
}

pub fn basis_transform(basis: &SplineBasis) -> Result<BasisTransform> {
    let n = basis.len();
    let m_inv = basis
        .gram()
        .inverse()
        .ok_or_else(|| Error::ConstructionFailure("singular Gram matrix".into()))?;
    let rows = legendre_crossgram(basis, 2);
    let m1: Vec<Rational> = (0..n).map(|j| rows.get(0, j).clone()).collect();
    let alpha_row = m1.iter().map(|v| v * exact::int(3)).collect();
    let alpha2_row = (0..n).map(|j| rows.get(1, j) * exact::int(5)).collect();
    let linear_profile = m_inv.mul_vec(&m1);
    let target = PiecewisePoly::from_global(basis.grid().clone(), &shifted_legendre(1));
    let linear_exact = basis.combine(&linear_profile).sub(&target).pieces().iter().all(|p| p.is_zero());
    let valid_square = basis.is_square();
    let t = valid_square.then(|| legendre_crossgram(basis, n).mul(&m_inv));
    Ok(BasisTransform { valid_square, t, alpha_row, alpha2_row, linear_profile, linear_exact })
}

/// Flat text dump, one `name i j [k] value` line per entry with 1-based indices.
pub fn tensor_dump(t: &MomentTensors) -> String {
    let n = t.n;
    let e = &t.exact;
    let mut out = String::new();
    let mut line = |name: &str, ix: &[usize], v: &Rational| {
        let ix: Vec<String> = ix.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "{name} {} {}", ix.join(" "), exact::format_rational(v));
    };
    for i in 0..n {
        for j in 0..n {
            line("M", &[i, j], e.m.get(i, j));
        }
    }
    for i in 0..n {
        line("V0", &[i], &e.v0[i]);
    }
    for i in 0..n {
        for j in 0..n {
            line("C", &[i, j], e.c.get(i, j));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                line("A", &[i, j, k], &e.a[(i * n + j) * n + k]);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                line("B", &[i, j, k], &e.b[(i * n + j) * n + k]);
            }
        }
    }
    out
}
