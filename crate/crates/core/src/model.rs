//! Moment system for a given basis.
//!
//! The evolved variables are U = (h, h·u_m, h·s₁, …, h·s_N). After multiplying
//! the moment rows with M⁻¹ the system reads
//!
//! ∂ₜU + ∂ₓF(U) = Q(U)∂ₓU + P(U),
//!
//! with quasilinear matrix A_sys = ∂F/∂U − Q. The optional regularization
//! evaluates the transport part at the state whose profile is the linear
//! profile with the same first Legendre coefficient α₁.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, RatMatrix, Rational};
use crate::moment_tensors::{basis_transform, compute_tensors, BasisTransform, MomentTensors};
use crate::spline_basis::SplineBasis;

/// Bottom topography, given as the slope ∂ₓh_b per cell.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub enum Bottom {
    #[default]
    Flat,
    Slope(Vec<f64>),
}

impl Bottom {
    pub fn slope(&self, cell: usize) -> f64 {
        match self {
            Bottom::Flat => 0.0,
            Bottom::Slope(v) => v.get(cell).copied().unwrap_or(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Gravitational acceleration.
    pub g: f64,
    /// Kinematic viscosity ν.
    pub nu: f64,
    /// Slip length λ of the Navier bottom condition.
    pub slip_length: f64,
    #[serde(default)]
    pub bottom: Bottom,
}

impl PhysicalParams {
    pub fn new(g: f64, nu: f64, slip_length: f64) -> Result<Self> {
        let p = PhysicalParams { g, nu, slip_length, bottom: Bottom::Flat };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::InvalidArgument(format!("g must be positive, got {}", self.g)));
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(Error::InvalidArgument(format!("viscosity must be nonnegative, got {}", self.nu)));
        }
        if !(self.slip_length > 0.0 && self.slip_length.is_finite()) {
            return Err(Error::InvalidArgument(format!("slip length must be positive, got {}", self.slip_length)));
        }
        Ok(())
    }
}

/// Conservative state vector (h, h·u_m, h·s₁, …, h·s_N).
#[derive(Debug, Clone, PartialEq)]
pub struct State(pub DVector<f64>);

impl State {
    pub fn new(u: Vec<f64>) -> Self {
        State(DVector::from_vec(u))
    }

    pub fn from_primitive(h: f64, u_m: f64, s: &[f64]) -> Self {
        let mut v = Vec::with_capacity(s.len() + 2);
        v.push(h);
        v.push(h * u_m);
        v.extend(s.iter().map(|x| h * x));
        State::new(v)
    }

    pub fn h(&self) -> f64 {
        self.0[0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Primitive {
    pub h: f64,
    pub u_m: f64,
    pub s: Vec<f64>,
}

/// Source contributions, each already multiplied by blockdiag(1, 1, M)⁻¹.
///
/// The right-hand side is `topography − bottom_friction − interior_friction`.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceTerms {
    pub topography: DVector<f64>,
    pub bottom_friction: DVector<f64>,
    pub interior_friction: DVector<f64>,
}

impl SourceTerms {
    pub fn rhs(&self) -> DVector<f64> {
        &self.topography - &self.bottom_friction - &self.interior_friction
    }
}

/// Exact coefficient tables of the assembled system.
///
/// Three-index arrays are flattened as `(i·N + j)·N + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCoefficients {
    pub n: usize,
    /// (M⁻¹A)ᵢⱼₖ: moment flux row i is h(2u_m sᵢ + Σⱼₖ (M⁻¹A)ᵢⱼₖ sⱼ sₖ).
    pub m_inv_a: Vec<Rational>,
    /// (M⁻¹B)ᵢⱼₖ: Q entry (i, j) of the moment block is u_m δᵢⱼ − Σₖ (M⁻¹B)ᵢⱼₖ sₖ.
    pub m_inv_b: Vec<Rational>,
    /// Bottom friction weights M⁻¹V⁰.
    pub m_inv_v0: Vec<Rational>,
    /// Interior friction matrix M⁻¹C.
    pub m_inv_c: RatMatrix,
    pub m: RatMatrix,
    pub v0: Vec<Rational>,
}

impl ExactCoefficients {
    fn at(&self, v: &[Rational], i: usize, j: usize, k: usize) -> Rational {
        v[(i * self.n + j) * self.n + k].clone()
    }

    /// Coefficient of h sⱼsₖ (j ≤ k, monomial form) in moment flux row i.
    pub fn flux_monomial(&self, i: usize, j: usize, k: usize) -> Rational {
        let a = self.at(&self.m_inv_a, i, j, k);
        if j == k {
            a
        } else {
            a + self.at(&self.m_inv_a, i, k, j)
        }
    }

    /// Coefficient of h sⱼsₖ (j ≤ k) in the momentum flux.
    pub fn momentum_flux_monomial(&self, j: usize, k: usize) -> Rational {
        if j == k {
            self.m.get(j, j).clone()
        } else {
            self.m.get(j, k) + self.m.get(k, j)
        }
    }

    /// Coefficient of sₖ in Q entry (i, j) of the moment block.
    pub fn q_coeff(&self, i: usize, j: usize, k: usize) -> Rational {
        -self.at(&self.m_inv_b, i, j, k)
    }

    /// Coefficient of sⱼ in system-matrix entry (i, l) of the moment block.
    pub fn system_block_coeff(&self, i: usize, l: usize, j: usize) -> Rational {
        exact::int(2) * self.at(&self.m_inv_a, i, j, l) + self.at(&self.m_inv_b, i, l, j)
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    basis: SplineBasis,
    tensors: MomentTensors,
    params: PhysicalParams,
    transform: BasisTransform,
    regularized: bool,
    n: usize,
    ma: Vec<f64>,
    mb: Vec<f64>,
    minv_v0: DVector<f64>,
    // restriction s ↦ s̃ = c (alpha_row · s)
    restriction: DMatrix<f64>,
    linear_profile: DVector<f64>,
    alpha_row: DVector<f64>,
}

impl Model {
    pub fn new(basis: SplineBasis, params: PhysicalParams) -> Result<Self> {
        params.validate()?;
        let tensors = compute_tensors(&basis)?;
        let transform = basis_transform(&basis)?;
        if !transform.linear_exact {
            return Err(Error::ConstructionFailure(format!(
                "basis {} cannot represent a linear profile",
                basis.name()
            )));
        }
        if let Some(t) = &transform.t {
            // square case: the first row of T must be the linear-profile map
            if (0..basis.len()).any(|j| t.get(0, j) != &transform.linear_profile[j]) {
                return Err(Error::ConstructionFailure("inconsistent Legendre transformation".into()));
            }
        }
        let n = basis.len();
        // contract in exact arithmetic, round once
        let exact_coeffs = exact_coefficients(&tensors);
        let ma = exact_coeffs.m_inv_a.iter().map(exact::to_f64).collect::<Vec<_>>();
        let mb = exact_coeffs.m_inv_b.iter().map(exact::to_f64).collect::<Vec<_>>();
        let minv_v0 = DVector::from_iterator(n, exact_coeffs.m_inv_v0.iter().map(exact::to_f64));
        let linear_profile = DVector::from_vec(transform.linear_profile_f64());
        let alpha_row = DVector::from_vec(transform.alpha_row_f64());
        let restriction = &linear_profile * alpha_row.transpose();
        Ok(Model {
            basis,
            tensors,
            params,
            transform,
            regularized: false,
            n,
            ma,
            mb,
            minv_v0,
            restriction,
            linear_profile,
            alpha_row,
        })
    }

    /// Same model with the transport part regularized (or not).
    pub fn with_regularization(mut self, on: bool) -> Self {
        self.regularized = on;
        self
    }

    pub fn basis(&self) -> &SplineBasis {
        &self.basis
    }

    pub fn tensors(&self) -> &MomentTensors {
        &self.tensors
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn transform(&self) -> &BasisTransform {
        &self.transform
    }

    pub fn is_regularized(&self) -> bool {
        self.regularized
    }

    /// Number of moments N.
    pub fn n_moments(&self) -> usize {
        self.n
    }

    /// Length N + 2 of the state vector.
    pub fn n_vars(&self) -> usize {
        self.n + 2
    }

    pub fn exact_coefficients(&self) -> ExactCoefficients {
        exact_coefficients(&self.tensors)
    }

    fn check(&self, u: &State) -> Result<()> {
        if u.len() != self.n + 2 {
            return Err(Error::InvalidArgument(format!(
                "state has {} entries, model expects {}",
                u.len(),
                self.n + 2
            )));
        }
        let h = u.h();
        if !(h > 0.0) {
            return Err(Error::DryState(h));
        }
        Ok(())
    }

    pub fn primitive(&self, u: &State) -> Result<Primitive> {
        self.check(u)?;
        let h = u.h();
        Ok(Primitive { h, u_m: u.0[1] / h, s: u.0.iter().skip(2).map(|x| x / h).collect() })
    }

    fn ma(&self, i: usize, j: usize, k: usize) -> f64 {
        self.ma[(i * self.n + j) * self.n + k]
    }

    fn mb(&self, i: usize, j: usize, k: usize) -> f64 {
        self.mb[(i * self.n + j) * self.n + k]
    }

    fn quad_m(&self, s: &[f64]) -> (DVector<f64>, f64) {
        let sv = DVector::from_column_slice(s);
        let ms = self.tensors.m() * &sv;
        let q = sv.dot(&ms);
        (ms, q)
    }

    /// Flux with the moment rows multiplied by M⁻¹.
    pub fn flux(&self, u: &State) -> Result<DVector<f64>> {
        let p = self.primitive(u)?;
        let (h, um, s, n) = (p.h, p.u_m, &p.s, self.n);
        let (_, sms) = self.quad_m(s);
        let mut f = DVector::zeros(n + 2);
        f[0] = h * um;
        f[1] = 0.5 * self.params.g * h * h + h * um * um + h * sms;
        for i in 0..n {
            let mut acc = 2.0 * um * s[i];
            for j in 0..n {
                for k in 0..n {
                    acc += self.ma(i, j, k) * s[j] * s[k];
                }
            }
            f[i + 2] = h * acc;
        }
        Ok(f)
    }

    /// Flux as it appears before the mass-matrix inversion.
    pub fn raw_flux(&self, u: &State) -> Result<DVector<f64>> {
        let mut f = self.flux(u)?;
        let moments = self.tensors.m() * f.rows(2, self.n);
        f.rows_mut(2, self.n).copy_from(&moments);
        Ok(f)
    }

    /// Nonconservative matrix Q(U), moment rows multiplied by M⁻¹.
    pub fn nonconservative_matrix(&self, u: &State) -> Result<DMatrix<f64>> {
        let p = self.primitive(u)?;
        let n = self.n;
        let mut q = DMatrix::zeros(n + 2, n + 2);
        for i in 0..n {
            for j in 0..n {
                let mut v = if i == j { p.u_m } else { 0.0 };
                for k in 0..n {
                    v -= self.mb(i, j, k) * p.s[k];
                }
                q[(i + 2, j + 2)] = v;
            }
        }
        Ok(q)
    }

    /// Jacobian ∂F/∂U of [`Model::flux`].
    pub fn flux_jacobian(&self, u: &State) -> Result<DMatrix<f64>> {
        let p = self.primitive(u)?;
        let (h, um, s, n) = (p.h, p.u_m, &p.s, self.n);
        let (ms, sms) = self.quad_m(s);
        let mut j = DMatrix::zeros(n + 2, n + 2);
        j[(0, 1)] = 1.0;
        j[(1, 0)] = self.params.g * h - um * um - sms;
        j[(1, 1)] = 2.0 * um;
        for l in 0..n {
            j[(1, l + 2)] = 2.0 * ms[l];
        }
        for i in 0..n {
            let mut quad = 0.0;
            for a in 0..n {
                for b in 0..n {
                    quad += self.ma(i, a, b) * s[a] * s[b];
                }
            }
            j[(i + 2, 0)] = -2.0 * um * s[i] - quad;
            j[(i + 2, 1)] = 2.0 * s[i];
            for l in 0..n {
                let mut v = if i == l { 2.0 * um } else { 0.0 };
                for a in 0..n {
                    v += 2.0 * self.ma(i, a, l) * s[a];
                }
                j[(i + 2, l + 2)] = v;
            }
        }
        Ok(j)
    }

    /// A_sys = ∂F/∂U − Q; its eigenvalues are the propagation speeds.
    pub fn system_matrix(&self, u: &State) -> Result<DMatrix<f64>> {
        Ok(self.flux_jacobian(u)? - self.nonconservative_matrix(u)?)
    }

    /// Friction and topography with a flat bottom.
    pub fn friction_source(&self, u: &State) -> Result<SourceTerms> {
        self.source_terms(u, 0.0)
    }

    /// Source terms with bottom slope ∂ₓh_b.
    pub fn source_terms(&self, u: &State, bottom_slope: f64) -> Result<SourceTerms> {
        let p = self.primitive(u)?;
        let n = self.n;
        let (nu, lambda) = (self.params.nu, self.params.slip_length);
        let sv = DVector::from_column_slice(&p.s);
        let u_b = p.u_m + self.tensors.v0().dot(&sv);
        let mut topography = DVector::zeros(n + 2);
        topography[1] = self.params.g * p.h * bottom_slope;
        let mut bottom_friction = DVector::zeros(n + 2);
        bottom_friction[1] = nu / lambda * u_b;
        let mut interior_friction = DVector::zeros(n + 2);
        let cs = self.tensors.m_inv() * (self.tensors.c() * &sv);
        for i in 0..n {
            bottom_friction[i + 2] = nu / lambda * u_b * self.minv_v0[i];
            interior_friction[i + 2] = nu / p.h * cs[i];
        }
        Ok(SourceTerms { topography, bottom_friction, interior_friction })
    }

    /// Backward-Euler friction update over `dt` at fixed h.
    ///
    /// Friction is linear in q = (h·u_m, h·s), so blockdiag(1, M)·dq/dt = −K q
    /// with K symmetric positive semidefinite; (blockdiag(1, M) + dt·K) is SPD.
    pub fn relax_friction(&self, u: &State, dt: f64) -> Result<State> {
        self.check(u)?;
        let (nu, lambda) = (self.params.nu, self.params.slip_length);
        if nu == 0.0 || dt == 0.0 {
            return Ok(u.clone());
        }
        let n = self.n;
        let h = u.h();
        let mut v = DVector::zeros(n + 1);
        v[0] = 1.0;
        v.rows_mut(1, n).copy_from(self.tensors.v0());
        let mut mass = DMatrix::zeros(n + 1, n + 1);
        mass[(0, 0)] = 1.0;
        mass.view_mut((1, 1), (n, n)).copy_from(self.tensors.m());
        let mut k = (&v * v.transpose()) * (nu / (lambda * h));
        let cpart = self.tensors.c() * (nu / (h * h));
        let mut blk = k.view_mut((1, 1), (n, n));
        blk += cpart;
        let system = &mass + k * dt;
        let q = u.0.rows(1, n + 1).into_owned();
        let rhs = &mass * q;
        let sol = system
            .cholesky()
            .ok_or_else(|| Error::ConstructionFailure("friction system is not positive definite".into()))?
            .solve(&rhs);
        let mut out = u.0.clone();
        out.rows_mut(1, n + 1).copy_from(&sol);
        Ok(State(out))
    }

    /// First Legendre coefficient α₁ of the profile.
    pub fn alpha1(&self, s: &[f64]) -> f64 {
        self.alpha_row.iter().zip(s).map(|(a, b)| a * b).sum()
    }

    /// Same h and u_m; profile replaced by the linear profile with equal α₁.
    pub fn regularize_state(&self, u: &State) -> Result<State> {
        self.check(u)?;
        let mut out = u.0.clone();
        let hs = u.0.rows(2, self.n);
        let reg = &self.restriction * hs;
        out.rows_mut(2, self.n).copy_from(&reg);
        Ok(State(out))
    }

    /// Coefficients s̃ = c α₁ of the linear profile with first Legendre coefficient α₁.
    pub fn linear_coefficients(&self, alpha1: f64) -> Vec<f64> {
        self.linear_profile.iter().map(|c| c * alpha1).collect()
    }

    /// System matrix of the regularized model, A_sys(h, u_m, s̃).
    pub fn regularized_system_matrix(&self, u: &State) -> Result<DMatrix<f64>> {
        self.system_matrix(&self.regularize_state(u)?)
    }

    /// Flux used by the solver: F(Ũ) when regularized, F(U) otherwise.
    pub fn transport_flux(&self, u: &State) -> Result<DVector<f64>> {
        if self.regularized {
            self.flux(&self.regularize_state(u)?)
        } else {
            self.flux(u)
        }
    }

    /// Nonconservative matrix paired with [`Model::transport_flux`].
    ///
    /// For the regularized model it is Q(Ũ) − ∂F/∂U(Ũ)(I − ∂Ũ/∂U), so that the
    /// quasilinear matrix equals A_sys(Ũ) while mass and momentum rows stay
    /// conservative.
    pub fn transport_nonconservative(&self, u: &State) -> Result<DMatrix<f64>> {
        if !self.regularized {
            return self.nonconservative_matrix(u);
        }
        let ur = self.regularize_state(u)?;
        let n = self.n;
        let mut i_minus_jr = DMatrix::zeros(n + 2, n + 2);
        let mut blk = i_minus_jr.view_mut((2, 2), (n, n));
        blk.fill_with_identity();
        blk -= &self.restriction;
        Ok(self.nonconservative_matrix(&ur)? - self.flux_jacobian(&ur)? * i_minus_jr)
    }

    /// Quasilinear matrix used by the solver.
    pub fn transport_matrix(&self, u: &State) -> Result<DMatrix<f64>> {
        if self.regularized {
            self.regularized_system_matrix(u)
        } else {
            self.system_matrix(u)
        }
    }
}

fn exact_coefficients(t: &MomentTensors) -> ExactCoefficients {
    let e = t.exact();
    let n = t.len();
    let contract = |v: &[Rational]| {
        let mut out = vec![Rational::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = Rational::zero();
                    for l in 0..n {
                        acc += e.m_inv.get(i, l) * &v[(l * n + j) * n + k];
                    }
                    out[(i * n + j) * n + k] = acc;
                }
            }
        }
        out
    };
    ExactCoefficients {
        n,
        m_inv_a: contract(&e.a),
        m_inv_b: contract(&e.b),
        m_inv_v0: e.m_inv.mul_vec(&e.v0),
        m_inv_c: e.m_inv.mul(&e.c),
        m: e.m.clone(),
        v0: e.v0.clone(),
    }
}
