use nalgebra::{DMatrix, DVector};

use super::{Grid, PiecewisePoly, Poly, SplineBasis};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::quadrature::GaussLegendre;

/// A vertical velocity profile u(ζ) to be projected onto a basis.
pub enum Profile<'a> {
    /// Piecewise polynomial, projected in exact arithmetic.
    Piecewise(&'a PiecewisePoly),
    /// Samples joined by straight lines; `zeta` must start at 0 and end at 1.
    Tabulated { zeta: &'a [f64], values: &'a [f64] },
    /// Arbitrary function, projected with composite Gauss quadrature.
    Function(&'a dyn Fn(f64) -> f64),
}

/// u ≈ u_m + Σ sᵢφᵢ in the L² sense.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDecomposition {
    pub u_m: f64,
    pub s: Vec<f64>,
    pub residual_l2: f64,
}

const SUBINTERVALS: usize = 32;
const POINTS: usize = 12;

/// Least-squares fit in span{1, φ₁, …, φ_N}.
///
/// Because every φᵢ has zero mean, the constant part is the exact mean of u and
/// the coefficients solve M s = ⟨u, φ⟩.
pub fn project_profile(profile: Profile<'_>, basis: &SplineBasis) -> Result<ProfileDecomposition> {
    match profile {
        Profile::Piecewise(p) => project_exact(p, basis),
        Profile::Tabulated { zeta, values } => {
            if zeta.len() != values.len() || zeta.len() < 2 {
                return Err(Error::InvalidArgument("tabulated profile needs matching samples, at least two".into()));
            }
            let grid = Grid::from_f64(zeta)?;
            let vals = values.iter().map(|&v| exact::from_f64(v)).collect::<Result<Vec<_>>>()?;
            let pieces = (0..grid.segments())
                .map(|s| Poly::linear(vals[s].clone(), (&vals[s + 1] - &vals[s]) / grid.width(s)))
                .collect();
            project_exact(&PiecewisePoly::new(grid, 1, pieces)?, basis)
        }
        Profile::Function(f) => project_quadrature(f, basis),
    }
}

fn project_exact(p: &PiecewisePoly, basis: &SplineBasis) -> Result<ProfileDecomposition> {
    let inv = basis
        .gram()
        .inverse()
        .ok_or_else(|| Error::ConstructionFailure("singular Gram matrix".into()))?;
    let u_m = p.integral();
    let rhs: Vec<Rational> = basis.functions().iter().map(|f| f.inner(p)).collect();
    let s = inv.mul_vec(&rhs);
    let fit = basis.combine(&s).add(&PiecewisePoly::constant(basis.grid().clone(), u_m.clone()));
    let r = p.sub(&fit);
    let res2 = r.inner(&r);
    Ok(ProfileDecomposition {
        u_m: exact::to_f64(&u_m),
        s: s.iter().map(exact::to_f64).collect(),
        residual_l2: exact::to_f64(&res2).max(0.0).sqrt(),
    })
}

fn project_quadrature(f: &dyn Fn(f64) -> f64, basis: &SplineBasis) -> Result<ProfileDecomposition> {
    let n = basis.len();
    let gl = GaussLegendre::new(POINTS);
    let nodes = basis.grid().nodes_f64();
    let mut pts = Vec::new();
    for w in nodes.windows(2) {
        let h = (w[1] - w[0]) / SUBINTERVALS as f64;
        for k in 0..SUBINTERVALS {
            let a = w[0] + k as f64 * h;
            for (x, wt) in gl.mapped(a, a + h) {
                pts.push((x, wt, f(x), basis.eval_all(x)?));
            }
        }
    }
    if pts.iter().any(|p| !p.2.is_finite()) {
        return Err(Error::InvalidArgument("profile is not finite on [0, 1]".into()));
    }
    let u_m: f64 = pts.iter().map(|(_, w, u, _)| w * u).sum();
    let mut rhs = DVector::zeros(n);
    for (_, w, u, phi) in &pts {
        for i in 0..n {
            rhs[i] += w * u * phi[i];
        }
    }
    let gram: DMatrix<f64> = basis.gram().to_f64();
    let s = gram
        .cholesky()
        .ok_or_else(|| Error::ConstructionFailure("singular Gram matrix".into()))?
        .solve(&rhs);
    let res2: f64 = pts
        .iter()
        .map(|(_, w, u, phi)| {
            let fit: f64 = u_m + phi.iter().zip(s.iter()).map(|(p, c)| p * c).sum::<f64>();
            w * (u - fit).powi(2)
        })
        .sum();
    Ok(ProfileDecomposition { u_m, s: s.iter().copied().collect(), residual_l2: res2.max(0.0).sqrt() })
}
