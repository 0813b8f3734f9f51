//! Constrained spline bases on the vertical coordinate ζ ∈ [0, 1].
//!
//! Each basis function is a zero-mean combination of two consecutive B-splines,
//! φᵢ = bᵢ/∫bᵢ − bᵢ₊₁/∫bᵢ₊₁, so a velocity profile reads u = u_m + Σ sᵢφᵢ with
//! u_m its exact vertical mean. Everything is stored with rational coefficients.

mod bspline;
mod grid;
mod id;
mod legendre;
mod piecewise;
mod poly;
mod profile;

pub use bspline::{build_bspline_basis, build_bspline_basis_with, knot_vector, EndCondition};
pub use grid::{uniform_grid, Grid};
pub use id::BasisId;
pub use legendre::{legendre_norm, shifted_legendre};
pub use piecewise::PiecewisePoly;
pub use poly::Poly;
pub use profile::{project_profile, Profile, ProfileDecomposition};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, RatMatrix, Rational};

/// How a basis was constructed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisFamily {
    /// Constrained splines of degree `k` built from B-splines.
    Spline { k: usize, end: EndCondition },
    /// Global shifted Legendre polynomials Pᵢ(1 − 2ζ), i = 1..N.
    Legendre,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplineBasis {
    name: String,
    family: BasisFamily,
    grid: Grid,
    degree: usize,
    functions: Vec<PiecewisePoly>,
    mus: Vec<Rational>,
    gram: RatMatrix,
}

impl SplineBasis {
    /// Validate a set of ansatz functions: equal grid, zero mean, independent.
    pub fn from_functions(name: impl Into<String>, family: BasisFamily, functions: Vec<PiecewisePoly>) -> Result<Self> {
        let first = functions
            .first()
            .ok_or_else(|| Error::ConstructionFailure("basis has no functions".into()))?;
        let grid = first.grid().clone();
        let degree = functions.iter().map(PiecewisePoly::degree).max().unwrap_or(0);
        if functions.iter().any(|f| f.grid() != &grid) {
            return Err(Error::ConstructionFailure("basis functions live on different grids".into()));
        }
        if let Some(i) = functions.iter().position(|f| !f.integral().is_zero()) {
            return Err(Error::ConstructionFailure(format!("function {} does not have zero mean", i + 1)));
        }
        let n = functions.len();
        let mut gram = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = functions[i].inner(&functions[j]);
                gram.set(j, i, v.clone());
                gram.set(i, j, v);
            }
        }
        if !gram.is_positive_definite() {
            return Err(Error::ConstructionFailure("Gram matrix is singular: functions are linearly dependent".into()));
        }
        Ok(SplineBasis { name: name.into(), family, grid, degree, functions, mus: Vec::new(), gram })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &BasisFamily {
        &self.family
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Polynomial degree K of each piece.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of basis functions N.
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[PiecewisePoly] {
        &self.functions
    }

    /// φᵢ with zero-based index.
    pub fn function(&self, i: usize) -> &PiecewisePoly {
        &self.functions[i]
    }

    /// The μᵢ of φᵢ ∝ bᵢ + μᵢbᵢ₊₁ (empty for non-spline families).
    pub fn mus(&self) -> &[Rational] {
        &self.mus
    }

    /// Exact Gram matrix Mᵢⱼ = ⟨φᵢ, φⱼ⟩.
    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// True when N equals the degree and there is no interior breakpoint, so
    /// the basis spans the same space as the first N Legendre polynomials.
    pub fn is_square(&self) -> bool {
        self.grid.segments() == 1 && self.degree == self.len()
    }

    pub fn eval_all(&self, zeta: f64) -> Result<Vec<f64>> {
        self.functions.iter().map(|f| f.eval(zeta)).collect()
    }

    /// u_m + Σ sᵢφᵢ(ζ)
    pub fn reconstruct(&self, u_m: f64, s: &[f64], zeta: f64) -> Result<f64> {
        if s.len() != self.len() {
            return Err(Error::InvalidArgument(format!("{} coefficients for {} functions", s.len(), self.len())));
        }
        let mut u = u_m;
        for (f, si) in self.functions.iter().zip(s) {
            u += si * f.eval(zeta)?;
        }
        Ok(u)
    }

    /// The combination Σ cᵢφᵢ as a single piecewise polynomial.
    pub fn combine(&self, c: &[Rational]) -> PiecewisePoly {
        let mut acc = PiecewisePoly::zero(self.grid.clone());
        for (f, ci) in self.functions.iter().zip(c) {
            acc = acc.add(&f.scale(ci));
        }
        acc
    }

    pub fn export(&self) -> BasisExport {
        BasisExport {
            name: self.name.clone(),
            family: self.family.clone(),
            degree: self.degree,
            local_variable: "zeta - zeta_s".into(),
            grid: self.grid.nodes().iter().map(exact::format_rational).collect(),
            functions: self
                .functions
                .iter()
                .map(|f| {
                    f.pieces()
                        .iter()
                        .map(|p| (0..=self.degree).map(|k| exact::format_rational(&p.coeff(k))).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// Serializable form of a basis: grid nodes and per-segment coefficients as
/// `p/q` strings, lowest power first in the local variable ζ − ζ_s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisExport {
    pub name: String,
    pub family: BasisFamily,
    pub degree: usize,
    pub local_variable: String,
    pub grid: Vec<String>,
    pub functions: Vec<Vec<Vec<String>>>,
}

impl BasisExport {
    pub fn to_basis(&self) -> Result<SplineBasis> {
        let grid = Grid::new(self.grid.iter().map(|s| exact::parse_rational(s)).collect::<Result<_>>()?)?;
        let functions = self
            .functions
            .iter()
            .map(|segs| {
                let pieces = segs
                    .iter()
                    .map(|c| Ok(Poly::new(c.iter().map(|s| exact::parse_rational(s)).collect::<Result<_>>()?)))
                    .collect::<Result<Vec<_>>>()?;
                PiecewisePoly::new(grid.clone(), self.degree, pieces)
            })
            .collect::<Result<Vec<_>>>()?;
        SplineBasis::from_functions(self.name.clone(), self.family.clone(), functions)
    }
}

/// Constrained basis of N = M + K − 2 zero-mean splines with extended end knots.
pub fn build_constrained_basis(grid: &Grid, k: usize) -> Result<SplineBasis> {
    build_constrained_basis_with(grid, k, EndCondition::Extended)
}

pub fn build_constrained_basis_with(grid: &Grid, k: usize, end: EndCondition) -> Result<SplineBasis> {
    let b = build_bspline_basis_with(grid, k, end)?;
    let integrals: Vec<Rational> = b.iter().map(PiecewisePoly::integral).collect();
    let mut functions = Vec::with_capacity(b.len() - 1);
    let mut mus = Vec::with_capacity(b.len() - 1);
    for i in 0..b.len() - 1 {
        if integrals[i].is_zero() || integrals[i + 1].is_zero() {
            return Err(Error::ConstructionFailure(format!("B-spline {} has zero integral", i + 2)));
        }
        let mu = -&integrals[i] / &integrals[i + 1];
        // scale so that φᵢ = bᵢ/∫bᵢ − bᵢ₊₁/∫bᵢ₊₁
        let scale = Rational::one() / &integrals[i];
        functions.push(b[i].add(&b[i + 1].scale(&mu)).scale(&scale));
        mus.push(mu);
    }
    let n = functions.len();
    let name = match (k, grid.is_uniform(), end) {
        (1, true, EndCondition::Extended) => format!("L{n}"),
        (2, true, EndCondition::Extended) => format!("Q{n}"),
        (3, true, EndCondition::Extended) => format!("C{n}"),
        _ => "custom".to_string(),
    };
    let mut basis = SplineBasis::from_functions(name, BasisFamily::Spline { k, end }, functions)?;
    basis.degree = k;
    basis.mus = mus;
    Ok(basis)
}

/// The first `n` shifted Legendre polynomials Pᵢ(1 − 2ζ), i = 1..n, as a basis.
pub fn legendre_basis(n: usize) -> Result<SplineBasis> {
    if n < 1 {
        return Err(Error::InvalidArgument("Legendre basis needs at least one function".into()));
    }
    let grid = uniform_grid(2)?;
    let functions = (1..=n).map(|i| PiecewisePoly::from_global(grid.clone(), &shifted_legendre(i))).collect();
    SplineBasis::from_functions(format!("Legendre{n}"), BasisFamily::Legendre, functions)
}
