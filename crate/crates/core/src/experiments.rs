//! The two test problems: a smooth wave with a linear velocity profile and a
//! fast wave with a steep piecewise-quadratic profile.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, Rational};
use crate::model::PhysicalParams;
use crate::spline_basis::{project_profile, uniform_grid, PiecewisePoly, Poly, Profile, SplineBasis};

/// h₀(x) = 1 + exp(3 cos(π(x + 1/2)) − 4).
pub fn initial_height(x: f64) -> f64 {
    1.0 + (3.0 * (std::f64::consts::PI * (x + 0.5)).cos() - 4.0).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Smooth,
    Fast,
}

impl Experiment {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "smooth" => Ok(Experiment::Smooth),
            "fast" => Ok(Experiment::Fast),
            other => Err(Error::InvalidArgument(format!("unknown experiment '{other}' (expected smooth or fast)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Smooth => "smooth",
            Experiment::Fast => "fast",
        }
    }

    /// g = 1, λ = 0.1; ν = 0.1 for the smooth wave and 0.0005 for the fast wave.
    pub fn params(self) -> PhysicalParams {
        let nu = match self {
            Experiment::Smooth => 0.1,
            Experiment::Fast => 0.0005,
        };
        PhysicalParams::new(1.0, nu, 0.1).expect("preset parameters are valid")
    }

    /// The initial vertical profile u(ζ), identical in every column.
    pub fn profile(self) -> PiecewisePoly {
        match self {
            Experiment::Smooth => smooth_profile(),
            Experiment::Fast => fast_profile(),
        }
    }

    /// Mean velocity and coefficients of the initial profile in a basis.
    ///
    /// The smooth profile is linear and is represented exactly by every basis
    /// that contains linear profiles; the fast profile is L²-projected.
    pub fn initial_coefficients(self, basis: &SplineBasis) -> Result<(f64, Vec<f64>)> {
        let d = project_profile(Profile::Piecewise(&self.profile()), basis)?;
        Ok((d.u_m, d.s))
    }
}

pub const SMOOTH_MEAN: f64 = 0.25;
pub const SMOOTH_ALPHA1: f64 = 0.25;

/// u(ζ) = 0.25 + 0.25(1 − 2ζ).
pub fn smooth_profile() -> PiecewisePoly {
    PiecewisePoly::from_global(uniform_grid(2).expect("two nodes"), &Poly::linear(rat(1, 2), rat(-1, 2)))
}

/// Piecewise quadratic on {0, 1/3, 2/3, 1} with mean 0.5, continuous with a
/// continuous derivative, steep near the bottom.
pub fn fast_profile() -> PiecewisePoly {
    let grid = uniform_grid(4).expect("four nodes");
    let scale = rat(15, 322048);
    let quad = |c2: i64, c1: i64, c0: i64| {
        Poly::new(vec![Rational::from_integer(c0.into()), Rational::from_integer(c1.into()), Rational::from_integer(c2.into())])
            .scale(&scale)
    };
    let half = Poly::constant(rat(1, 2));
    let global = [quad(-50298, 34314, -5215), quad(-1887, 2040, 164), quad(1569, -2568, 1700)];
    let pieces = global
        .iter()
        .zip(grid.nodes())
        .map(|(p, z0)| &p.shift(z0) + &half)
        .collect();
    PiecewisePoly::new(grid, 2, pieces).expect("quadratic pieces")
}
