//! Vertically resolved solver for the mapped shallow-flow system
//!
//! ∂ₜh + ∂ₓ(h u_m) = 0,
//! ∂ₜ(hu) + ∂ₓ(hu² + g h²/2) + ∂_ζ(h u ω − (ν/h) ∂_ζ u) = 0,
//!
//! with u_ζ(1) = 0, u_ζ(0) = (h/λ) u(0) and a flat bottom. The velocity is
//! stored at N_ζ equispaced levels. Each level owns the dual cell of its
//! trapezoid weight, so vertical advection and diffusion are written in flux
//! form and the depth-averaged momentum balance is discretely exact.
//!
//! The vertical velocity and the pressure never appear: under hydrostatic
//! pressure they are eliminated, and the stress enters only through ν ∂_ζ u.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::{initial_height, Experiment};
use crate::fv_solver::{MomentFields, SimConfig};
use crate::model::PhysicalParams;

pub const DEFAULT_NZETA: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceConfig {
    pub sim: SimConfig,
    pub nzeta: usize,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        ReferenceConfig { sim: SimConfig::default(), nzeta: DEFAULT_NZETA }
    }
}

impl ReferenceConfig {
    pub fn validate(&self) -> Result<()> {
        self.sim.validate()?;
        if self.nzeta < 3 {
            return Err(Error::InvalidArgument("at least 3 vertical levels are required".into()));
        }
        Ok(())
    }
}

/// h per cell and u per cell and level ζⱼ = j/(N_ζ − 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceField {
    pub time: f64,
    pub x_min: f64,
    pub dx: f64,
    pub h: Vec<f64>,
    pub u: Vec<Vec<f64>>,
}

impl ReferenceField {
    pub fn nx(&self) -> usize {
        self.h.len()
    }

    pub fn nzeta(&self) -> usize {
        self.u.first().map_or(0, Vec::len)
    }

    pub fn levels(&self) -> Vec<f64> {
        levels(self.nzeta())
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.nx()).map(|i| self.x_min + (i as f64 + 0.5) * self.dx).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.h.iter().sum::<f64>() * self.dx
    }

    /// Σ h u_m Δx with the trapezoidal depth average.
    pub fn total_momentum(&self) -> f64 {
        let w = trapezoid_weights(self.nzeta());
        self.h.iter().zip(&self.u).map(|(h, col)| h * dot(&w, col)).sum::<f64>() * self.dx
    }

    pub fn min_height(&self) -> f64 {
        self.h.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_height(&self) -> f64 {
        self.h.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn validate(&self) -> Result<()> {
        let nz = self.nzeta();
        if self.h.is_empty() || self.u.len() != self.h.len() || nz < 3 || self.u.iter().any(|c| c.len() != nz) {
            return Err(Error::InvalidArgument("reference field needs nx columns of at least 3 levels".into()));
        }
        for (i, (h, col)) in self.h.iter().zip(&self.u).enumerate() {
            if !(*h > 0.0) || !h.is_finite() || col.iter().any(|v| !v.is_finite()) {
                return Err(Error::Instability { time: self.time, cell: i });
            }
        }
        Ok(())
    }
}

pub fn levels(nzeta: usize) -> Vec<f64> {
    (0..nzeta).map(|j| j as f64 / (nzeta - 1) as f64).collect()
}

/// Composite trapezoid weights on equispaced levels; they sum to 1.
pub fn trapezoid_weights(nzeta: usize) -> Vec<f64> {
    let d = 1.0 / (nzeta - 1) as f64;
    (0..nzeta).map(|j| if j == 0 || j == nzeta - 1 { 0.5 * d } else { d }).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// h₀ at the cell centers and the experiment's profile sampled at the levels.
pub fn reference_initial_condition(config: &ReferenceConfig, experiment: Experiment) -> Result<ReferenceField> {
    config.validate()?;
    let profile = experiment.profile();
    let column = levels(config.nzeta).iter().map(|&z| profile.eval(z)).collect::<Result<Vec<_>>>()?;
    let sim = &config.sim;
    let h: Vec<f64> = sim.centers().iter().map(|&x| initial_height(x)).collect();
    Ok(ReferenceField { time: 0.0, x_min: sim.x_min, dx: sim.dx(), u: vec![column; h.len()], h })
}

/// Per-step data computed from the current field.
struct Fluxes {
    /// Per interface i+½ and level: mass flux h·u and momentum flux.
    mass: Vec<Vec<f64>>,
    momentum: Vec<Vec<f64>>,
    /// Per cell: vertical transport h·ω at the interior dual faces.
    vertical: Vec<Vec<f64>>,
}

fn fluxes(field: &ReferenceField, g: f64, w: &[f64]) -> Fluxes {
    let nx = field.nx();
    let speed: Vec<f64> = field
        .h
        .iter()
        .zip(&field.u)
        .map(|(h, col)| col.iter().map(|u| u.abs()).fold(0.0, f64::max) + (g * h).sqrt())
        .collect();
    let (mass, momentum): (Vec<Vec<f64>>, Vec<Vec<f64>>) = (0..nx)
        .into_par_iter()
        .map(|i| {
            let r = (i + 1) % nx;
            let (hl, hr) = (field.h[i], field.h[r]);
            let a = speed[i].max(speed[r]);
            let p = 0.5 * g * (hl * hl + hr * hr) * 0.5;
            field.u[i]
                .iter()
                .zip(&field.u[r])
                .map(|(&ul, &ur)| {
                    let fm = 0.5 * (hl * ul + hr * ur) - 0.5 * a * (hr - hl);
                    let fq = 0.5 * (hl * ul * ul + hr * ur * ur) + p - 0.5 * a * (hr * ur - hl * ul);
                    (fm, fq)
                })
                .unzip()
        })
        .unzip();
    // The dissipative part of the mass flux is level-independent and cancels in
    // ω, which therefore uses central differences of h·u.
    let vertical = (0..nx)
        .into_par_iter()
        .map(|i| {
            let l = (i + nx - 1) % nx;
            let d: Vec<f64> = (0..w.len()).map(|j| (mass[i][j] - mass[l][j]) / field.dx).collect();
            let d_mean = dot(w, &d);
            let mut acc = 0.0;
            (0..w.len() - 1)
                .map(|j| {
                    acc += w[j] * (d_mean - d[j]);
                    acc
                })
                .collect()
        })
        .collect();
    Fluxes { mass, momentum, vertical }
}

/// Largest stable step: horizontal Courant number 1 and no dual cell losing
/// more than its content through vertical advection.
fn stable_dt(field: &ReferenceField, fl: &Fluxes, g: f64, w: &[f64]) -> f64 {
    let a = field
        .h
        .iter()
        .zip(&field.u)
        .map(|(h, col)| col.iter().map(|u| u.abs()).fold(0.0, f64::max) + (g * h).sqrt())
        .fold(0.0, f64::max);
    let mut dt = field.dx / a;
    for (h, faces) in field.h.iter().zip(&fl.vertical) {
        for j in 0..w.len() {
            // Upwind outflow of level j: max(W_{j+½}, 0) + max(−W_{j−½}, 0).
            let up = faces.get(j).map_or(0.0, |f| f.max(0.0));
            let down = if j > 0 { (-faces[j - 1]).max(0.0) } else { 0.0 };
            let out = up + down;
            if out > 0.0 {
                dt = dt.min(h * w[j] / out);
            }
        }
    }
    dt
}

/// Solves the SPD tridiagonal system of the implicit vertical diffusion.
fn diffuse_column(u: &mut [f64], h: f64, dt: f64, params: &PhysicalParams, w: &[f64]) {
    let n = u.len();
    let dz = 1.0 / (n - 1) as f64;
    let k = dt * params.nu / (h * dz);
    let mut diag: Vec<f64> = (0..n).map(|j| h * w[j]).collect();
    let mut rhs: Vec<f64> = (0..n).map(|j| h * w[j] * u[j]).collect();
    for j in 0..n - 1 {
        diag[j] += k;
        diag[j + 1] += k;
    }
    // Navier slip at the bottom: the stress (ν/h) u_ζ(0) equals (ν/λ) u(0).
    diag[0] += dt * params.nu / params.slip_length;
    let off = -k;
    // Thomas algorithm with constant off-diagonal.
    for j in 1..n {
        let m = off / diag[j - 1];
        diag[j] -= m * off;
        rhs[j] -= m * rhs[j - 1];
    }
    u[n - 1] = rhs[n - 1] / diag[n - 1];
    for j in (0..n - 1).rev() {
        u[j] = (rhs[j] - off * u[j + 1]) / diag[j];
    }
}

/// One step: explicit Rusanov transport in x, upwind vertical advection, then
/// implicit vertical diffusion with the slip condition at the bottom.
pub fn reference_step(field: &ReferenceField, params: &PhysicalParams, dt: f64) -> Result<ReferenceField> {
    field.validate()?;
    params.validate()?;
    let w = trapezoid_weights(field.nzeta());
    let fl = fluxes(field, params.g, &w);
    let limit = stable_dt(field, &fl, params.g, &w);
    if !(dt >= 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, limit });
    }
    Ok(advance(field, params, dt, &fl, &w))
}

fn advance(field: &ReferenceField, params: &PhysicalParams, dt: f64, fl: &Fluxes, w: &[f64]) -> ReferenceField {
    let nx = field.nx();
    let nz = w.len();
    let ratio = dt / field.dx;
    let (h, u): (Vec<f64>, Vec<Vec<f64>>) = (0..nx)
        .into_par_iter()
        .map(|i| {
            let l = (i + nx - 1) % nx;
            let mass_flux = |c: usize| dot(w, &fl.mass[c]);
            let h_new = field.h[i] - ratio * (mass_flux(i) - mass_flux(l));
            let faces = &fl.vertical[i];
            let col = &field.u[i];
            // Upwind vertical momentum flux h·u·ω at face j+½.
            let vflux = |j: usize| {
                let f = faces[j];
                f * if f > 0.0 { col[j] } else { col[j + 1] }
            };
            let mut u_new: Vec<f64> = (0..nz)
                .map(|j| {
                    let top = if j + 1 < nz { vflux(j) } else { 0.0 };
                    let bottom = if j > 0 { vflux(j - 1) } else { 0.0 };
                    let hu = field.h[i] * col[j] - ratio * (fl.momentum[i][j] - fl.momentum[l][j]) - dt * (top - bottom) / w[j];
                    hu / h_new
                })
                .collect();
            if params.nu > 0.0 && h_new > 0.0 {
                diffuse_column(&mut u_new, h_new, dt, params, w);
            }
            (h_new, u_new)
        })
        .unzip();
    ReferenceField { time: field.time + dt, x_min: field.x_min, dx: field.dx, h, u }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTrajectory {
    pub snapshots: Vec<ReferenceField>,
    pub dts: Vec<f64>,
}

impl ReferenceTrajectory {
    pub fn last(&self) -> &ReferenceField {
        self.snapshots.last().expect("a trajectory holds the initial field")
    }
}

/// Adaptive stepping with dt = cfl·(stable step), snapshots as in the moment
/// solver: t = 0, the requested output times and t_end.
pub fn simulate_reference(config: &ReferenceConfig, params: &PhysicalParams, ic: ReferenceField) -> Result<ReferenceTrajectory> {
    config.validate()?;
    params.validate()?;
    ic.validate()?;
    if ic.nx() != config.sim.nx || ic.nzeta() != config.nzeta {
        return Err(Error::InvalidArgument("initial field does not match the configuration".into()));
    }
    let w = trapezoid_weights(config.nzeta);
    let mut times: Vec<f64> = config.sim.output_times.iter().copied().filter(|&t| t > 0.0 && t < config.sim.t_end).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    if config.sim.t_end > 0.0 {
        times.push(config.sim.t_end);
    }
    let mut field = ic;
    let mut snapshots = vec![field.clone()];
    let mut dts = Vec::new();
    for target in times {
        while field.time < target {
            let fl = fluxes(&field, params.g, &w);
            let mut dt = config.sim.cfl * stable_dt(&field, &fl, params.g, &w);
            let last = field.time + dt >= target;
            if last {
                dt = target - field.time;
            }
            field = advance(&field, params, dt, &fl, &w);
            if last {
                field.time = target;
            }
            field.validate()?;
            dts.push(dt);
        }
        snapshots.push(field.clone());
    }
    Ok(ReferenceTrajectory { snapshots, dts })
}

/// Trapezoidal projections u_m = ∫u, α₁ = 3∫u(1−2ζ), α₂ = 5∫u(6ζ²−6ζ+1).
///
/// The Legendre polynomials are shifted by their discrete means, so a constant
/// column has α₁ = α₂ = 0 exactly, as in the moment models.
pub fn moments_of_reference(field: &ReferenceField) -> MomentFields {
    let nz = field.nzeta();
    let w = trapezoid_weights(nz);
    let z = levels(nz);
    let projector = |scale: f64, p: &dyn Fn(f64) -> f64| {
        let vals: Vec<f64> = z.iter().map(|&z| p(z)).collect();
        let mean = dot(&w, &vals);
        vals.iter().zip(&w).map(|(v, w)| scale * w * (v - mean)).collect::<Vec<f64>>()
    };
    let p1 = projector(3.0, &|z| 1.0 - 2.0 * z);
    let p2 = projector(5.0, &|z| 6.0 * z * z - 6.0 * z + 1.0);
    MomentFields {
        x: field.centers(),
        h: field.h.clone(),
        u_m: field.u.iter().map(|c| dot(&w, c)).collect(),
        alpha1: field.u.iter().map(|c| dot(&p1, c)).collect(),
        alpha2: field.u.iter().map(|c| dot(&p2, c)).collect(),
    }
}
