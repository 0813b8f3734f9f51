//! First-order finite-volume solver for ∂ₜU + ∂ₓF(U) = Q(U)∂ₓU + P(U) on a
//! periodic interval.
//!
//! Transport uses a Rusanov flux and a central discretization of the
//! nonconservative product with Q evaluated at the interface mean state.
//! Friction is linear in (h·u_m, h·s) and is integrated with backward Euler
//! after each transport step.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{initial_height, Experiment};
use crate::hyperbolicity::{default_tolerance, spectrum};
use crate::model::{Model, State};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_end: f64,
    pub cfl: f64,
    /// Extra snapshot times in (0, t_end); t = 0 and t_end are always recorded.
    pub output_times: Vec<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { x_min: -1.0, x_max: 1.0, nx: 200, t_end: 2.0, cfl: 0.5, output_times: Vec::new() }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) {
            return Err(Error::InvalidArgument("domain needs x_min < x_max".into()));
        }
        if self.nx < 4 {
            return Err(Error::InvalidArgument("at least 4 cells are required".into()));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidArgument(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidArgument("t_end must be finite and nonnegative".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        cell_centers(self.x_min, self.dx(), self.nx)
    }

    fn snapshot_times(&self) -> Vec<f64> {
        let mut times: Vec<f64> = self.output_times.iter().copied().filter(|&t| t > 0.0 && t < self.t_end).collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        if self.t_end > 0.0 {
            times.push(self.t_end);
        }
        times
    }
}

fn cell_centers(x_min: f64, dx: f64, nx: usize) -> Vec<f64> {
    (0..nx).map(|i| x_min + (i as f64 + 0.5) * dx).collect()
}

/// Cell averages U = (h, h·u_m, h·s₁, …, h·s_N) at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    pub time: f64,
    pub x_min: f64,
    pub dx: f64,
    pub cells: Vec<State>,
}

impl StateField {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn centers(&self) -> Vec<f64> {
        cell_centers(self.x_min, self.dx, self.cells.len())
    }

    /// Σ h Δx.
    pub fn total_mass(&self) -> f64 {
        self.cells.iter().map(|u| u.0[0]).sum::<f64>() * self.dx
    }

    /// Σ h u_m Δx.
    pub fn total_momentum(&self) -> f64 {
        self.cells.iter().map(|u| u.0[1]).sum::<f64>() * self.dx
    }

    pub fn min_height(&self) -> f64 {
        self.cells.iter().map(State::h).fold(f64::INFINITY, f64::min)
    }

    pub fn max_height(&self) -> f64 {
        self.cells.iter().map(State::h).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Conservative variable `var` in every cell.
    pub fn component(&self, var: usize) -> Vec<f64> {
        self.cells.iter().map(|u| u.0[var]).collect()
    }
}

/// h₀ at the cell centers with the same profile (u_m, s) in every column.
pub fn initial_condition(config: &SimConfig, model: &Model, experiment: Experiment) -> Result<StateField> {
    config.validate()?;
    let (u_m, s) = experiment.initial_coefficients(model.basis())?;
    let cells = config.centers().iter().map(|&x| State::from_primitive(initial_height(x), u_m, &s)).collect();
    Ok(StateField { time: 0.0, x_min: config.x_min, dx: config.dx(), cells })
}

/// Smooth wave: u_m = 0.25 with a linear profile of α₁ = 0.25.
pub fn initial_condition_smooth(config: &SimConfig, model: &Model) -> Result<StateField> {
    initial_condition(config, model, Experiment::Smooth)
}

/// Fast wave: the steep piecewise-quadratic profile projected onto the basis.
pub fn initial_condition_fast(config: &SimConfig, model: &Model) -> Result<StateField> {
    initial_condition(config, model, Experiment::Fast)
}

/// Max |Re λ| of the transport matrix, plus max |Im λ| when it exceeds the
/// hyperbolicity tolerance.
pub fn cell_speed(model: &Model, u: &State) -> Result<f64> {
    let sp = spectrum(&model.transport_matrix(u)?)?;
    let re = sp.eigenvalues.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let guard = if sp.max_imag > default_tolerance(model.params().g, u.h()) { sp.max_imag } else { 0.0 };
    Ok(re + guard)
}

fn cell_speeds(model: &Model, field: &StateField) -> Result<Vec<f64>> {
    field.cells.par_iter().map(|u| cell_speed(model, u)).collect()
}

pub fn max_speed(model: &Model, field: &StateField) -> Result<f64> {
    if field.is_empty() {
        return Err(Error::InvalidArgument("empty field".into()));
    }
    Ok(cell_speeds(model, field)?.into_iter().fold(0.0, f64::max))
}

fn mean(a: &State, b: &State) -> State {
    State((&a.0 + &b.0) * 0.5)
}

fn check_cells(field: &StateField) -> Result<()> {
    for (i, u) in field.cells.iter().enumerate() {
        if u.0.iter().any(|v| !v.is_finite()) || !(u.h() > 0.0) {
            return Err(Error::Instability { time: field.time, cell: i });
        }
    }
    Ok(())
}

/// One explicit transport step followed by the implicit friction update.
///
/// Fails with [`Error::CflViolation`] when dt exceeds Δx / max_speed, the
/// stability bound of the scheme (Courant number 1).
pub fn step(model: &Model, field: &StateField, dt: f64) -> Result<StateField> {
    let nx = field.len();
    if nx == 0 {
        return Err(Error::InvalidArgument("empty field".into()));
    }
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("invalid time step {dt}")));
    }
    let speeds = cell_speeds(model, field)?;
    let a_max = speeds.iter().copied().fold(0.0, f64::max);
    let limit = field.dx / a_max;
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, limit });
    }
    let fluxes: Vec<DVector<f64>> = field.cells.par_iter().map(|u| model.transport_flux(u)).collect::<Result<_>>()?;

    // Interface i sits between cell i and cell i+1 (periodic): numerical flux
    // and half of the nonconservative jump term.
    let interfaces: Vec<(DVector<f64>, DVector<f64>)> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let j = (i + 1) % nx;
            let (ul, ur) = (&field.cells[i], &field.cells[j]);
            let jump = &ur.0 - &ul.0;
            let a = speeds[i].max(speeds[j]);
            let flux = (&fluxes[i] + &fluxes[j]) * 0.5 - &jump * (0.5 * a);
            let ncp = model.transport_nonconservative(&mean(ul, ur))? * &jump * 0.5;
            Ok((flux, ncp))
        })
        .collect::<Result<_>>()?;

    let ratio = dt / field.dx;
    let time = field.time + dt;
    let cells: Vec<State> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let l = (i + nx - 1) % nx;
            let u = &field.cells[i];
            let mut next = &u.0 - (&interfaces[i].0 - &interfaces[l].0) * ratio + (&interfaces[i].1 + &interfaces[l].1) * ratio;
            let slope = model.params().bottom.slope(i);
            if slope != 0.0 {
                next += model.source_terms(u, slope)?.topography * dt;
            }
            if next.iter().any(|v| !v.is_finite()) || !(next[0] > 0.0) {
                return Err(Error::Instability { time, cell: i });
            }
            model.relax_friction(&State(next), dt)
        })
        .collect::<Result<_>>()?;
    let out = StateField { time, x_min: field.x_min, dx: field.dx, cells };
    check_cells(&out)?;
    Ok(out)
}

/// Snapshots at t = 0, the requested output times and t_end, plus every time
/// step taken.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<StateField>,
    pub dts: Vec<f64>,
}

impl Trajectory {
    pub fn last(&self) -> &StateField {
        self.snapshots.last().expect("a trajectory holds the initial field")
    }
}

/// Adaptive time stepping with dt = cfl·Δx / max_speed, shortened to hit
/// snapshot times exactly.
pub fn simulate(model: &Model, config: &SimConfig, ic: StateField) -> Result<Trajectory> {
    simulate_observed(model, config, ic, |_| {})
}

/// [`simulate`] with a callback invoked after every time step.
pub fn simulate_observed(
    model: &Model,
    config: &SimConfig,
    ic: StateField,
    mut observer: impl FnMut(&StateField),
) -> Result<Trajectory> {
    config.validate()?;
    if ic.len() != config.nx {
        return Err(Error::InvalidArgument(format!("initial field has {} cells, config expects {}", ic.len(), config.nx)));
    }
    check_cells(&ic)?;
    let mut field = ic;
    let mut snapshots = vec![field.clone()];
    let mut dts = Vec::new();
    for target in config.snapshot_times() {
        while field.time < target {
            let a = max_speed(model, &field)?;
            let mut dt = config.cfl * field.dx / a;
            let last = field.time + dt >= target;
            if last {
                dt = target - field.time;
            }
            field = step(model, &field, dt)?;
            if last {
                field.time = target;
            }
            dts.push(dt);
            observer(&field);
        }
        snapshots.push(field.clone());
    }
    Ok(Trajectory { snapshots, dts })
}

/// Advance with a prescribed sequence of time steps, e.g. those of another run.
pub fn replay(model: &Model, ic: StateField, dts: &[f64]) -> Result<StateField> {
    check_cells(&ic)?;
    dts.iter().try_fold(ic, |f, &dt| step(model, &f, dt))
}

/// Σ|vᵢ − v_refᵢ| / Σ|v_refᵢ|.
pub fn rel_l1_error(v: &[f64], v_ref: &[f64]) -> Result<f64> {
    if v.len() != v_ref.len() {
        return Err(Error::InvalidArgument(format!("length mismatch: {} vs {}", v.len(), v_ref.len())));
    }
    let den: f64 = v_ref.iter().map(|x| x.abs()).sum();
    if den == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(v.iter().zip(v_ref).map(|(a, b)| (a - b).abs()).sum::<f64>() / den)
}

/// Maps cell values on a uniform periodic grid of `values.len()` cells onto
/// `nx` cells over the same interval: averaging when the source grid refines
/// the target, periodic linear interpolation between centers otherwise.
pub fn resample(values: &[f64], nx: usize) -> Result<Vec<f64>> {
    let n = values.len();
    if n == 0 || nx == 0 {
        return Err(Error::InvalidArgument("cannot resample an empty field".into()));
    }
    if n.is_multiple_of(nx) {
        let r = n / nx;
        return Ok(values.chunks(r).map(|c| c.iter().sum::<f64>() / r as f64).collect());
    }
    Ok((0..nx)
        .map(|i| {
            let pos = (i as f64 + 0.5) * n as f64 / nx as f64 - 0.5;
            let lo = pos.floor();
            let w = pos - lo;
            let a = (lo as isize).rem_euclid(n as isize) as usize;
            values[a] * (1.0 - w) + values[(a + 1) % n] * w
        })
        .collect())
}

/// Primitive and Legendre moment fields (h, u_m, α₁, α₂) per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentFields {
    pub x: Vec<f64>,
    pub h: Vec<f64>,
    pub u_m: Vec<f64>,
    pub alpha1: Vec<f64>,
    pub alpha2: Vec<f64>,
}

impl MomentFields {
    /// The field by name: "h", "u_m", "alpha1" or "alpha2".
    pub fn get(&self, name: &str) -> Option<&[f64]> {
        match name {
            "h" => Some(&self.h),
            "u_m" => Some(&self.u_m),
            "alpha1" => Some(&self.alpha1),
            "alpha2" => Some(&self.alpha2),
            _ => None,
        }
    }
}

/// α₁ = 3⟨Σsᵢφᵢ, 1−2ζ⟩ and α₂ = 5⟨Σsᵢφᵢ, 6ζ²−6ζ+1⟩ in every cell.
pub fn moments_of_state(model: &Model, field: &StateField) -> Result<MomentFields> {
    let r1 = model.transform().alpha_row_f64();
    let r2 = model.transform().alpha2_row_f64();
    let dot = |r: &[f64], s: &[f64]| r.iter().zip(s).map(|(a, b)| a * b).sum::<f64>();
    let mut out = MomentFields { x: field.centers(), h: vec![], u_m: vec![], alpha1: vec![], alpha2: vec![] };
    for u in &field.cells {
        let p = model.primitive(u)?;
        out.h.push(p.h);
        out.u_m.push(p.u_m);
        out.alpha1.push(dot(&r1, &p.s));
        out.alpha2.push(dot(&r2, &p.s));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PhysicalParams;
    use crate::spline_basis::BasisId;

    fn model(id: &str, nu: f64) -> Model {
        Model::new(BasisId::parse(id).unwrap().build().unwrap(), PhysicalParams::new(1.0, nu, 0.1).unwrap()).unwrap()
    }

    fn uniform(u: State, nx: usize) -> StateField {
        StateField { time: 0.0, x_min: -1.0, dx: 2.0 / nx as f64, cells: vec![u; nx] }
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::default().validate().is_ok());
        assert!(SimConfig { nx: 3, ..Default::default() }.validate().is_err());
        assert!(SimConfig { cfl: 1.5, ..Default::default() }.validate().is_err());
        assert!(SimConfig { x_max: -2.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn speeds() {
        let m = model("L1", 0.1);
        assert!((max_speed(&m, &uniform(State::from_primitive(1.0, 0.0, &[0.0]), 4)).unwrap() - 1.0).abs() < 1e-12);
        let v = max_speed(&m, &uniform(State::from_primitive(1.0, 0.25, &[0.25]), 4)).unwrap();
        assert!((v - (0.25 + 1.25f64.sqrt())).abs() < 1e-12);
        assert!(max_speed(&m, &StateField { time: 0.0, x_min: 0.0, dx: 1.0, cells: vec![] }).is_err());
    }

    #[test]
    fn equilibria_are_preserved() {
        let rest = uniform(State::from_primitive(1.0, 0.0, &[0.0, 0.0]), 8);
        let m = model("Q2", 0.1);
        assert_eq!(step(&m, &rest, 0.01).unwrap().cells, rest.cells);
        let flow = uniform(State::from_primitive(1.0, 0.7, &[0.0, 0.0]), 8);
        assert_eq!(step(&model("Q2", 0.0), &flow, 0.01).unwrap().cells, flow.cells);
    }

    #[test]
    fn cfl_violation_is_reported() {
        let rest = uniform(State::from_primitive(1.0, 0.0, &[0.0]), 8);
        assert!(matches!(step(&model("L1", 0.1), &rest, 1.0), Err(Error::CflViolation { .. })));
    }

    #[test]
    fn one_step_conserves_mass() {
        let m = model("L2", 0.1);
        let cfg = SimConfig::default();
        let f0 = initial_condition_smooth(&cfg, &m).unwrap();
        let dt = cfg.cfl * cfg.dx() / max_speed(&m, &f0).unwrap();
        let f1 = step(&m, &f0, dt).unwrap();
        assert!((f1.total_mass() - f0.total_mass()).abs() <= 1e-14 * f0.total_mass());
    }

    #[test]
    fn zero_end_time_returns_initial_field() {
        let m = model("L1", 0.1);
        let cfg = SimConfig { t_end: 0.0, ..Default::default() };
        let f0 = initial_condition_smooth(&cfg, &m).unwrap();
        let tr = simulate(&m, &cfg, f0.clone()).unwrap();
        assert_eq!(tr.snapshots, vec![f0]);
        assert!(tr.dts.is_empty());
    }

    #[test]
    fn snapshots_hit_output_times() {
        let m = model("L1", 0.1);
        let cfg = SimConfig { nx: 20, t_end: 0.2, output_times: vec![0.1, 0.05], ..Default::default() };
        let tr = simulate(&m, &cfg, initial_condition_smooth(&cfg, &m).unwrap()).unwrap();
        let times: Vec<f64> = tr.snapshots.iter().map(|f| f.time).collect();
        assert_eq!(times, vec![0.0, 0.05, 0.1, 0.2]);
    }

    #[test]
    fn relative_error() {
        let r = [1.0, 2.0, 3.0];
        assert_eq!(rel_l1_error(&r, &r).unwrap(), 0.0);
        assert!((rel_l1_error(&[2.0, 4.0, 6.0], &r).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(rel_l1_error(&[1.0], &[0.0]), Err(Error::ZeroReference));
    }

    #[test]
    fn resampling() {
        assert_eq!(resample(&[1.0, 3.0, 5.0, 7.0], 2).unwrap(), vec![2.0, 6.0]);
        let up = resample(&[1.0, 3.0], 4).unwrap();
        assert_eq!(up, vec![1.5, 1.5, 2.5, 2.5]);
    }

    #[test]
    fn legendre_moments_of_linear_spline() {
        let m = model("L1", 0.1);
        let mf = moments_of_state(&m, &uniform(State::from_primitive(2.0, 0.1, &[0.3]), 4)).unwrap();
        assert!((mf.alpha1[0] - 0.6).abs() < 1e-14 && mf.alpha2[0].abs() < 1e-15);
    }
}
