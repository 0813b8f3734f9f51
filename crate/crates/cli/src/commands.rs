use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::json;
use sswme::exact::format_rational;
use sswme::experiments::Experiment;
use sswme::fv_solver::{self, initial_condition, moments_of_state, rel_l1_error, MomentFields, SimConfig, Trajectory};
use sswme::hyperbolicity::{scan_region, scan_restriction_line, ScanAxes, Slice};
use sswme::model::{Model, PhysicalParams};
use sswme::moment_tensors::{basis_transform, compute_tensors, tensor_dump};
use sswme::reference_solver::{
    moments_of_reference, reference_initial_condition, simulate_reference, ReferenceConfig, ReferenceTrajectory,
};
use sswme::spline_basis::{BasisFamily, BasisId, SplineBasis};

use crate::manifest::RunManifest;
use crate::output::{ensure_dir, fields_name, num, read_csv, strs, write_csv};
use crate::RunArgs;

pub const DEFAULT_CATALOGUE: &str = "L1,L2,L3,L4,L5,L6,L7,L8,Q2,Q3,Q4,Q5,Q6,Q7,Q8,C3,C4,C5,C6,Legendre1,Legendre2,Legendre3";

fn build_basis(id: &str) -> Result<SplineBasis> {
    Ok(BasisId::parse(id)?.build()?)
}

fn family_name(f: &BasisFamily) -> String {
    match f {
        BasisFamily::Spline { k, .. } => format!("spline(k={k})"),
        BasisFamily::Legendre => "legendre".into(),
    }
}

fn samples_of(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        bail!("at least 2 samples are required");
    }
    Ok((0..n).map(|i| i as f64 / (n - 1) as f64).collect())
}

pub fn basis(id: &str, out: &Path, samples: usize) -> Result<()> {
    let b = build_basis(id)?;
    let zetas = samples_of(samples)?;
    ensure_dir(out)?;
    fs::write(out.join("basis.json"), serde_json::to_string_pretty(&b.export())? + "\n")?;
    let mut header = strs(["zeta"]);
    header.extend((1..=b.len()).map(|i| format!("phi_{i}")));
    let rows = zetas
        .iter()
        .map(|&z| {
            let mut row = vec![num(z)];
            row.extend(b.eval_all(z)?.into_iter().map(num));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    write_csv(&out.join("samples.csv"), &header, rows)?;
    let mut m = RunManifest::new("basis");
    m.bases = vec![id.into()];
    m.settings = json!({ "samples": samples });
    m.outputs = strs(["basis.json", "samples.csv"]);
    m.write(out)?;
    let nodes: Vec<String> = b.grid().nodes().iter().map(format_rational).collect();
    println!("{id}: {} functions of degree {}, breakpoints {}", b.len(), b.degree(), nodes.join(" "));
    Ok(())
}

pub fn tensors(id: &str, out: &Path) -> Result<()> {
    let b = build_basis(id)?;
    let t = compute_tensors(&b)?;
    ensure_dir(out)?;
    fs::write(out.join("tensors.txt"), tensor_dump(&t))?;
    let mut m = RunManifest::new("tensors");
    m.bases = vec![id.into()];
    m.outputs = strs(["tensors.txt"]);
    m.write(out)?;
    Ok(())
}

pub fn catalogue(ids: &[String], out: &Path) -> Result<()> {
    let ids: Vec<&String> = ids.iter().filter(|s| !s.trim().is_empty()).collect();
    let mut rows = Vec::new();
    for id in &ids {
        let b = build_basis(id)?;
        let tr = basis_transform(&b)?;
        let nodes: Vec<String> = b.grid().nodes().iter().map(format_rational).collect();
        let alpha: Vec<String> = tr.alpha_row.iter().map(format_rational).collect();
        rows.push(vec![
            id.to_string(),
            family_name(b.family()),
            b.degree().to_string(),
            b.len().to_string(),
            nodes.join(" "),
            tr.valid_square.to_string(),
            tr.linear_exact.to_string(),
            alpha.join(" "),
        ]);
    }
    ensure_dir(out)?;
    let header = strs(["basis", "family", "degree", "n", "breakpoints", "square", "contains_linear", "alpha1_row"]);
    write_csv(&out.join("catalogue.csv"), &header, rows)?;
    let mut m = RunManifest::new("catalogue");
    m.bases = ids.iter().map(|s| s.to_string()).collect();
    m.outputs = strs(["catalogue.csv"]);
    m.write(out)?;
    Ok(())
}

pub struct ScanSettings {
    pub half_width: f64,
    pub resolution: usize,
    pub line_half_width: f64,
    pub line_samples: usize,
}

fn unit_model(b: SplineBasis, regularized: bool) -> Result<Model> {
    Ok(Model::new(b, PhysicalParams::new(1.0, 0.0, 1.0)?)?.with_regularization(regularized))
}

pub fn hyperbolicity_scan(id: &str, out: &Path, regularized: bool, s: ScanSettings) -> Result<()> {
    let model = unit_model(build_basis(id)?, regularized)?;
    let n = model.n_moments();
    let map = scan_region(&model, &ScanAxes::square(s.half_width, s.resolution), &Slice::plane(n))?;
    let line = scan_restriction_line(&model, -s.line_half_width, s.line_half_width, s.line_samples)?;
    ensure_dir(out)?;
    let mut header = strs(["a", "b"]);
    header.extend((1..=n).map(|i| format!("s_bar_{i}")));
    header.extend(strs(["max_imag", "on_restriction_line"]));
    let rows = map.cells.iter().map(|c| {
        let mut row = vec![num(c.a), num(c.b)];
        row.extend(c.s_bar.iter().map(|&v| num(v)));
        row.push(num(c.max_imag));
        row.push((c.on_restriction_line as u8).to_string());
        row
    });
    write_csv(&out.join("region.csv"), &header, rows)?;
    let rows = line.iter().map(|p| vec![num(p.alpha1), num(p.max_imag)]);
    write_csv(&out.join("line.csv"), &strs(["alpha1_bar", "max_imag"]), rows)?;
    let mut m = RunManifest::new("hyperbolicity-scan");
    m.bases = vec![id.into()];
    m.regularized = regularized;
    m.physics = Some(model.params().clone());
    m.settings = json!({
        "half_width": s.half_width,
        "resolution": s.resolution,
        "line_half_width": s.line_half_width,
        "line_samples": s.line_samples,
        "h": 1.0,
        "u_m": 0.0,
    });
    m.outputs = strs(["region.csv", "line.csv"]);
    m.write(out)?;
    let fraction = map.hyperbolic_fraction(1e-9);
    println!("{id}: hyperbolic fraction {fraction:.4} on the {0}x{0} grid", s.resolution);
    Ok(())
}

struct Setup {
    experiment: Experiment,
    params: PhysicalParams,
    config: SimConfig,
}

fn setup(run: &RunArgs) -> Result<Setup> {
    let experiment = Experiment::parse(&run.experiment)?;
    let mut params = experiment.params();
    if let Some(g) = run.g {
        params.g = g;
    }
    if let Some(nu) = run.nu {
        params.nu = nu;
    }
    if let Some(l) = run.slip_length {
        params.slip_length = l;
    }
    params.validate()?;
    let config = SimConfig {
        x_min: run.x_min,
        x_max: run.x_max,
        nx: run.nx,
        t_end: run.t_end,
        cfl: run.cfl,
        output_times: run.output_times.clone(),
    };
    config.validate()?;
    Ok(Setup { experiment, params, config })
}

fn moment_rows(p: &MomentFields, s: &[Vec<f64>]) -> Vec<Vec<String>> {
    (0..p.x.len())
        .map(|i| {
            let mut row = vec![num(p.x[i]), num(p.h[i]), num(p.u_m[i])];
            row.extend(s[i].iter().map(|&v| num(v)));
            row.push(num(p.alpha1[i]));
            row.push(num(p.alpha2[i]));
            row
        })
        .collect()
}

fn run_model(id: &str, regularized: bool, run: &RunArgs) -> Result<(Model, Setup, Trajectory)> {
    let st = setup(run)?;
    let model = Model::new(build_basis(id)?, st.params.clone())?.with_regularization(regularized);
    let ic = initial_condition(&st.config, &model, st.experiment)?;
    let traj = fv_solver::simulate(&model, &st.config, ic).with_context(|| format!("simulating {id}"))?;
    Ok((model, st, traj))
}

pub fn simulate(id: &str, out: &Path, regularized: bool, run: &RunArgs) -> Result<()> {
    let (model, st, traj) = run_model(id, regularized, run)?;
    ensure_dir(out)?;
    let n = model.n_moments();
    let mut header = strs(["x", "h", "u_m"]);
    header.extend((1..=n).map(|i| format!("s_{i}")));
    header.extend(strs(["alpha1", "alpha2"]));
    let mut outputs = Vec::new();
    for snap in &traj.snapshots {
        let p = moments_of_state(&model, snap)?;
        let s = snap.cells.iter().map(|u| Ok(model.primitive(u)?.s)).collect::<Result<Vec<_>>>()?;
        let name = fields_name(snap.time);
        write_csv(&out.join(&name), &header, moment_rows(&p, &s))?;
        outputs.push(name);
    }
    let mut m = RunManifest::new("simulate");
    m.bases = vec![id.into()];
    m.regularized = regularized;
    m.experiment = Some(st.experiment.name().into());
    m.physics = Some(st.params);
    m.grid = Some(st.config);
    m.settings = json!({ "steps": traj.dts.len() });
    m.outputs = outputs;
    m.write(out)?;
    let last = traj.last();
    println!("{id}: {} steps, h in [{:.6}, {:.6}] at t = {}", traj.dts.len(), last.min_height(), last.max_height(), last.time);
    Ok(())
}

fn run_reference(st: &Setup, nzeta: usize) -> Result<ReferenceTrajectory> {
    let cfg = ReferenceConfig { sim: st.config.clone(), nzeta };
    let ic = reference_initial_condition(&cfg, st.experiment)?;
    simulate_reference(&cfg, &st.params, ic).context("reference solver")
}

pub fn reference(out: &Path, nzeta: usize, run: &RunArgs) -> Result<()> {
    let st = setup(run)?;
    let traj = run_reference(&st, nzeta)?;
    ensure_dir(out)?;
    let mut header = strs(["x", "h", "u_m", "alpha1", "alpha2"]);
    header.extend((0..nzeta).map(|j| format!("u_{j}")));
    let mut outputs = Vec::new();
    for snap in &traj.snapshots {
        let p = moments_of_reference(snap);
        let rows = (0..snap.nx()).map(|i| {
            let mut row = vec![num(p.x[i]), num(p.h[i]), num(p.u_m[i]), num(p.alpha1[i]), num(p.alpha2[i])];
            row.extend(snap.u[i].iter().map(|&v| num(v)));
            row
        });
        let name = fields_name(snap.time);
        write_csv(&out.join(&name), &header, rows)?;
        outputs.push(name);
    }
    let mut m = RunManifest::new("reference");
    m.experiment = Some(st.experiment.name().into());
    m.physics = Some(st.params);
    m.grid = Some(st.config);
    m.nzeta = Some(nzeta);
    m.settings = json!({ "steps": traj.dts.len() });
    m.outputs = outputs;
    m.write(out)?;
    println!("reference: {} steps, {nzeta} levels", traj.dts.len());
    Ok(())
}

/// Relative L1 error, NaN when the reference field vanishes identically.
fn error_or_nan(v: &[f64], r: &[f64]) -> Result<f64> {
    match rel_l1_error(v, r) {
        Ok(e) => Ok(e),
        Err(sswme::Error::ZeroReference) => Ok(f64::NAN),
        Err(e) => Err(e.into()),
    }
}

pub fn errors(ids: &[String], out: &Path, regularized: bool, nzeta: usize, run: &RunArgs) -> Result<()> {
    let ids: Vec<&String> = ids.iter().filter(|s| !s.trim().is_empty()).collect();
    let st = setup(run)?;
    let mut rows = Vec::new();
    if !ids.is_empty() {
        let reference = moments_of_reference(run_reference(&st, nzeta)?.last());
        for id in &ids {
            let (model, _, traj) = run_model(id, regularized, run)?;
            let p = moments_of_state(&model, traj.last())?;
            let mut row = vec![id.to_string(), model.n_moments().to_string()];
            for q in ["h", "u_m", "alpha1", "alpha2"] {
                row.push(num(error_or_nan(p.get(q).unwrap(), reference.get(q).unwrap())?));
            }
            rows.push(row);
        }
    }
    ensure_dir(out)?;
    let header = strs(["basis", "N", "err_h", "err_um", "err_alpha1", "err_alpha2"]);
    write_csv(&out.join("errors.csv"), &header, rows)?;
    let mut m = RunManifest::new("errors");
    m.bases = ids.iter().map(|s| s.to_string()).collect();
    m.regularized = regularized;
    m.experiment = Some(st.experiment.name().into());
    m.physics = Some(st.params);
    m.grid = Some(st.config);
    m.nzeta = Some(nzeta);
    m.outputs = strs(["errors.csv"]);
    m.write(out)?;
    Ok(())
}

pub fn profiles(run_dir: &Path, xs: &[f64], time: Option<f64>, samples: usize, out: &Path) -> Result<()> {
    let run = RunManifest::read(run_dir)?;
    if run.subcommand != "simulate" {
        bail!("{} holds a `{}` run, expected `simulate`", run_dir.display(), run.subcommand);
    }
    let id = run.bases.first().context("run manifest lists no basis")?;
    let grid = run.grid.as_ref().context("run manifest lacks the grid")?;
    let basis = build_basis(id)?;
    let file = match time {
        Some(t) => fields_name(t),
        None => run.outputs.last().cloned().context("run has no field files")?,
    };
    let (header, rows) = read_csv(&run_dir.join(&file))?;
    let col = |name: &str| header.iter().position(|h| h == name).with_context(|| format!("{file} lacks column {name}"));
    let um = col("u_m")?;
    let s_cols = (1..=basis.len()).map(|i| col(&format!("s_{i}"))).collect::<Result<Vec<_>>>()?;
    if rows.len() != grid.nx {
        bail!("{file} has {} rows, expected {}", rows.len(), grid.nx);
    }
    let dx = grid.dx();
    let mut cells = Vec::new();
    for &x in xs {
        if !(x >= grid.x_min && x <= grid.x_max) {
            bail!("x = {x} lies outside the domain [{}, {}]", grid.x_min, grid.x_max);
        }
        cells.push((((x - grid.x_min) / dx).floor() as usize).min(grid.nx - 1));
    }
    let zetas = samples_of(samples)?;
    let mut table = Vec::new();
    for &z in &zetas {
        let mut row = vec![num(z)];
        for &c in &cells {
            let s: Vec<f64> = s_cols.iter().map(|&k| rows[c][k]).collect();
            row.push(num(basis.reconstruct(rows[c][um], &s, z)?));
        }
        table.push(row);
    }
    ensure_dir(out)?;
    let mut header = strs(["zeta"]);
    header.extend(xs.iter().map(|x| format!("u(x={x})")));
    write_csv(&out.join("profiles.csv"), &header, table)?;
    let mut m = RunManifest::new("profiles");
    m.bases = vec![id.clone()];
    m.regularized = run.regularized;
    m.experiment = run.experiment.clone();
    m.physics = run.physics.clone();
    m.grid = run.grid.clone();
    m.settings = json!({
        "run": run_dir.display().to_string(),
        "source": file,
        "x": xs,
        "cells": cells,
        "samples": samples,
    });
    m.outputs = strs(["profiles.csv"]);
    m.write(out)?;
    Ok(())
}
