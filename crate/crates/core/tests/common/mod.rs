//! Shared fixtures: random states, a polynomial root finder independent of the
//! eigenvalue solver, published model coefficients and explicit basis formulas.
#![allow(dead_code)]

pub mod charpoly;
pub mod golden;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sswme::model::{Model, PhysicalParams};
use sswme::spline_basis::{BasisId, SplineBasis};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn basis(id: &str) -> SplineBasis {
    BasisId::parse(id).unwrap().build().unwrap()
}

pub fn model(id: &str, g: f64) -> Model {
    Model::new(basis(id), PhysicalParams::new(g, 0.0, 1.0).unwrap()).unwrap()
}

/// Roots of a polynomial given highest power first (Durand-Kerner followed
/// by Newton polishing).
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let lead = coeffs[0];
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x / lead, 0.0)).collect();
    let n = c.len() - 1;
    let eval = |z: Complex64| c.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let deriv = |z: Complex64| {
        c[..n]
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &a)| acc * z + a * (n - k) as f64)
    };
    let radius = 1.0 + c[1..].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = deriv(*zi);
            if d.norm() > 1e-12 {
                *zi -= eval(*zi) / d;
            }
        }
    }
    z
}

/// Largest distance in a greedy nearest-neighbour matching of two multisets.
pub fn match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn reals(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}
