use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::piecewise::PiecewisePoly;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Knot placement outside the grid.
///
/// `Clamped` repeats each end node K+1 times. `Extended` continues the first and
/// last grid spacing K times beyond [0, 1] and restricts the splines to [0, 1];
/// this is the variant that reproduces the catalogued quadratic bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EndCondition {
    Clamped,
    #[default]
    Extended,
}

pub fn knot_vector(grid: &Grid, k: usize, end: EndCondition) -> Vec<Rational> {
    let nodes = grid.nodes();
    let m = nodes.len();
    let mut knots = Vec::with_capacity(m + 2 * k);
    match end {
        EndCondition::Clamped => {
            knots.extend(std::iter::repeat_n(nodes[0].clone(), k));
            knots.extend(nodes.iter().cloned());
            knots.extend(std::iter::repeat_n(nodes[m - 1].clone(), k));
        }
        EndCondition::Extended => {
            let w0 = grid.width(0);
            let w1 = grid.width(grid.segments() - 1);
            knots.extend((1..=k).rev().map(|j| &nodes[0] - &w0 * exact::int(j as i64)));
            knots.extend(nodes.iter().cloned());
            knots.extend((1..=k).map(|j| &nodes[m - 1] + &w1 * exact::int(j as i64)));
        }
    }
    knots
}

/// The M+K−1 B-splines of degree K on the grid with clamped ends.
pub fn build_bspline_basis(grid: &Grid, k: usize) -> Result<Vec<PiecewisePoly>> {
    build_bspline_basis_with(grid, k, EndCondition::Clamped)
}

/// Cox-de Boor recursion carried out on the per-segment polynomials.
pub fn build_bspline_basis_with(grid: &Grid, k: usize, end: EndCondition) -> Result<Vec<PiecewisePoly>> {
    if k < 1 {
        return Err(Error::InvalidArgument("B-spline degree must be at least 1".into()));
    }
    let knots = knot_vector(grid, k, end);
    let nseg = grid.segments();
    let starts = &grid.nodes()[..nseg];

    // degree 0: indicator of [t_j, t_{j+1}) restricted to the grid segments
    let mut level: Vec<Vec<Poly>> = (0..knots.len() - 1)
        .map(|j| {
            (0..nseg)
                .map(|s| {
                    if knots[j] == grid.nodes()[s] && knots[j + 1] == grid.nodes()[s + 1] {
                        Poly::constant(exact::int(1))
                    } else {
                        Poly::zero()
                    }
                })
                .collect()
        })
        .collect();

    for d in 1..=k {
        let mut next = Vec::with_capacity(level.len() - 1);
        for j in 0..level.len() - 1 {
            let left_den = &knots[j + d] - &knots[j];
            let right_den = &knots[j + d + 1] - &knots[j + 1];
            let pieces = (0..nseg)
                .map(|s| {
                    let mut p = Poly::zero();
                    if !left_den.is_zero() {
                        // (ζ − t_j)/(t_{j+d} − t_j) with ζ = ζ_s + t
                        let w = Poly::linear((&starts[s] - &knots[j]) / &left_den, exact::int(1) / &left_den);
                        p = &p + &(&w * &level[j][s]);
                    }
                    if !right_den.is_zero() {
                        let w = Poly::linear(
                            (&knots[j + d + 1] - &starts[s]) / &right_den,
                            -exact::int(1) / &right_den,
                        );
                        p = &p + &(&w * &level[j + 1][s]);
                    }
                    p
                })
                .collect();
            next.push(pieces);
        }
        level = next;
    }

    level
        .into_iter()
        .map(|pieces| PiecewisePoly::new(grid.clone(), k, pieces))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::spline_basis::grid::uniform_grid;

    #[test]
    fn linear_hats_peak_at_nodes() {
        let g = uniform_grid(4).unwrap();
        let b = build_bspline_basis(&g, 1).unwrap();
        assert_eq!(b.len(), 4);
        for (i, f) in b.iter().enumerate() {
            for (j, z) in g.nodes().iter().enumerate() {
                let expect = if i == j { int(1) } else { int(0) };
                assert_eq!(f.eval_exact(z).unwrap(), expect);
            }
        }
    }

    #[test]
    fn counts_and_partition_of_unity() {
        for end in [EndCondition::Clamped, EndCondition::Extended] {
            for m in 2..6 {
                for k in 1..4 {
                    let g = uniform_grid(m).unwrap();
                    let b = build_bspline_basis_with(&g, k, end).unwrap();
                    assert_eq!(b.len(), m + k - 1);
                    let sum = b.iter().skip(1).fold(b[0].clone(), |acc, f| acc.add(f));
                    for p in sum.pieces() {
                        assert_eq!(p, &Poly::constant(int(1)));
                    }
                    for f in &b {
                        for i in 0..=20 {
                            assert!(f.eval(i as f64 / 20.0).unwrap() >= -1e-15);
                        }
                        assert!(f.continuity_defect(k - 1) < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn two_point_linear() {
        let b = build_bspline_basis(&uniform_grid(2).unwrap(), 1).unwrap();
        assert_eq!(b[0].pieces()[0], Poly::linear(int(1), int(-1)));
        assert_eq!(b[1].pieces()[0], Poly::linear(int(0), int(1)));
    }

    #[test]
    fn extended_quadratic_integrals() {
        // one segment, knots -2..3: the restricted splines integrate to 1/6, 2/3, 1/6
        let b = build_bspline_basis_with(&uniform_grid(2).unwrap(), 2, EndCondition::Extended).unwrap();
        let ints: Vec<_> = b.iter().map(PiecewisePoly::integral).collect();
        assert_eq!(ints, vec![rat(1, 6), rat(2, 3), rat(1, 6)]);
    }

    #[test]
    fn rejects_degree_zero() {
        assert!(build_bspline_basis(&uniform_grid(3).unwrap(), 0).is_err());
    }
}
