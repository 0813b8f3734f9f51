use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Ordered breakpoints 0 = ζ₀ < ζ₁ < … < ζ_{M−1} = 1 on the vertical coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<Rational>,
    nodes_f64: Vec<f64>,
}

/// Equidistant grid with `m` points, ζⱼ = j/(m−1).
pub fn uniform_grid(m: usize) -> Result<Grid> {
    Grid::uniform(m)
}

impl Grid {
    pub fn uniform(m: usize) -> Result<Grid> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 points, got {m}")));
        }
        Grid::new((0..m).map(|j| exact::rat(j as i64, (m - 1) as i64)).collect())
    }

    pub fn new(nodes: Vec<Rational>) -> Result<Grid> {
        if nodes.len() < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
        }
        if !nodes[0].is_zero() || !nodes[nodes.len() - 1].is_one() {
            return Err(Error::InvalidArgument("grid must start at 0 and end at 1".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("grid nodes must be strictly increasing".into()));
        }
        let nodes_f64 = nodes.iter().map(exact::to_f64).collect();
        Ok(Grid { nodes, nodes_f64 })
    }

    /// Grid from floating-point nodes, each converted to its exact rational value.
    pub fn from_f64(nodes: &[f64]) -> Result<Grid> {
        Grid::new(nodes.iter().map(|&x| exact::from_f64(x)).collect::<Result<_>>()?)
    }

    /// Number of points M.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    pub fn nodes_f64(&self) -> &[f64] {
        &self.nodes_f64
    }

    pub fn width(&self, s: usize) -> Rational {
        &self.nodes[s + 1] - &self.nodes[s]
    }

    pub fn is_uniform(&self) -> bool {
        let w = self.width(0);
        (1..self.segments()).all(|s| self.width(s) == w)
    }

    /// Segment containing ζ: right-continuous inside, the last segment at ζ = 1.
    pub fn segment_of(&self, zeta: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&zeta) {
            return Err(Error::Domain(zeta));
        }
        let idx = self.nodes_f64.partition_point(|&n| n <= zeta);
        Ok(idx.saturating_sub(1).min(self.segments() - 1))
    }

    pub fn segment_of_exact(&self, zeta: &Rational) -> Result<usize> {
        if *zeta < Rational::zero() || *zeta > Rational::one() {
            return Err(Error::Domain(exact::to_f64(zeta)));
        }
        let idx = self.nodes.partition_point(|n| n <= zeta);
        Ok(idx.saturating_sub(1).min(self.segments() - 1))
    }

    /// Union of both node sets.
    pub fn merge(&self, other: &Grid) -> Grid {
        let mut nodes: Vec<Rational> = self.nodes.iter().chain(&other.nodes).cloned().collect();
        nodes.sort();
        nodes.dedup();
        Grid::new(nodes).expect("union of valid grids is valid")
    }

    /// True if every node of `other` is a node of `self`.
    pub fn refines(&self, other: &Grid) -> bool {
        other.nodes.iter().all(|n| self.nodes.binary_search(n).is_ok())
    }
}
