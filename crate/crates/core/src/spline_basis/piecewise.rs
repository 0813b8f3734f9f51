use num_traits::Zero;

use super::grid::Grid;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Piecewise polynomial on a [`Grid`].
///
/// Segment `s` stores a polynomial in the local variable t = ζ − ζ_s. Evaluation
/// is right-continuous at interior nodes and left-continuous at ζ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    grid: Grid,
    degree: usize,
    pieces: Vec<Poly>,
    pieces_f64: Vec<Vec<f64>>,
    // ∫₀^{ζ_s}, one entry per segment start
    cumulative: Vec<f64>,
}

impl PiecewisePoly {
    pub fn new(grid: Grid, degree: usize, pieces: Vec<Poly>) -> Result<Self> {
        if pieces.len() != grid.segments() {
            return Err(Error::InvalidArgument(format!(
                "{} pieces for {} segments",
                pieces.len(),
                grid.segments()
            )));
        }
        if let Some(d) = pieces.iter().filter_map(Poly::degree).find(|&d| d > degree) {
            return Err(Error::InvalidArgument(format!("piece of degree {d} exceeds {degree}")));
        }
        let pieces_f64 = pieces.iter().map(Poly::to_f64).collect();
        let mut cumulative = Vec::with_capacity(pieces.len());
        let mut acc = Rational::zero();
        for (s, p) in pieces.iter().enumerate() {
            cumulative.push(exact::to_f64(&acc));
            acc += p.integral(&Rational::zero(), &grid.width(s));
        }
        Ok(PiecewisePoly { grid, degree, pieces, pieces_f64, cumulative })
    }

    pub fn zero(grid: Grid) -> Self {
        let n = grid.segments();
        Self::new(grid, 0, vec![Poly::zero(); n]).expect("zero pieces are valid")
    }

    pub fn constant(grid: Grid, c: Rational) -> Self {
        let n = grid.segments();
        Self::new(grid, 0, vec![Poly::constant(c); n]).expect("constant pieces are valid")
    }

    /// Restriction of a global polynomial in ζ to each segment.
    pub fn from_global(grid: Grid, global: &Poly) -> Self {
        let degree = global.degree().unwrap_or(0);
        let pieces = grid.nodes()[..grid.segments()].iter().map(|z| global.shift(z)).collect();
        Self::new(grid, degree, pieces).expect("shifted pieces keep the degree")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn eval(&self, zeta: f64) -> Result<f64> {
        let s = self.grid.segment_of(zeta)?;
        let t = zeta - self.grid.nodes_f64()[s];
        Ok(self.pieces_f64[s].iter().rev().fold(0.0, |acc, c| acc * t + c))
    }

    pub fn eval_derivative(&self, zeta: f64) -> Result<f64> {
        let s = self.grid.segment_of(zeta)?;
        let t = zeta - self.grid.nodes_f64()[s];
        let c = &self.pieces_f64[s];
        Ok((1..c.len()).rev().fold(0.0, |acc, k| acc * t + k as f64 * c[k]))
    }

    /// ∫₀^ζ f.
    pub fn antiderivative(&self, zeta: f64) -> Result<f64> {
        let s = self.grid.segment_of(zeta)?;
        let t = zeta - self.grid.nodes_f64()[s];
        let c = &self.pieces_f64[s];
        let local = (0..c.len()).rev().fold(0.0, |acc, k| acc * t + c[k] / (k + 1) as f64) * t;
        Ok(self.cumulative[s] + local)
    }

    pub fn eval_exact(&self, zeta: &Rational) -> Result<Rational> {
        let s = self.grid.segment_of_exact(zeta)?;
        Ok(self.pieces[s].eval(&(zeta - &self.grid.nodes()[s])))
    }

    pub fn derivative(&self) -> Self {
        let pieces = self.pieces.iter().map(Poly::derivative).collect();
        Self::new(self.grid.clone(), self.degree.saturating_sub(1), pieces)
            .expect("derivative lowers the degree")
    }

    /// The function ζ ↦ ∫₀^ζ f as a continuous piecewise polynomial.
    pub fn integral_function(&self) -> Self {
        let mut acc = Rational::zero();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (s, p) in self.pieces.iter().enumerate() {
            let anti = p.antiderivative();
            pieces.push(&anti + &Poly::constant(acc.clone()));
            acc += anti.eval(&self.grid.width(s));
        }
        Self::new(self.grid.clone(), self.degree + 1, pieces).expect("antiderivative raises the degree by one")
    }

    /// ∫₀¹ f, exactly.
    pub fn integral(&self) -> Rational {
        self.pieces
            .iter()
            .enumerate()
            .map(|(s, p)| p.integral(&Rational::zero(), &self.grid.width(s)))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Same function on a finer grid that contains every node of the current one.
    pub fn refine(&self, fine: &Grid) -> Result<Self> {
        if !fine.refines(&self.grid) {
            return Err(Error::InvalidArgument("target grid does not refine the current grid".into()));
        }
        let mut pieces = Vec::with_capacity(fine.segments());
        for start in &fine.nodes()[..fine.segments()] {
            let s = self.grid.segment_of_exact(start)?;
            pieces.push(self.pieces[s].shift(&(start - &self.grid.nodes()[s])));
        }
        Self::new(fine.clone(), self.degree, pieces)
    }

    fn on_common_grid(&self, other: &Self) -> (Self, Self) {
        if self.grid == other.grid {
            return (self.clone(), other.clone());
        }
        let g = self.grid.merge(&other.grid);
        (self.refine(&g).expect("merged grid refines"), other.refine(&g).expect("merged grid refines"))
    }

    fn zip_with(&self, other: &Self, degree: usize, f: impl Fn(&Poly, &Poly) -> Poly) -> Self {
        let (a, b) = self.on_common_grid(other);
        let pieces = a.pieces.iter().zip(&b.pieces).map(|(p, q)| f(p, q)).collect();
        Self::new(a.grid, degree, pieces).expect("degree bound holds")
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, self.degree.max(other.degree), |p, q| p + q)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, self.degree.max(other.degree), |p, q| p - q)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, self.degree + other.degree, |p, q| p * q)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let pieces = self.pieces.iter().map(|p| p.scale(k)).collect();
        Self::new(self.grid.clone(), self.degree, pieces).expect("scaling keeps the degree")
    }

    /// ⟨f, g⟩ = ∫₀¹ f g, exactly.
    pub fn inner(&self, other: &Self) -> Rational {
        self.mul(other).integral()
    }

    /// Largest jump of the derivatives of order 0..=order over interior nodes.
    pub fn continuity_defect(&self, order: usize) -> f64 {
        let mut worst = 0.0f64;
        let mut f = self.clone();
        for _ in 0..=order {
            for s in 1..f.pieces.len() {
                let left = f.pieces[s - 1].eval(&f.grid.width(s - 1));
                let right = f.pieces[s].coeff(0);
                worst = worst.max(exact::to_f64(&(left - right)).abs());
            }
            f = f.derivative();
        }
        worst
    }
}
