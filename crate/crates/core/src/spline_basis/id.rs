use std::fmt;
use std::str::FromStr;

use super::{build_constrained_basis, legendre_basis, uniform_grid, Grid, SplineBasis};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Named basis identifiers.
///
/// * `L<N>`: N linear constrained splines on N+1 equidistant points.
/// * `Q<N>`: N quadratic constrained splines on N equidistant points (N ≥ 2).
/// * `C<N>`: N cubic constrained splines on N−1 equidistant points (N ≥ 3).
/// * `Legendre<N>`: the first N shifted Legendre polynomials.
/// * `custom:<K>:<ζ₀>,…,<ζ_{M−1}>`: degree K on explicit rational nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisId {
    Linear(usize),
    Quadratic(usize),
    Cubic(usize),
    Legendre(usize),
    Custom { k: usize, nodes: Vec<Rational> },
}

impl BasisId {
    pub fn parse(s: &str) -> Result<Self> {
        s.parse()
    }

    /// Number of basis functions N.
    pub fn size(&self) -> usize {
        match self {
            BasisId::Linear(n) | BasisId::Quadratic(n) | BasisId::Cubic(n) | BasisId::Legendre(n) => *n,
            BasisId::Custom { k, nodes } => nodes.len() + k - 2,
        }
    }

    pub fn build(&self) -> Result<SplineBasis> {
        match self {
            BasisId::Linear(n) => build_constrained_basis(&uniform_grid(n + 1)?, 1),
            BasisId::Quadratic(n) => build_constrained_basis(&uniform_grid(*n)?, 2),
            BasisId::Cubic(n) => build_constrained_basis(&uniform_grid(n - 1)?, 3),
            BasisId::Legendre(n) => legendre_basis(*n),
            BasisId::Custom { k, nodes } => build_constrained_basis(&Grid::new(nodes.clone())?, *k),
        }
    }
}

impl FromStr for BasisId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownBasis(s.to_string());
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("custom:") {
            let (k, nodes) = rest.split_once(':').ok_or_else(unknown)?;
            let k: usize = k.parse().map_err(|_| unknown())?;
            if k < 1 {
                return Err(unknown());
            }
            let nodes = nodes.split(',').map(exact::parse_rational).collect::<Result<Vec<_>>>()?;
            Grid::new(nodes.clone())?;
            return Ok(BasisId::Custom { k, nodes });
        }
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?;
        let (prefix, digits) = s.split_at(split);
        let n: usize = digits.parse().map_err(|_| unknown())?;
        match prefix {
            "L" if n >= 1 => Ok(BasisId::Linear(n)),
            "Q" if n >= 2 => Ok(BasisId::Quadratic(n)),
            "C" if n >= 3 => Ok(BasisId::Cubic(n)),
            "Legendre" if n >= 1 => Ok(BasisId::Legendre(n)),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisId::Linear(n) => write!(f, "L{n}"),
            BasisId::Quadratic(n) => write!(f, "Q{n}"),
            BasisId::Cubic(n) => write!(f, "C{n}"),
            BasisId::Legendre(n) => write!(f, "Legendre{n}"),
            BasisId::Custom { k, nodes } => {
                let nodes: Vec<_> = nodes.iter().map(exact::format_rational).collect();
                write!(f, "custom:{k}:{}", nodes.join(","))
            }
        }
    }
}
