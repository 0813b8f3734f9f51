use super::poly::Poly;
use crate::exact::{self, Rational};

/// Shifted Legendre polynomial Pᵢ(1 − 2ζ) as a polynomial in ζ.
///
/// Orthogonal on [0, 1] with ∫ Pᵢ(1−2ζ)² dζ = 1/(2i+1); the first two
/// nontrivial members are 1 − 2ζ and 6ζ² − 6ζ + 1.
pub fn shifted_legendre(i: usize) -> Poly {
    let x = Poly::linear(exact::int(1), exact::int(-2));
    let mut p0 = Poly::constant(exact::int(1));
    if i == 0 {
        return p0;
    }
    let mut p1 = x.clone();
    for n in 1..i {
        let a = exact::rat(2 * n as i64 + 1, n as i64 + 1);
        let b = exact::rat(n as i64, n as i64 + 1);
        let p2 = &(&x * &p1).scale(&a) - &p0.scale(&b);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Diagonal entry 1/(2i+1) of the shifted Legendre Gram matrix.
pub fn legendre_norm(i: usize) -> Rational {
    exact::rat(1, 2 * i as i64 + 1)
}
