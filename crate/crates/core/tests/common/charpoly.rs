//! Shifted characteristic polynomials as printed for the small models, highest
//! power first, in the scaled variables s̄ = s/√(gh).

pub fn l2(s: &[f64]) -> Vec<f64> {
    let (a, b) = (s[0], s[1]);
    vec![
        4.0,
        10.0 * b - 10.0 * a,
        -35.0 * a * a - 6.0 * b * a - 35.0 * b * b - 4.0,
        16.0 * a.powi(3) - 144.0 * b * a * a + 144.0 * b * b * a + 10.0 * a - 16.0 * b.powi(3) - 10.0 * b,
        -8.0 * a.powi(4) + 48.0 * b * a.powi(3) + 112.0 * b * b * a * a + 3.0 * a * a + 48.0 * b.powi(3) * a + 6.0 * b * a
            - 8.0 * b.powi(4)
            + 3.0 * b * b,
    ]
}

pub fn l3(s: &[f64]) -> Vec<f64> {
    let (s1, s2, s3) = (s[0], s[1], s[2]);
    let p = |x: f64, k: i32| x.powi(k);
    let t4 = s1 - s3;
    let t3 = 1461.0 * p(s1, 2) - 1029.0 * s2 * s1 + 1617.0 * s3 * s1 + 1035.0 * p(s2, 2) + 1461.0 * p(s3, 2)
        - 1029.0 * s2 * s3
        + 80.0;
    let t2 = 672.0 * p(s1, 3) - 3093.0 * s2 * p(s1, 2) - 4125.0 * s3 * p(s1, 2) + 3987.0 * p(s2, 2) * s1
        + 4125.0 * p(s3, 2) * s1
        + 224.0 * s1
        - 672.0 * p(s3, 3)
        + 3093.0 * s2 * p(s3, 2)
        - 3987.0 * p(s2, 2) * s3
        - 224.0 * s3;
    let t1 = 252.0 * p(s1, 4) + 45.0 * s2 * p(s1, 3) - 2763.0 * s3 * p(s1, 3) - 2628.0 * p(s2, 2) * p(s1, 2)
        - 7191.0 * p(s3, 2) * p(s1, 2)
        + 12897.0 * s2 * s3 * p(s1, 2)
        - 167.0 * p(s1, 2)
        + 522.0 * p(s2, 3) * s1
        - 2763.0 * p(s3, 3) * s1
        + 12897.0 * s2 * p(s3, 2) * s1
        + 263.0 * s2 * s1
        - 12762.0 * p(s2, 2) * s3 * s1
        - 619.0 * s3 * s1
        + 135.0 * p(s2, 4)
        + 252.0 * p(s3, 4)
        + 45.0 * s2 * p(s3, 3)
        - 105.0 * p(s2, 2)
        - 2628.0 * p(s2, 2) * p(s3, 2)
        - 167.0 * p(s3, 2)
        + 522.0 * p(s2, 3) * s3
        + 263.0 * s2 * s3;
    let t0 = 180.0 * s2 * p(s1, 4) - 1548.0 * s3 * p(s1, 4) - 81.0 * p(s2, 2) * p(s1, 3) - 1737.0 * p(s3, 2) * p(s1, 3)
        + 1638.0 * s2 * s3 * p(s1, 3)
        + 32.0 * p(s1, 3)
        - 774.0 * p(s2, 3) * p(s1, 2)
        + 1737.0 * p(s3, 3) * p(s1, 2)
        + 7.0 * s2 * p(s1, 2)
        + 8721.0 * p(s2, 2) * s3 * p(s1, 2)
        + 95.0 * s3 * p(s1, 2)
        + 351.0 * p(s2, 4) * s1
        + 1548.0 * p(s3, 4) * s1
        - 1638.0 * s2 * p(s3, 3) * s1
        - 177.0 * p(s2, 2) * s1
        - 8721.0 * p(s2, 2) * p(s3, 2) * s1
        - 95.0 * p(s3, 2) * s1
        - 180.0 * s2 * p(s3, 4)
        + 81.0 * p(s2, 2) * p(s3, 3)
        - 32.0 * p(s3, 3)
        + 774.0 * p(s2, 3) * p(s3, 2)
        - 7.0 * s2 * p(s3, 2)
        - 351.0 * p(s2, 4) * s3
        + 177.0 * p(s2, 2) * s3;
    vec![160.0, -672.0 * t4, -2.0 * t3, 3.0 * t2, -6.0 * t1, 9.0 * t0]
}

pub fn q2(s: &[f64]) -> Vec<f64> {
    let (a, b) = (s[0], s[1]);
    vec![
        8960.0,
        -9600.0 * (a - b),
        -32.0 * (783.0 * a * a + 1458.0 * b * a + 783.0 * b * b + 280.0),
        -24.0 * (9.0 * a.powi(3) + 405.0 * b * a * a - 405.0 * b * b * a - 400.0 * a - 9.0 * b.powi(3) + 400.0 * b),
        9.0 * (783.0 * a.powi(4)
            + 4068.0 * b * a.powi(3)
            + 6426.0 * b * b * a * a
            + 208.0 * a * a
            + 4068.0 * b.powi(3) * a
            + 1376.0 * b * a
            + 783.0 * b.powi(4)
            + 208.0 * b * b),
    ]
}

/// Regularized L3 in the scaled Legendre slope ᾱ.
pub fn hl3(alpha: f64) -> Vec<f64> {
    let a2 = alpha * alpha;
    vec![60.0, 0.0, -(83.0 * a2 + 60.0), 0.0, 23.0 * (a2 * a2 + a2), 0.0]
}

pub fn monic(p: &[f64]) -> Vec<f64> {
    p.iter().map(|c| c / p[0]).collect()
}
