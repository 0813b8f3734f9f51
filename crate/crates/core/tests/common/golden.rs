//! Published coefficients of the explicit spline models and bases.
//!
//! Monomials are written with 0-based indices: `(j, k, "p/q")` is the
//! coefficient of h·sⱼsₖ (j ≤ k). Nonconservative entries list the
//! coefficients of s₁…s_N in the moment block of Q, the u_m diagonal being
//! implicit; system-matrix blocks likewise list coefficients of s₁…s_N.

use sswme::exact::{parse_rational, Rational};
use sswme::model::ExactCoefficients;

pub struct GoldenModel {
    pub id: &'static str,
    pub momentum: Vec<(usize, usize, &'static str)>,
    pub flux: Vec<Vec<(usize, usize, &'static str)>>,
    pub q: Vec<Vec<Vec<&'static str>>>,
    /// Bottom velocity u_b = u_m + Σ v0ᵢ sᵢ.
    pub v0: Vec<&'static str>,
    /// Bottom friction of moment row i: (ν/λ)·weightᵢ·u_b.
    pub bottom_weights: Vec<&'static str>,
    /// Interior friction (ν/h)·Σⱼ Cᵢⱼ sⱼ.
    pub interior: Vec<Vec<&'static str>>,
    pub system_block: Vec<Vec<Vec<&'static str>>>,
}

fn r(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn lookup(list: &[(usize, usize, &str)], j: usize, k: usize) -> Rational {
    list.iter().find(|e| e.0 == j && e.1 == k).map_or_else(|| r("0"), |e| r(e.2))
}

/// Compares every coefficient exactly; returns how many were checked.
pub fn check(g: &GoldenModel, c: &ExactCoefficients) -> Result<usize, String> {
    let n = c.n;
    let mut count = 0;
    let mut expect = |what: String, got: Rational, want: Rational| {
        count += 1;
        if got == want {
            Ok(())
        } else {
            Err(format!("{}: {what} is {got}, expected {want}", g.id))
        }
    };
    for j in 0..n {
        for k in j..n {
            expect(format!("momentum flux s{}s{}", j + 1, k + 1), c.momentum_flux_monomial(j, k), lookup(&g.momentum, j, k))?;
            for i in 0..n {
                expect(
                    format!("flux row {} s{}s{}", i + 1, j + 1, k + 1),
                    c.flux_monomial(i, j, k),
                    lookup(&g.flux[i], j, k),
                )?;
            }
        }
    }
    for i in 0..n {
        expect(format!("u_b weight {}", i + 1), c.v0[i].clone(), r(g.v0[i]))?;
        expect(format!("bottom friction row {}", i + 1), c.m_inv_v0[i].clone(), r(g.bottom_weights[i]))?;
        for j in 0..n {
            expect(format!("interior friction ({},{})", i + 1, j + 1), c.m_inv_c.get(i, j).clone(), r(g.interior[i][j]))?;
            for k in 0..n {
                expect(format!("Q ({},{}) s{}", i + 1, j + 1, k + 1), c.q_coeff(i, j, k), r(g.q[i][j][k]))?;
                expect(
                    format!("A_sys ({},{}) s{}", i + 1, j + 1, k + 1),
                    c.system_block_coeff(i, j, k),
                    r(g.system_block[i][j][k]),
                )?;
            }
        }
    }
    Ok(count)
}

pub fn all() -> Vec<GoldenModel> {
    vec![l1(), l2(), l3(), q2(), q3()]
}

pub fn l1() -> GoldenModel {
    GoldenModel {
        id: "L1",
        momentum: vec![(0, 0, "4/3")],
        flux: vec![vec![]],
        q: vec![vec![vec!["0"]]],
        v0: vec!["2"],
        bottom_weights: vec!["3/2"],
        interior: vec![vec!["12"]],
        system_block: vec![vec![vec!["0"]]],
    }
}

pub fn l2() -> GoldenModel {
    GoldenModel {
        id: "L2",
        momentum: vec![(0, 0, "8/3"), (1, 1, "8/3")],
        flux: vec![
            vec![(0, 0, "3/2"), (0, 1, "1"), (1, 1, "-1/2")],
            vec![(0, 0, "1/2"), (0, 1, "-1"), (1, 1, "-3/2")],
        ],
        q: vec![
            vec![vec!["3/4", "5/4"], vec!["1/4", "3/4"]],
            vec![vec!["-3/4", "-1/4"], vec!["-5/4", "-3/4"]],
        ],
        v0: vec!["4", "0"],
        bottom_weights: vec!["3/2", "0"],
        interior: vec![vec!["30", "-18"], vec!["-18", "30"]],
        system_block: vec![
            vec![vec!["9/4", "-1/4"], vec!["3/4", "-7/4"]],
            vec![vec!["7/4", "-3/4"], vec!["1/4", "-9/4"]],
        ],
    }
}

pub fn l3() -> GoldenModel {
    GoldenModel {
        id: "L3",
        momentum: vec![(0, 0, "4"), (1, 1, "3"), (2, 2, "4"), (0, 1, "-1"), (0, 2, "-1"), (1, 2, "-1")],
        flux: vec![
            vec![(0, 0, "77/30"), (0, 1, "26/15"), (0, 2, "1/3"), (1, 1, "-1/2"), (2, 2, "-11/15"), (1, 2, "-1/15")],
            vec![(0, 0, "9/5"), (0, 1, "-6/5"), (2, 2, "-9/5"), (1, 2, "6/5")],
            vec![(0, 0, "11/15"), (0, 1, "1/15"), (0, 2, "-1/3"), (1, 1, "1/2"), (2, 2, "-77/30"), (1, 2, "-26/15")],
        ],
        q: vec![
            vec![vec!["21/20", "71/40", "-3/40"], vec!["13/40", "3/4", "-23/40"], vec!["3/40", "-1/40", "-3/10"]],
            vec![vec!["-9/10", "-3/40", "9/40"], vec!["-69/40", "0", "69/40"], vec!["-9/40", "3/40", "9/10"]],
            vec![vec!["3/10", "1/40", "-3/40"], vec!["23/40", "-3/4", "-13/40"], vec!["3/40", "-71/40", "-21/20"]],
        ],
        v0: vec!["6", "0", "0"],
        bottom_weights: vec!["47/30", "3/10", "7/30"],
        interior: vec![
            vec!["324/5", "-162/5", "54/5"],
            vec!["-162/5", "216/5", "-162/5"],
            vec!["54/5", "-162/5", "324/5"],
        ],
        system_block: vec![
            vec![vec!["49/12", "-1/24", "49/120"], vec!["169/120", "-7/4", "61/120"], vec!["31/120", "-1/24", "-7/6"]],
            vec![vec!["9/2", "-9/8", "-9/40"], vec!["21/40", "0", "-21/40"], vec!["9/40", "9/8", "-9/2"]],
            vec![vec!["7/6", "1/24", "-31/120"], vec!["-61/120", "7/4", "-169/120"], vec!["-49/120", "1/24", "-49/12"]],
        ],
    }
}

pub fn q2() -> GoldenModel {
    GoldenModel {
        id: "Q2",
        momentum: vec![(0, 0, "69/80"), (1, 1, "69/80"), (0, 1, "51/40")],
        flux: vec![
            vec![(0, 0, "197/140"), (0, 1, "25/14"), (1, 1, "113/140")],
            vec![(0, 0, "-113/140"), (0, 1, "-25/14"), (1, 1, "-197/140")],
        ],
        q: vec![
            vec![vec!["87/56", "447/280"], vec!["363/280", "87/56"]],
            vec![vec!["-87/56", "-363/280"], vec!["-447/280", "-87/56"]],
        ],
        v0: vec!["9/4", "3/4"],
        bottom_weights: vec!["13/3", "-7/3"],
        interior: vec![vec!["36", "-24"], vec!["-24", "36"]],
        system_block: vec![
            vec![vec!["353/280", "53/280"], vec!["137/280", "17/280"]],
            vec![vec!["-17/280", "-137/280"], vec!["-53/280", "-353/280"]],
        ],
    }
}

pub fn q3() -> GoldenModel {
    GoldenModel {
        id: "Q3",
        momentum: vec![
            (0, 0, "48/25"),
            (1, 1, "204/125"),
            (2, 2, "48/25"),
            (0, 1, "156/125"),
            (0, 2, "-96/125"),
            (1, 2, "156/125"),
        ],
        flux: vec![
            vec![(0, 0, "2161/875"), (0, 1, "8987/3500"), (0, 2, "2/5"), (1, 1, "17/70"), (2, 2, "-611/875"), (1, 2, "-2437/3500")],
            vec![(0, 0, "96/875"), (0, 1, "-492/875"), (2, 2, "-96/875"), (1, 2, "492/875")],
            vec![(0, 0, "611/875"), (0, 1, "2437/3500"), (0, 2, "-2/5"), (1, 1, "-17/70"), (2, 2, "-2161/875"), (1, 2, "-8987/3500")],
        ],
        q: vec![
            vec![
                vec!["687/350", "13191/7000", "-27/250"],
                vec!["1263/875", "279/280", "-963/875"],
                vec!["77/250", "-2041/7000", "-377/350"],
            ],
            vec![
                vec!["-304/175", "-578/875", "64/125"],
                vec!["-1782/875", "0", "1782/875"],
                vec!["-64/125", "578/875", "304/175"],
            ],
            vec![
                vec!["377/350", "2041/7000", "-77/250"],
                vec!["963/875", "-279/280", "-1263/875"],
                vec!["27/250", "-13191/7000", "-687/350"],
            ],
        ],
        v0: vec!["24/5", "6/5", "0"],
        bottom_weights: vec!["23/8", "-2/3", "19/24"],
        interior: vec![
            vec!["1274/15", "-96/5", "374/15"],
            vec!["-736/15", "144/5", "-736/15"],
            vec!["374/15", "-96/5", "1274/15"],
        ],
        system_block: vec![
            vec![
                vec!["5209/1750", "4783/7000", "127/250"],
                vec!["787/700", "-143/280", "283/700"],
                vec!["23/250", "-2833/7000", "-559/1750"],
            ],
            vec![
                vec!["1712/875", "86/875", "-64/125"],
                vec!["258/175", "0", "-258/175"],
                vec!["64/125", "-86/875", "-1712/875"],
            ],
            vec![
                vec!["559/1750", "2833/7000", "-23/250"],
                vec!["-283/700", "143/280", "-787/700"],
                vec!["-127/250", "-4783/7000", "-5209/1750"],
            ],
        ],
    }
}

type Profile = Box<dyn Fn(f64) -> f64>;

/// Explicit piecewise formulas of the five small bases.
pub fn explicit_bases() -> Vec<(&'static str, Vec<Profile>)> {
    let pw2 = |a: fn(f64) -> f64, b: fn(f64) -> f64| -> Profile { Box::new(move |z| if z < 0.5 { a(z) } else { b(z) }) };
    let pw3 = |a: fn(f64) -> f64, b: fn(f64) -> f64, c: fn(f64) -> f64| -> Profile {
        Box::new(move |z| {
            if z < 1.0 / 3.0 {
                a(z)
            } else if z < 2.0 / 3.0 {
                b(z)
            } else {
                c(z)
            }
        })
    };
    vec![
        ("L1", vec![Box::new(|z| 2.0 - 4.0 * z) as Profile]),
        ("L2", vec![pw2(|z| 4.0 - 12.0 * z, |z| -4.0 + 4.0 * z), pw2(|z| 4.0 * z, |z| 8.0 - 12.0 * z)]),
        (
            "L3",
            vec![
                pw3(|z| 6.0 - 27.0 * z, |z| -6.0 + 9.0 * z, |_| 0.0),
                pw3(|z| 9.0 * z, |z| 9.0 - 18.0 * z, |z| -9.0 + 9.0 * z),
                pw3(|_| 0.0, |z| -3.0 + 9.0 * z, |z| 21.0 - 27.0 * z),
            ],
        ),
        (
            "Q2",
            vec![
                Box::new(|z| 0.75 * (6.0 * z * z - 10.0 * z + 3.0)) as Profile,
                Box::new(|z| -0.75 * (6.0 * z * z - 2.0 * z - 1.0)),
            ],
        ),
        (
            "Q3",
            vec![
                pw2(|z| 4.8 * (7.0 * z * z - 6.0 * z + 1.0), |z| -4.8 * (z * z - 2.0 * z + 1.0)),
                pw2(|z| -1.2 * (12.0 * z * z - 4.0 * z - 1.0), |z| 1.2 * (12.0 * z * z - 20.0 * z + 7.0)),
                pw2(|z| 4.8 * z * z, |z| -4.8 * (7.0 * z * z - 8.0 * z + 2.0)),
            ],
        ),
    ]
}
