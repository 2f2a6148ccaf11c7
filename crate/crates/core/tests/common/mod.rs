//! Generators shared by the property and acceptance tests.
//!
//! Each generator maps plain numbers to a geometric object, so proptest
//! strategies and a seeded `ChaCha8Rng` can drive the same constructions.

#![allow(dead_code)]

use paracontact_core::chart::{directional, lie_bracket, ChartPoint, LocalGeometry, MetricField};
use paracontact_core::expr::{self, Expr};
use paracontact_core::jet::{Axis, Jet};
use paracontact_core::tensor::{self, JetVec};
use paracontact_core::Result;

/// Exponents of the monomials of degree at most 2, in `x, y, z`.
pub const QUADRATIC: [[u8; 3]; 10] =
    [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];

/// Exponents of the monomials of degree at most 3.
pub fn cubic_monomials() -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for d in 0..=3u8 {
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                out.push([a, b, d - a - b]);
            }
        }
    }
    out
}

pub fn monomial(s: &[Jet; 3], e: [u8; 3]) -> Jet {
    let mut m = Jet::one();
    for (axis, &k) in e.iter().enumerate() {
        for _ in 0..k {
            m = m * s[axis];
        }
    }
    m
}

pub fn polynomial(s: &[Jet; 3], monomials: &[[u8; 3]], coeffs: &[f64]) -> Jet {
    monomials.iter().zip(coeffs).map(|(e, c)| monomial(s, *e) * *c).sum()
}

/// Analytic `∂^d` of `Σ c_m x^a y^b z^c` at `p`.
pub fn polynomial_derivative(monomials: &[[u8; 3]], coeffs: &[f64], p: [f64; 3], d: [u8; 3]) -> f64 {
    let falling = |n: u8, k: u8| (0..k).map(|i| (n - i) as f64).product::<f64>();
    monomials
        .iter()
        .zip(coeffs)
        .filter(|(e, _)| (0..3).all(|a| e[a] >= d[a]))
        .map(|(e, c)| c * (0..3).map(|a| falling(e[a], d[a]) * p[a].powi((e[a] - d[a]) as i32)).product::<f64>())
        .sum()
}

/// Metric `diag(1, -1, 1) + 0.05 Σ c_m q_m(x, y, z)` with quadratic entries.
/// Nondegenerate for coefficients in `[-1, 1]` and points in `[-0.5, 0.5]³`.
pub fn quadratic_metric(coeffs: [[f64; 10]; 6]) -> MetricField {
    MetricField::new(move |s| {
        let base = [1.0, -1.0, 1.0];
        let mut g = tensor::zero_mat();
        let mut n = 0;
        for i in 0..3 {
            for j in i..3 {
                let diag = if i == j { base[i] } else { 0.0 };
                g[i][j] = polynomial(s, &QUADRATIC, &coeffs[n]) * 0.05 + diag;
                n += 1;
            }
        }
        Ok(g)
    })
}

/// Vector field with quadratic components.
pub fn quadratic_field(s: &[Jet; 3], coeffs: &[[f64; 10]; 3]) -> JetVec {
    [0, 1, 2].map(|i| polynomial(s, &QUADRATIC, &coeffs[i]))
}

/// Largest defects of torsion-freeness, metric compatibility and the first
/// Bianchi identity for the fields `X, Y, Z` at one point.
pub fn connection_defects(geom: &LocalGeometry, x: &JetVec, y: &JetVec, z: &JetVec) -> Result<[f64; 3]> {
    let torsion = tensor::sub(&tensor::sub(&geom.covariant(x, y)?, &geom.covariant(y, x)?), &lie_bracket(x, y)?);
    let lhs = directional(x, &geom.inner(y, z))?;
    let rhs = geom.inner(&geom.covariant(x, y)?, z) + geom.inner(y, &geom.covariant(x, z)?);
    let bianchi = tensor::add(
        &tensor::add(&geom.riemann_apply(x, y, z)?, &geom.riemann_apply(y, z, x)?),
        &geom.riemann_apply(z, x, y)?,
    );
    Ok([tensor::max_abs(&torsion), (lhs - rhs).value().abs(), tensor::max_abs(&bianchi)])
}

/// Largest defect of `C^∞`-linearity of `R` in each slot under multiplication by `f`.
pub fn tensoriality_defect(geom: &LocalGeometry, x: &JetVec, y: &JetVec, z: &JetVec, f: &Jet) -> Result<f64> {
    let base = tensor::values(&geom.riemann_apply(x, y, z)?);
    let fx = tensor::scale(x, *f);
    let fy = tensor::scale(y, *f);
    let fz = tensor::scale(z, *f);
    let mut worst: f64 = 0.0;
    for r in [geom.riemann_apply(&fx, y, z)?, geom.riemann_apply(x, &fy, z)?, geom.riemann_apply(x, y, &fz)?] {
        let r = tensor::values(&r);
        for k in 0..3 {
            worst = worst.max((r[k] - f.value() * base[k]).abs());
        }
    }
    Ok(worst)
}

/// Builds a bounded composite expression in `x, y, z` from a choice stream.
/// Every node keeps arguments of `ln`, `sqrt` and denominators away from zero.
pub fn composite_expression(choices: &mut impl Iterator<Item = u32>, depth: u32) -> String {
    let mut next = || choices.next().unwrap_or(0);
    let leaf = |c: u32| match c % 4 {
        0 => "x".to_string(),
        1 => "y".to_string(),
        2 => "z".to_string(),
        _ => format!("{}", (c / 4 % 21) as f64 / 10.0 - 1.0),
    };
    if depth == 0 {
        return leaf(next());
    }
    let kind = next() % 11;
    if kind == 10 {
        return leaf(next());
    }
    let a = composite_expression(choices, depth - 1);
    match kind {
        0 => format!("({a} + {})", composite_expression(choices, depth - 1)),
        1 => format!("({a} - {})", composite_expression(choices, depth - 1)),
        2 => format!("({a} * {})", composite_expression(choices, depth - 1)),
        3 => format!("sin({a})"),
        4 => format!("cos({a})"),
        5 => format!("exp(sin({a}))"),
        6 => format!("sqrt(2 + cos({a}))"),
        7 => format!("ln(2 + sin({a}))"),
        8 => format!("{a} / (2 + cos({}))", composite_expression(choices, depth - 1)),
        _ => format!("({a})^2"),
    }
}

pub fn parse_xyz(text: &str) -> Expr {
    expr::parse(text, &[Axis::X, Axis::Y, Axis::Z]).expect("generated expression parses")
}

pub fn point(p: [f64; 3]) -> ChartPoint {
    ChartPoint::from_array(p)
}

/// Central differences at steps `h` and `h/2` combined by Richardson
/// extrapolation, which cancels the `O(h²)` truncation term.
pub fn extrapolated_differences<F>(f: F, p: [f64; 3]) -> ([f64; 3], [[f64; 3]; 3])
where
    F: Fn([f64; 3]) -> std::result::Result<f64, paracontact_core::jet::JetError> + Copy,
{
    const H: f64 = 4e-3;
    let coarse = paracontact_core::jet::finite_difference_oracle(f, p, H).unwrap();
    let fine = paracontact_core::jet::finite_difference_oracle(f, p, H / 2.0).unwrap();
    let mix = |c: f64, f: f64| (4.0 * f - c) / 3.0;
    let gradient = [0, 1, 2].map(|a| mix(coarse.gradient[a], fine.gradient[a]));
    let hessian = [0, 1, 2].map(|a| [0, 1, 2].map(|b| mix(coarse.hessian[a][b], fine.hessian[a][b])));
    (gradient, hessian)
}
