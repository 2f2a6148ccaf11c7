//! h-frames and extraction of the nullity functions `(κ, μ, ν)`.
//!
//! The frame `{ξ, X, φX}` has signs `ε = (+1, -1, +1)`. In the `κ > -1`
//! regime `X` is the unit timelike eigenvector of `h` for `+λ`; in the
//! `κ < -1` regime it is the unit timelike eigenvector of `φh` for `+λ`,
//! which gives `hX = λφX` and `hφX = -λX`.
//!
//! `κ, μ, ν` are fitted from `R(X,ξ)ξ` and `R(φX,ξ)ξ` by least squares on
//! jets, so their first derivatives are available to the checks.

use std::io::Write;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::chart::{directional, ChartPoint, SignedFrame};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::paracontact::{classify_from, HType, ParacontactStructure, PointData, Residual, H_TYPE_TOL};
use crate::tensor::{self, JetMat, JetVec};

/// Points with `λ` below this are excluded from frame-based checks.
pub const LAMBDA_MIN: f64 = 1e-3;

/// Largest accepted condition number of the normal-equation matrix.
pub const COND_MAX: f64 = 1e10;

/// Frame signs for `(ξ, X, φX)`.
pub const FRAME_SIGNS: [f64; 3] = [1.0, -1.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `κ > -1`, `h` of h1 type.
    KappaGt,
    /// `κ < -1`, `h` of h3 type.
    KappaLt,
}

#[derive(Debug, Clone, Copy)]
pub struct HFrame {
    pub x: JetVec,
    pub phi_x: JetVec,
    pub lambda: Jet,
    pub regime: Regime,
}

impl HFrame {
    pub fn signed_frame(&self, xi: &JetVec) -> SignedFrame {
        SignedFrame { vectors: [*xi, self.x, self.phi_x], signs: FRAME_SIGNS }
    }

    /// Same frame with `X → -X` (and so `φX → -φX`).
    pub fn flipped(&self) -> HFrame {
        HFrame { x: tensor::scale_f(&self.x, -1.0), phi_x: tensor::scale_f(&self.phi_x, -1.0), ..*self }
    }
}

fn frame_failure(d: &PointData, reason: &str) -> Error {
    Error::FrameFailure { point: d.point, reason: reason.to_string() }
}

/// Normalizes `v` to `g(v,v) = -1` and fixes its sign by the first
/// coordinate component that is not negligible.
fn timelike_unit(d: &PointData, v: &JetVec) -> Result<JetVec> {
    let n = d.geom.inner(v, v);
    if !(n.value() < 0.0) {
        return Err(frame_failure(d, "candidate vector for X is not timelike"));
    }
    let mut x = tensor::scale(v, (-n).sqrt()?.recip()?);
    let scale = tensor::max_abs(&x);
    if let Some(first) = x.iter().find(|c| c.value().abs() > 1e-12 * scale) {
        if first.value() < 0.0 {
            x = tensor::scale_f(&x, -1.0);
        }
    }
    Ok(x)
}

pub(crate) fn h_frame_from(d: &PointData) -> Result<HFrame> {
    let (t, regime) = match classify_from(d, H_TYPE_TOL) {
        HType::H1 { .. } => (d.h, Regime::KappaGt),
        HType::H3 { .. } => (d.phi_h(), Regime::KappaLt),
        HType::H2 => return Err(Error::H2TypeUnsupported(d.point)),
        HType::Zero => {
            return Err(Error::DegenerateH { point: d.point, reason: "h vanishes".into() })
        }
        HType::Degenerate => {
            return Err(Error::DegenerateH { point: d.point, reason: "h² is not scalar on ker η".into() })
        }
    };
    let t2 = tensor::mat_mul(&t, &t);
    let lambda = (tensor::trace(&t2) * 0.5).sqrt()?;
    // Columns of T² + λT span the +λ eigenline.
    let p = tensor::mat_add(&t2, &tensor::mat_scale(&t, lambda));
    let col = |j: usize| [p[0][j], p[1][j], p[2][j]];
    let norm = |v: &JetVec| tensor::values(v).iter().map(|c| c * c).sum::<f64>();
    let best = (0..3)
        .max_by(|a, b| norm(&col(*a)).total_cmp(&norm(&col(*b))))
        .unwrap_or(0);
    let x = timelike_unit(d, &col(best))?;
    let phi_x = tensor::mat_vec(&d.phi, &x);
    Ok(HFrame { x, phi_x, lambda, regime })
}

pub fn build_h_frame(s: &ParacontactStructure, p: &ChartPoint) -> Result<HFrame> {
    h_frame_from(&s.evaluate(p)?)
}

/// Orthonormal frame `{ξ, X, φX}` for `h = 0`: `X` is built from the most
/// timelike projection of a coordinate vector onto `ker η`.
pub(crate) fn killing_frame_from(d: &PointData) -> Result<SignedFrame> {
    let proj = d.horizontal_projector();
    let candidates: Vec<JetVec> = (0..3).map(|i| [proj[0][i], proj[1][i], proj[2][i]]).collect();
    let best = candidates
        .iter()
        .max_by(|a, b| {
            let na = d.geom.inner(a, a).value().abs();
            let nb = d.geom.inner(b, b).value().abs();
            na.total_cmp(&nb)
        })
        .copied()
        .ok_or_else(|| frame_failure(d, "no candidate vector"))?;
    if !(d.geom.inner(&best, &best).value().abs() > 1e-12) {
        return Err(frame_failure(d, "ker η projection is null"));
    }
    let u = if d.geom.inner(&best, &best).value() < 0.0 { best } else { tensor::mat_vec(&d.phi, &best) };
    let x = timelike_unit(d, &u)?;
    let phi_x = tensor::mat_vec(&d.phi, &x);
    Ok(SignedFrame { vectors: [d.xi, x, phi_x], signs: FRAME_SIGNS })
}

/// Residuals of the h-frame relations and of orthonormality.
pub(crate) fn frame_residuals_from(d: &PointData, f: &HFrame) -> Vec<Residual> {
    let hx = tensor::mat_vec(&d.h, &f.x);
    let hpx = tensor::mat_vec(&d.h, &f.phi_x);
    let (tx, tpx) = match f.regime {
        Regime::KappaGt => (tensor::scale(&f.x, f.lambda), tensor::scale(&f.phi_x, -f.lambda)),
        Regime::KappaLt => (tensor::scale(&f.phi_x, f.lambda), tensor::scale(&f.x, -f.lambda)),
    };
    let frame_defect = tensor::max_abs(&tensor::sub(&hx, &tx))
        .max(tensor::max_abs(&tensor::sub(&hpx, &tpx)))
        .max(tensor::max_abs(&tensor::mat_vec(&d.h, &d.xi)));
    vec![
        Residual { name: "h_frame".into(), value: frame_defect },
        Residual { name: "frame_orthonormality".into(), value: f.signed_frame(&d.xi).orthonormality_residual(&d.geom) },
    ]
}

/// Nullity functions at a point. `mu` and `nu` are absent when `h = 0`.
#[derive(Debug, Clone, Copy)]
pub struct NullityCoefficients {
    pub kappa: Jet,
    pub mu: Option<Jet>,
    pub nu: Option<Jet>,
    pub lambda: Jet,
    /// `X(λ)`.
    pub a: Jet,
    /// `φX(λ)`.
    pub b: Jet,
    /// Largest component of `R(V,ξ)ξ - (κV + μhV + νφhV)` over `V ∈ {X, φX}`.
    pub residual: f64,
    pub regime: Option<Regime>,
    pub condition: f64,
}

impl NullityCoefficients {
    pub fn h_zero(&self) -> bool {
        self.regime.is_none()
    }
}

fn condition_number(n: &JetMat) -> f64 {
    let m = Matrix3::from_fn(|i, j| n[i][j].value());
    let eig = SymmetricEigen::new(m).eigenvalues;
    let max = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let min = eig.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

pub(crate) fn extract_with_frame(d: &PointData, frame: &HFrame) -> Result<NullityCoefficients> {
    let phi_h = d.phi_h();
    let vs = [frame.x, frame.phi_x];
    let es = [(frame.x, FRAME_SIGNS[1]), (frame.phi_x, FRAME_SIGNS[2])];
    let mut rows: Vec<[Jet; 3]> = Vec::with_capacity(4);
    let mut rhs: Vec<Jet> = Vec::with_capacity(4);
    let mut curv = Vec::with_capacity(2);
    let mut bases = Vec::with_capacity(2);
    for v in &vs {
        let r = d.geom.riemann_apply(v, &d.xi, &d.xi)?;
        let basis = [*v, tensor::mat_vec(&d.h, v), tensor::mat_vec(&phi_h, v)];
        for (e, eps) in &es {
            let comp = |w: &JetVec| d.geom.inner(w, e) * *eps;
            rows.push([comp(&basis[0]), comp(&basis[1]), comp(&basis[2])]);
            rhs.push(comp(&r));
        }
        curv.push(r);
        bases.push(basis);
    }
    let mut n = tensor::zero_mat();
    let mut mtb = tensor::zero_vec();
    for (row, b) in rows.iter().zip(&rhs) {
        for i in 0..3 {
            mtb[i] += row[i] * *b;
            for j in 0..3 {
                n[i][j] += row[i] * row[j];
            }
        }
    }
    let condition = condition_number(&n);
    if !(condition <= COND_MAX) {
        return Err(Error::IllConditionedSolve { condition });
    }
    let sol = tensor::mat_vec(&tensor::inverse(&n, 0.0)?, &mtb);
    let mut residual: f64 = 0.0;
    for (r, basis) in curv.iter().zip(&bases) {
        let fit = tensor::combine(&[(sol[0], &basis[0]), (sol[1], &basis[1]), (sol[2], &basis[2])]);
        residual = residual.max(tensor::max_abs(&tensor::sub(r, &fit)));
    }
    Ok(NullityCoefficients {
        kappa: sol[0],
        mu: Some(sol[1]),
        nu: Some(sol[2]),
        lambda: frame.lambda,
        a: directional(&frame.x, &frame.lambda)?,
        b: directional(&frame.phi_x, &frame.lambda)?,
        residual,
        regime: Some(frame.regime),
        condition,
    })
}

fn extract_killing(d: &PointData) -> Result<NullityCoefficients> {
    let frame = killing_frame_from(d)?;
    let mut kappa = Jet::zero();
    let mut curv = Vec::with_capacity(2);
    for idx in [1usize, 2] {
        let v = frame.vectors[idx];
        let r = d.geom.riemann_apply(&v, &d.xi, &d.xi)?;
        // component of R(V,ξ)ξ along V
        kappa += d.geom.inner(&r, &v) * frame.signs[idx];
        curv.push((v, r));
    }
    kappa = kappa * 0.5;
    let residual = curv
        .iter()
        .map(|(v, r)| tensor::max_abs(&tensor::sub(r, &tensor::scale(v, kappa))))
        .fold(0.0, f64::max);
    Ok(NullityCoefficients {
        kappa,
        mu: None,
        nu: None,
        lambda: Jet::zero(),
        a: Jet::zero(),
        b: Jet::zero(),
        residual,
        regime: None,
        condition: 1.0,
    })
}

pub(crate) fn extract_from(d: &PointData) -> Result<NullityCoefficients> {
    match classify_from(d, H_TYPE_TOL) {
        HType::Zero => extract_killing(d),
        _ => extract_with_frame(d, &h_frame_from(d)?),
    }
}

pub fn extract_nullity(s: &ParacontactStructure, p: &ChartPoint) -> Result<NullityCoefficients> {
    extract_from(&s.evaluate(p)?)
}

/// `max |R(∂i,∂j)ξ - [κ(η_j ∂i - η_i ∂j) + μ(η_j h∂i - η_i h∂j) + ν(η_j φh∂i - η_i φh∂j)]|`.
pub(crate) fn paranullity_from(d: &PointData, n: &NullityCoefficients) -> Result<f64> {
    let phi_h = d.phi_h();
    let mu = n.mu.unwrap_or_default();
    let nu = n.nu.unwrap_or_default();
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let (ei, ej) = (tensor::basis(i), tensor::basis(j));
            let r = d.geom.riemann_apply(&ei, &ej, &d.xi)?;
            let pair = |m: &JetMat| {
                tensor::sub(&tensor::scale(&tensor::mat_vec(m, &ei), d.eta[j]), &tensor::scale(&tensor::mat_vec(m, &ej), d.eta[i]))
            };
            let rhs = tensor::combine(&[
                (n.kappa, &pair(&tensor::identity())),
                (mu, &pair(&d.h)),
                (nu, &pair(&phi_h)),
            ]);
            worst = worst.max(tensor::max_abs(&tensor::sub(&r, &rhs)));
        }
    }
    Ok(worst)
}

/// First-order invariants of the nullity functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionalInvariants {
    pub xi_kappa: f64,
    pub xi_mu: f64,
    pub a: f64,
    pub b: f64,
    /// `|h grad μ - grad κ|`.
    pub h_grad_mu: f64,
    /// `|Xμ - 2A|` for `κ > -1`, `|Xμ - 2B|` for `κ < -1`.
    pub x_mu: f64,
    /// `|φXμ + 2B|` for `κ > -1`, `|φXμ + 2A|` for `κ < -1`.
    pub phi_x_mu: f64,
}

pub(crate) fn directional_from(d: &PointData, frame: &HFrame, n: &NullityCoefficients) -> Result<DirectionalInvariants> {
    let mu = n.mu.ok_or_else(|| Error::RegimeMismatch("μ is undefined where h = 0".into()))?;
    let grad_k = d.geom.gradient(&n.kappa)?;
    let grad_m = d.geom.gradient(&mu)?;
    let h_grad = tensor::sub(&tensor::mat_vec(&d.h, &grad_m), &grad_k);
    let x_mu = directional(&frame.x, &mu)?.value();
    let px_mu = directional(&frame.phi_x, &mu)?.value();
    let (a, b) = (n.a.value(), n.b.value());
    let (x_target, px_target) = match frame.regime {
        Regime::KappaGt => (2.0 * a, -2.0 * b),
        Regime::KappaLt => (2.0 * b, -2.0 * a),
    };
    Ok(DirectionalInvariants {
        xi_kappa: directional(&d.xi, &n.kappa)?.value(),
        xi_mu: directional(&d.xi, &mu)?.value(),
        a,
        b,
        h_grad_mu: tensor::max_abs(&h_grad),
        x_mu: (x_mu - x_target).abs(),
        phi_x_mu: (px_mu - px_target).abs(),
    })
}

pub fn directional_invariants(s: &ParacontactStructure, p: &ChartPoint) -> Result<DirectionalInvariants> {
    let d = s.evaluate(p)?;
    let frame = h_frame_from(&d)?;
    let n = extract_with_frame(&d, &frame)?;
    directional_from(&d, &frame, &n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `μ = 2(1 + λ)`.
    Plus,
    /// `μ = 2(1 - λ)`.
    Minus,
    /// `λ < LAMBDA_MIN`; the branches coincide.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuBranch {
    pub branch: Branch,
    pub plus_residual: f64,
    pub minus_residual: f64,
    /// `(1 + λ - μ/2)(1 - λ - μ/2)`.
    pub f_residual: f64,
}

pub(crate) fn mu_branch_from(n: &NullityCoefficients) -> Result<MuBranch> {
    if n.regime == Some(Regime::KappaLt) {
        return Err(Error::RegimeMismatch("μ branches are defined for κ > -1 only".into()));
    }
    let lambda = n.lambda.value();
    let mu = n.mu.map(|m| m.value()).unwrap_or(2.0);
    let plus = (mu - 2.0 * (1.0 + lambda)).abs();
    let minus = (mu - 2.0 * (1.0 - lambda)).abs();
    let f_residual = ((1.0 + lambda - mu / 2.0) * (1.0 - lambda - mu / 2.0)).abs();
    let branch = if lambda < LAMBDA_MIN {
        Branch::Degenerate
    } else if plus <= minus {
        Branch::Plus
    } else {
        Branch::Minus
    };
    Ok(MuBranch { branch, plus_residual: plus, minus_residual: minus, f_residual })
}

pub fn mu_branch_classify(s: &ParacontactStructure, p: &ChartPoint) -> Result<MuBranch> {
    mu_branch_from(&extract_nullity(s, p)?)
}

/// One CSV row of a nullity scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullityRow {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub kappa: f64,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub lambda: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub residual: f64,
}

impl NullityRow {
    pub fn new(p: &ChartPoint, n: &NullityCoefficients) -> Self {
        NullityRow {
            x: p.x,
            y: p.y,
            z: p.z,
            kappa: n.kappa.value(),
            mu: n.mu.map(|m| m.value()),
            nu: n.nu.map(|m| m.value()),
            lambda: n.lambda.value(),
            a: n.a.value(),
            b: n.b.value(),
            residual: n.residual,
        }
    }
}

/// Writes rows with header `x,y,z,kappa,mu,nu,lambda,A,B,residual`.
pub fn write_nullity_csv<W: Write>(rows: &[NullityRow], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    if rows.is_empty() {
        w.write_record(["x", "y", "z", "kappa", "mu", "nu", "lambda", "A", "B", "residual"])
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, example_preset, parse_scalar_function, FamilyCase, Interval, Manifest};
    use approx::assert_abs_diff_eq;

    #[test]
    fn example_nullity_at_probe() {
        let s = example_preset();
        let p = ChartPoint::new(1.0, 1.0, 2.0);
        let d = s.evaluate(&p).unwrap();
        let frame = h_frame_from(&d).unwrap();
        assert_eq!(frame.regime, Regime::KappaGt);
        assert_abs_diff_eq!(frame.lambda.value(), 2.0, epsilon = 1e-12);
        for r in frame_residuals_from(&d, &frame) {
            assert!(r.value < 1e-8, "{} = {}", r.name, r.value);
        }
        let rx = d.geom.riemann_apply(&frame.x, &d.xi, &d.xi).unwrap();
        let rpx = d.geom.riemann_apply(&frame.phi_x, &d.xi, &d.xi).unwrap();
        for k in 0..3 {
            assert_abs_diff_eq!(rx[k].value(), 15.0 * frame.x[k].value(), epsilon = 1e-9);
            assert_abs_diff_eq!(rpx[k].value(), -9.0 * frame.phi_x[k].value(), epsilon = 1e-9);
        }
        let n = extract_from(&d).unwrap();
        assert_abs_diff_eq!(n.kappa.value(), 3.0, epsilon = 1e-7);
        assert_abs_diff_eq!(n.mu.unwrap().value(), 6.0, epsilon = 1e-7);
        assert_abs_diff_eq!(n.nu.unwrap().value(), 0.0, epsilon = 1e-7);
        assert!(n.residual < 1e-8);
        assert!(paranullity_from(&d, &n).unwrap() < 1e-8);
        assert_eq!(mu_branch_from(&n).unwrap().branch, Branch::Plus);
        let inv = directional_from(&d, &frame, &n).unwrap();
        // X = ±(a, b, 1) with a = -1 here, so the tie-break picks X^z = -1 and A = -r'.
        assert_abs_diff_eq!(frame.x[2].value(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.a, -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(inv.b, 0.0, epsilon = 1e-9);
        assert!(inv.xi_kappa.abs() < 1e-7 && inv.xi_mu.abs() < 1e-7);
        assert!(inv.h_grad_mu < 1e-7 && inv.x_mu < 1e-7 && inv.phi_x_mu < 1e-7);
    }

    #[test]
    fn flipped_frame_gives_same_coefficients() {
        let s = example_preset();
        let d = s.evaluate(&ChartPoint::new(-0.3, 0.8, 1.4)).unwrap();
        let f = h_frame_from(&d).unwrap();
        let a = extract_with_frame(&d, &f).unwrap();
        let b = extract_with_frame(&d, &f.flipped()).unwrap();
        assert_abs_diff_eq!(a.kappa.value(), b.kappa.value(), epsilon = 1e-9);
        assert_abs_diff_eq!(a.mu.unwrap().value(), b.mu.unwrap().value(), epsilon = 1e-9);
        assert_abs_diff_eq!(a.nu.unwrap().value(), b.nu.unwrap().value(), epsilon = 1e-9);
    }

    #[test]
    fn second_family_minus_branch() {
        let zero = parse_scalar_function("0").unwrap();
        let s = build_family(FamilyCase::Case2, &parse_scalar_function("z+2").unwrap(), &zero, &zero, Interval::new(0.0, 3.0)).unwrap();
        let n = extract_nullity(&s, &ChartPoint::new(0.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(n.kappa.value(), 8.0, epsilon = 1e-7);
        assert_abs_diff_eq!(n.mu.unwrap().value(), -4.0, epsilon = 1e-7);
        assert_eq!(mu_branch_from(&n).unwrap().branch, Branch::Minus);
        assert_abs_diff_eq!(n.a.value(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(n.b.value(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn rotational_structure_regime() {
        let s = Manifest::preset("h3-sl2").unwrap().build().unwrap();
        let p = ChartPoint::new(0.2, -0.4, 0.3);
        let d = s.evaluate(&p).unwrap();
        let f = h_frame_from(&d).unwrap();
        assert_eq!(f.regime, Regime::KappaLt);
        assert_abs_diff_eq!(f.lambda.value(), 1.5, epsilon = 1e-10);
        for r in frame_residuals_from(&d, &f) {
            assert!(r.value < 1e-8, "{} = {}", r.name, r.value);
        }
        let n = extract_with_frame(&d, &f).unwrap();
        assert_abs_diff_eq!(n.kappa.value(), -3.25, epsilon = 1e-8);
        assert_abs_diff_eq!(n.mu.unwrap().value(), -2.0, epsilon = 1e-8);
        assert!(matches!(mu_branch_from(&n), Err(Error::RegimeMismatch(_))));
    }

    #[test]
    fn killing_structure() {
        let s = Manifest::preset("heisenberg").unwrap().build().unwrap();
        let p = ChartPoint::new(0.5, -0.25, 2.0);
        assert!(matches!(build_h_frame(&s, &p), Err(Error::DegenerateH { .. })));
        let n = extract_nullity(&s, &p).unwrap();
        assert!(n.h_zero());
        assert_abs_diff_eq!(n.kappa.value(), -1.0, epsilon = 1e-10);
        assert!(n.residual < 1e-10);
        assert_eq!(mu_branch_from(&n).unwrap().branch, Branch::Degenerate);
    }

    #[test]
    fn example_negative_z_has_no_timelike_frame() {
        let s = example_preset();
        assert!(matches!(build_h_frame(&s, &ChartPoint::new(0.0, 0.0, -1.0)), Err(Error::FrameFailure { .. })));
    }

    #[test]
    fn csv_layout() {
        let s = example_preset();
        let p = ChartPoint::new(0.0, 0.5, 1.5);
        let row = NullityRow::new(&p, &extract_nullity(&s, &p).unwrap());
        let mut buf = Vec::new();
        write_nullity_csv(&[row, row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y,z,kappa,mu,nu,lambda,A,B,residual");
        assert_eq!(lines.len(), 3);
        let mut empty = Vec::new();
        write_nullity_csv(&[], &mut empty).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().trim(), "x,y,z,kappa,mu,nu,lambda,A,B,residual");
    }
}
