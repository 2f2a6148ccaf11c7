//! Paracontact metric structures `(φ, ξ, η, g)` and their pointwise checks.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::chart::{
    exterior_derivative, lie_derivative_tensor11, ChartPoint, LocalGeometry, MetricField, OneForm,
    Tensor11Field, VectorField,
};
use crate::error::{Error, Result};
use crate::tensor::{self, JetMat, JetVec};

/// Threshold on `tr(h²)/2` separating the h-types.
pub const H_TYPE_TOL: f64 = 1e-7;

/// Membership test for chart points, with a human-readable description.
#[derive(Clone)]
pub struct DomainPredicate {
    description: String,
    pred: Arc<dyn Fn(&ChartPoint) -> bool + Send + Sync>,
}

impl DomainPredicate {
    pub fn new<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(&ChartPoint) -> bool + Send + Sync + 'static,
    {
        DomainPredicate { description: description.into(), pred: Arc::new(f) }
    }

    pub fn everywhere() -> Self {
        DomainPredicate::new("R^3", |_| true)
    }

    pub fn contains(&self, p: &ChartPoint) -> bool {
        (self.pred)(p)
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Debug for DomainPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DomainPredicate({})", self.description)
    }
}

/// Closed-form paracontact metric structure on a chart domain.
#[derive(Clone, Debug)]
pub struct ParacontactStructure {
    pub label: String,
    pub phi: Tensor11Field,
    pub xi: VectorField,
    pub eta: OneForm,
    pub g: MetricField,
    pub domain: DomainPredicate,
}

/// All structure tensors at one point, with `h = ½ L_ξ φ`.
#[derive(Debug, Clone)]
pub struct PointData {
    pub point: ChartPoint,
    pub xi: JetVec,
    pub eta: JetVec,
    pub phi: JetMat,
    pub h: JetMat,
    pub geom: LocalGeometry,
}

impl PointData {
    /// `φ h` as a matrix.
    pub fn phi_h(&self) -> JetMat {
        tensor::mat_mul(&self.phi, &self.h)
    }

    /// `I - ξ ⊗ η`, the projector onto `ker η`.
    pub fn horizontal_projector(&self) -> JetMat {
        tensor::mat_sub(&tensor::identity(), &tensor::outer(&self.xi, &self.eta))
    }
}

impl ParacontactStructure {
    pub fn new(
        label: impl Into<String>,
        xi: VectorField,
        eta: OneForm,
        phi: Tensor11Field,
        g: MetricField,
        domain: DomainPredicate,
    ) -> Self {
        ParacontactStructure { label: label.into(), phi, xi, eta, g, domain }
    }

    pub fn contains(&self, p: &ChartPoint) -> bool {
        self.domain.contains(p)
    }

    pub fn evaluate(&self, p: &ChartPoint) -> Result<PointData> {
        if !self.contains(p) {
            return Err(Error::OutOfDomain(*p));
        }
        let seeds = p.seeds()?;
        let xi = self.xi.eval_seeds(&seeds)?;
        let eta = self.eta.eval_seeds(&seeds)?;
        let phi = self.phi.eval_seeds(&seeds)?;
        let geom = LocalGeometry::new(*p, self.g.eval_seeds(&seeds)?)?;
        let h = tensor::mat_scale_f(&lie_derivative_tensor11(&xi, &phi)?, 0.5);
        for row in phi.iter().chain(geom.metric().iter()) {
            if row.iter().any(|c| !c.is_finite()) {
                return Err(Error::DomainViolation(format!("non-finite structure component at {p}")));
            }
        }
        Ok(PointData { point: *p, xi, eta, phi, h, geom })
    }
}

/// Named pointwise defect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
}

fn residual(name: &str, value: f64) -> Residual {
    Residual { name: name.to_string(), value }
}

/// Number of positive and negative eigenvalues of a symmetric matrix.
pub fn signature(m: [[f64; 3]; 3]) -> (usize, usize) {
    let a = Matrix3::from_fn(|i, j| m[i][j]);
    let eig = SymmetricEigen::new(a).eigenvalues;
    let pos = eig.iter().filter(|v| **v > 0.0).count();
    let neg = eig.iter().filter(|v| **v < 0.0).count();
    (pos, neg)
}

/// `(η ∧ dη)_{123}` with the unnormalized exterior derivative.
pub fn contact_volume(eta: &JetVec) -> Result<f64> {
    let mut w = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let di = eta[j].partial(crate::jet::Axis::from_index(i))?.value();
            let dj = eta[i].partial(crate::jet::Axis::from_index(j))?.value();
            w[i][j] = di - dj;
        }
    }
    let e = tensor::values(eta);
    Ok(e[0] * w[1][2] - e[1] * w[0][2] + e[2] * w[0][1])
}

/// Axiom residuals at a point.
///
/// `signature` is 0 for signature `(+,+,-)` and 1 otherwise. `contact_volume`
/// compares `|η ∧ dη|` against `2 √|det g|`, which holds for any compatible structure.
pub fn check_structure_axioms(s: &ParacontactStructure, p: &ChartPoint) -> Result<Vec<Residual>> {
    let d = s.evaluate(p)?;
    axioms_from(&d)
}

pub(crate) fn axioms_from(d: &PointData) -> Result<Vec<Residual>> {
    let g = d.geom.metric();
    let phi2 = tensor::mat_mul(&d.phi, &d.phi);
    let proj = d.horizontal_projector();
    let gmetric = tensor::mat_sub(
        &tensor::mat_add(&tensor::mat_mul(&tensor::transpose(&d.phi), &tensor::mat_mul(g, &d.phi)), g),
        &tensor::outer(&d.eta, &d.eta),
    );
    let gphi = tensor::mat_mul(g, &d.phi);
    let mut compat: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let de = exterior_derivative(&d.eta, &tensor::basis(i), &tensor::basis(j))?;
            compat = compat.max((de - gphi[i][j]).value().abs());
        }
    }
    let (pos, neg) = signature(tensor::mat_values(g));
    let vol = contact_volume(&d.eta)?;
    let det = d.geom.det().value();
    Ok(vec![
        residual("eta_xi", (tensor::dot(&d.eta, &d.xi) - 1.0).value().abs()),
        residual("phi_squared", tensor::mat_max_abs(&tensor::mat_sub(&phi2, &proj))),
        residual("phi_xi", tensor::max_abs(&tensor::mat_vec(&d.phi, &d.xi))),
        residual("eta_phi", tensor::max_abs(&tensor::vec_mat(&d.eta, &d.phi))),
        residual("metric_compatibility", tensor::mat_max_abs(&gmetric)),
        residual("contact_compatibility", compat),
        residual("eigen_balance", tensor::trace(&d.phi).value().abs()),
        residual("signature", if pos == 2 && neg == 1 { 0.0 } else { 1.0 }),
        residual("contact_volume", (vol.abs() - 2.0 * det.abs().sqrt()).abs()),
        residual("reeb_dual", tensor::max_abs(&tensor::sub(&d.eta, &d.geom.lower(&d.xi)))),
    ])
}

/// Residuals of the algebraic properties of `h`.
pub(crate) fn h_properties_from(d: &PointData) -> Vec<Residual> {
    let hphi = tensor::mat_mul(&d.h, &d.phi);
    let gh = tensor::mat_mul(d.geom.metric(), &d.h);
    vec![
        residual("h_xi", tensor::max_abs(&tensor::mat_vec(&d.h, &d.xi))),
        residual("h_trace", tensor::trace(&d.h).value().abs()),
        residual("h_phi_trace", tensor::trace(&hphi).value().abs()),
        residual("h_anticommutes_phi", tensor::mat_max_abs(&tensor::mat_add(&hphi, &d.phi_h()))),
        residual("h_symmetric", tensor::mat_max_abs(&tensor::mat_sub(&gh, &tensor::transpose(&gh)))),
    ]
}

/// `h = ½ L_ξ φ` at `p` (values).
pub fn compute_h(s: &ParacontactStructure, p: &ChartPoint) -> Result<[[f64; 3]; 3]> {
    Ok(tensor::mat_values(&s.evaluate(p)?.h))
}

pub(crate) fn nabla_xi_from(d: &PointData) -> Result<f64> {
    let target = tensor::mat_sub(&d.phi_h(), &d.phi);
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let lhs = d.geom.covariant(&tensor::basis(i), &d.xi)?;
        let rhs = [target[0][i], target[1][i], target[2][i]];
        worst = worst.max(tensor::max_abs(&tensor::sub(&lhs, &rhs)));
    }
    Ok(worst)
}

/// `max_V |∇_V ξ - (-φV + φhV)|` over coordinate vectors.
pub fn check_nabla_xi(s: &ParacontactStructure, p: &ChartPoint) -> Result<f64> {
    nabla_xi_from(&s.evaluate(p)?)
}

/// Canonical type of `h` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HType {
    /// `h²` positive on `ker η`: real eigenvalues `±λ`.
    H1 { lambda: f64 },
    /// `h ≠ 0` with `h² = 0`.
    H2,
    /// `h²` negative on `ker η`: rotational form.
    H3 { lambda: f64 },
    /// `h = 0`; ξ is Killing at the point.
    Zero,
    /// `h²` not a multiple of the projector onto `ker η`.
    Degenerate,
}

pub(crate) fn classify_from(d: &PointData, tol: f64) -> HType {
    let h2 = tensor::mat_mul(&d.h, &d.h);
    let c = tensor::trace(&h2).value() / 2.0;
    if tensor::mat_max_abs(&d.h) <= tol {
        return HType::Zero;
    }
    let scalar = tensor::mat_sub(&h2, &tensor::mat_scale_f(&d.horizontal_projector(), c));
    if tensor::mat_max_abs(&scalar) > tol * c.abs().max(1.0) {
        return HType::Degenerate;
    }
    if c > tol {
        HType::H1 { lambda: c.sqrt() }
    } else if c < -tol {
        HType::H3 { lambda: (-c).sqrt() }
    } else {
        HType::H2
    }
}

pub fn classify_h_type(s: &ParacontactStructure, p: &ChartPoint) -> Result<HType> {
    Ok(classify_from(&s.evaluate(p)?, H_TYPE_TOL))
}

/// D-homothetic deformation: `η̄ = αη`, `ξ̄ = ξ/α`, `φ̄ = φ`, `ḡ = αg + α(α-1) η⊗η`.
pub fn d_homothetic_deform(s: &ParacontactStructure, alpha: f64) -> Result<ParacontactStructure> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::NonpositiveAlpha(alpha));
    }
    let (xi, eta, g) = (s.xi.clone(), s.eta.clone(), s.g.clone());
    let eta2 = eta.clone();
    let bar_g = MetricField::new(move |seeds| {
        let e = eta2.eval_seeds(seeds)?;
        let m = g.eval_seeds(seeds)?;
        Ok(tensor::mat_add(
            &tensor::mat_scale_f(&m, alpha),
            &tensor::mat_scale_f(&tensor::outer(&e, &e), alpha * (alpha - 1.0)),
        ))
    });
    Ok(ParacontactStructure {
        label: format!("{} (alpha={alpha})", s.label),
        phi: s.phi.clone(),
        xi: VectorField::new(move |seeds| Ok(tensor::scale_f(&xi.eval_seeds(seeds)?, 1.0 / alpha))),
        eta: OneForm::new(move |seeds| Ok(tensor::scale_f(&eta.eval_seeds(seeds)?, alpha))),
        g: bar_g,
        domain: s.domain.clone(),
    })
}

pub(crate) fn para_sasakian_from(d: &PointData) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let r = d.geom.riemann_apply(&tensor::basis(i), &tensor::basis(j), &d.xi)?;
            let rhs = tensor::sub(&tensor::scale(&tensor::basis(i), d.eta[j]), &tensor::scale(&tensor::basis(j), d.eta[i]));
            worst = worst.max(tensor::max_abs(&tensor::add(&r, &rhs)));
        }
    }
    Ok(worst)
}

/// `max |R(X,Y)ξ + η(Y)X - η(X)Y|` over coordinate pairs.
///
/// A small value means the curvature condition necessary for para-Sasakian
/// structures holds at `p`; it does not certify normality.
pub fn para_sasakian_residual(s: &ParacontactStructure, p: &ChartPoint) -> Result<f64> {
    para_sasakian_from(&s.evaluate(p)?)
}
