//! Entry tables and pointwise defects for each suite.
//!
//! Every suite function returns defects in the order of its entry table.
//! Left-hand sides come from the connection and curvature of the metric;
//! right-hand sides only use the h-frame and the fitted `κ, μ, λ, A, B`.

use crate::chart::{directional, lie_bracket};
use crate::error::Result;
use crate::jet::Jet;
use crate::nullity::{mu_branch_from, paranullity_from, Branch, HFrame, NullityCoefficients};
use crate::paracontact::{axioms_from, h_properties_from, nabla_xi_from, PointData};
use crate::tensor::{self, JetVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    /// At most one derivative of the structure tensors.
    FirstOrder,
    /// Curvature, nullity functions or their derivatives.
    Curvature,
}

#[derive(Debug, Clone)]
pub struct EntryDef {
    pub name: String,
    pub anchor: &'static str,
    pub tier: Tier,
    /// Divides by `λ`; tolerance is scaled by `max(1, 1/λ_min)`.
    pub inverse_lambda: bool,
}

fn def(prefix: &str, name: &str, anchor: &'static str, tier: Tier, inverse_lambda: bool) -> EntryDef {
    EntryDef { name: format!("{prefix}.{name}"), anchor, tier, inverse_lambda }
}

use Tier::{Curvature as C, FirstOrder as F};

pub fn axiom_defs(prefix: &str) -> Vec<EntryDef> {
    [
        ("eta_xi", "η(ξ) = 1", F),
        ("phi_squared", "φ² = I - η⊗ξ", F),
        ("phi_xi", "φξ = 0", F),
        ("eta_phi", "η∘φ = 0", F),
        ("metric_compatibility", "g(φX,φY) = -g(X,Y) + η(X)η(Y)", F),
        ("contact_compatibility", "dη(X,Y) = g(X,φY), dη(X,Y) = ½(Xη(Y) - Yη(X) - η([X,Y]))", F),
        ("eigen_balance", "tr φ = 0: eigenvalues +1 and -1 once each on ker η", F),
        ("signature", "g has signature (+,+,-) (0 = yes, 1 = no)", F),
        ("contact_volume", "|(η∧dη)_xyz| = 2√|det g|, unnormalized d", F),
        ("reeb_dual", "η = g(ξ,·)", F),
        ("h_xi", "hξ = 0", F),
        ("h_trace", "tr h = 0", F),
        ("h_phi_trace", "tr hφ = 0", F),
        ("h_anticommutes_phi", "hφ + φh = 0", F),
        ("h_symmetric", "g(hX,Y) = g(X,hY)", F),
        ("nabla_xi", "∇ξ = -φ + φh", F),
    ]
    .into_iter()
    .map(|(n, a, t)| def(prefix, n, a, t, false))
    .collect()
}

pub fn axiom_values(d: &PointData) -> Result<Vec<f64>> {
    let mut out: Vec<f64> = axioms_from(d)?.into_iter().map(|r| r.value).collect();
    out.extend(h_properties_from(d).into_iter().map(|r| r.value));
    out.push(nabla_xi_from(d)?);
    Ok(out)
}

pub fn l1_defs() -> Vec<EntryDef> {
    vec![
        def("l1", "h_squared", "h² = (1+κ)φ²", C, false),
        def("l1", "xi_kappa", "ξ(κ) = 0", C, false),
        def("l1", "ricci_xi", "Qξ = 2κξ", C, false),
        def("l1", "ricci_operator", "Q = (τ/2 - κ)I + (-τ/2 + 3κ)η⊗ξ + μh", C, false),
    ]
}

pub fn l1_values(d: &PointData, n: &NullityCoefficients) -> Result<Vec<f64>> {
    let h2 = tensor::mat_mul(&d.h, &d.h);
    let phi2 = tensor::mat_mul(&d.phi, &d.phi);
    let hsq = tensor::mat_sub(&h2, &tensor::mat_scale(&phi2, n.kappa + 1.0));
    let (q, tau) = d.geom.ricci_and_scalar()?;
    let q_xi = tensor::sub(&tensor::mat_vec(&q, &d.xi), &tensor::scale(&d.xi, n.kappa * 2.0));
    let mu = n.mu.unwrap_or_default();
    let model = tensor::mat_add(
        &tensor::mat_add(
            &tensor::mat_scale(&tensor::identity(), tau * 0.5 - n.kappa),
            &tensor::mat_scale(&tensor::outer(&d.xi, &d.eta), n.kappa * 3.0 - tau * 0.5),
        ),
        &tensor::mat_scale(&d.h, mu),
    );
    Ok(vec![
        tensor::mat_max_abs(&hsq),
        directional(&d.xi, &n.kappa)?.value().abs(),
        tensor::max_abs(&q_xi),
        tensor::mat_max_abs(&tensor::mat_sub(&q, &model)),
    ])
}

/// Frame quantities shared by the two connection suites.
struct FrameData {
    x: JetVec,
    px: JetVec,
    xi: JetVec,
    lambda: Jet,
    mu: Jet,
    a: Jet,
    b: Jet,
}

impl FrameData {
    fn new(d: &PointData, f: &HFrame, n: &NullityCoefficients) -> Self {
        FrameData {
            x: f.x,
            px: f.phi_x,
            xi: d.xi,
            lambda: f.lambda,
            mu: n.mu.unwrap_or_default(),
            a: n.a,
            b: n.b,
        }
    }

    fn b_over(&self) -> Result<Jet> {
        Ok(self.b.checked_div(&(self.lambda * 2.0))?)
    }

    fn a_over(&self) -> Result<Jet> {
        Ok(self.a.checked_div(&(self.lambda * 2.0))?)
    }
}

fn dist(a: &JetVec, terms: &[(Jet, &JetVec)]) -> f64 {
    tensor::max_abs(&tensor::sub(a, &tensor::combine(terms)))
}

/// Shared tail: `h grad μ = grad κ`, `Xμ`, `φXμ`, `ξ(A)`, `ξ(B)`, `grad λ`, `[ξ, φ grad λ]`.
fn derivative_identities(
    d: &PointData,
    fd: &FrameData,
    n: &NullityCoefficients,
    targets: [(Jet, Jet); 4],
) -> Result<Vec<f64>> {
    let grad_k = d.geom.gradient(&n.kappa)?;
    let grad_m = d.geom.gradient(&fd.mu)?;
    let grad_l = d.geom.gradient(&fd.lambda)?;
    let [x_mu, px_mu, xi_a, xi_b] = targets;
    let phi_grad = tensor::mat_vec(&d.phi, &grad_l);
    Ok(vec![
        tensor::max_abs(&tensor::sub(&tensor::mat_vec(&d.h, &grad_m), &grad_k)),
        (directional(&fd.x, &fd.mu)? - x_mu.0 * x_mu.1).value().abs(),
        (directional(&fd.px, &fd.mu)? - px_mu.0 * px_mu.1).value().abs(),
        (directional(&fd.xi, &fd.a)? - xi_a.0 * xi_a.1).value().abs(),
        (directional(&fd.xi, &fd.b)? - xi_b.0 * xi_b.1).value().abs(),
        dist(&grad_l, &[(-fd.a, &fd.x), (fd.b, &fd.px)]),
        tensor::max_abs(&lie_bracket(&fd.xi, &phi_grad)?),
    ])
}

pub fn l2_defs() -> Vec<EntryDef> {
    vec![
        def("l2", "nabla_frame_xi", "∇_X ξ = (λ-1)φX, ∇_φX ξ = -(λ+1)X", F, false),
        def("l2", "nabla_xi_frame", "∇_ξ X = -(μ/2)φX, ∇_ξ φX = -(μ/2)X", C, false),
        def("l2", "nabla_frame_self", "∇_X X = -(B/2λ)φX, ∇_φX φX = -(A/2λ)X", C, true),
        def("l2", "nabla_frame_cross", "∇_φX X = -(A/2λ)φX - (λ+1)ξ, ∇_X φX = -(B/2λ)X + (1-λ)ξ", C, true),
        def("l2", "bracket_xi_frame", "[ξ,X] = (1-λ-μ/2)φX, [ξ,φX] = (1+λ-μ/2)X", C, false),
        def("l2", "bracket_frame", "[X,φX] = -(B/2λ)X + (A/2λ)φX + 2ξ", C, true),
        def("l2", "h_grad_mu", "h grad μ = grad κ", C, false),
        def("l2", "x_mu", "Xμ = 2A", C, false),
        def("l2", "phi_x_mu", "φXμ = -2B", C, false),
        def("l2", "xi_a", "ξ(A) = (1-λ-μ/2)B", C, false),
        def("l2", "xi_b", "ξ(B) = (1+λ-μ/2)A", C, false),
        def("l2", "grad_lambda", "grad λ = -AX + BφX", C, false),
        def("l2", "xi_phi_grad_lambda", "[ξ, φ grad λ] = 0", C, false),
    ]
}

pub fn l2_values(d: &PointData, f: &HFrame, n: &NullityCoefficients) -> Result<Vec<f64>> {
    let fd = FrameData::new(d, f, n);
    let g = &d.geom;
    let (x, px, xi, l, half_mu) = (&fd.x, &fd.px, &fd.xi, fd.lambda, fd.mu * 0.5);
    let (ba, aa) = (fd.b_over()?, fd.a_over()?);
    let c1 = 1.0 - l - half_mu;
    let c2 = l + 1.0 - half_mu;
    let mut out = vec![
        dist(&g.covariant(x, xi)?, &[(l - 1.0, px)]).max(dist(&g.covariant(px, xi)?, &[(-(l + 1.0), x)])),
        dist(&g.covariant(xi, x)?, &[(-half_mu, px)]).max(dist(&g.covariant(xi, px)?, &[(-half_mu, x)])),
        dist(&g.covariant(x, x)?, &[(-ba, px)]).max(dist(&g.covariant(px, px)?, &[(-aa, x)])),
        dist(&g.covariant(px, x)?, &[(-aa, px), (-(l + 1.0), xi)])
            .max(dist(&g.covariant(x, px)?, &[(-ba, x), (1.0 - l, xi)])),
        dist(&lie_bracket(xi, x)?, &[(c1, px)]).max(dist(&lie_bracket(xi, px)?, &[(c2, x)])),
        dist(&lie_bracket(x, px)?, &[(-ba, x), (aa, px), (Jet::constant(2.0), xi)]),
    ];
    let two = Jet::constant(2.0);
    out.extend(derivative_identities(d, &fd, n, [(two, fd.a), (-two, fd.b), (c1, fd.b), (c2, fd.a)])?);
    Ok(out)
}

pub fn l3_defs() -> Vec<EntryDef> {
    vec![
        def("l3", "h_frame", "hX = λφX, hφX = -λX", F, false),
        def("l3", "nabla_frame_xi", "∇_X ξ = -φX + λX, ∇_φX ξ = -X - λφX", F, false),
        def("l3", "nabla_xi_frame", "∇_ξ X = -(μ/2)φX, ∇_ξ φX = -(μ/2)X", C, false),
        def("l3", "nabla_frame_self", "∇_X X = -(B/2λ)φX + λξ, ∇_φX φX = -(A/2λ)X + λξ", C, true),
        def("l3", "nabla_frame_cross", "∇_φX X = -(A/2λ)φX - ξ, ∇_X φX = -(B/2λ)X + ξ", C, true),
        def("l3", "bracket_xi_frame", "[ξ,X] = -λX + (1-μ/2)φX, [ξ,φX] = (1-μ/2)X + λφX", C, false),
        def("l3", "bracket_frame", "[X,φX] = -(B/2λ)X + (A/2λ)φX + 2ξ", C, true),
        def("l3", "h_grad_mu", "h grad μ = grad κ", C, false),
        def("l3", "x_mu", "Xμ = 2B", C, false),
        def("l3", "phi_x_mu", "φXμ = -2A", C, false),
        def("l3", "xi_a", "ξ(A) = -λA + (1-μ/2)B", C, false),
        def("l3", "xi_b", "ξ(B) = (1-μ/2)A + λB", C, false),
        def("l3", "grad_lambda", "grad λ = -AX + BφX", C, false),
        def("l3", "xi_phi_grad_lambda", "[ξ, φ grad λ] = 0", C, false),
    ]
}

pub fn l3_values(d: &PointData, f: &HFrame, n: &NullityCoefficients) -> Result<Vec<f64>> {
    let fd = FrameData::new(d, f, n);
    let g = &d.geom;
    let (x, px, xi, l, half_mu) = (&fd.x, &fd.px, &fd.xi, fd.lambda, fd.mu * 0.5);
    let (ba, aa) = (fd.b_over()?, fd.a_over()?);
    let one = Jet::one();
    let c = 1.0 - half_mu;
    let hx = tensor::mat_vec(&d.h, x);
    let hpx = tensor::mat_vec(&d.h, px);
    let mut out = vec![
        dist(&hx, &[(l, px)]).max(dist(&hpx, &[(-l, x)])),
        dist(&g.covariant(x, xi)?, &[(-one, px), (l, x)]).max(dist(&g.covariant(px, xi)?, &[(-one, x), (-l, px)])),
        dist(&g.covariant(xi, x)?, &[(-half_mu, px)]).max(dist(&g.covariant(xi, px)?, &[(-half_mu, x)])),
        dist(&g.covariant(x, x)?, &[(-ba, px), (l, xi)]).max(dist(&g.covariant(px, px)?, &[(-aa, x), (l, xi)])),
        dist(&g.covariant(px, x)?, &[(-aa, px), (-one, xi)]).max(dist(&g.covariant(x, px)?, &[(-ba, x), (one, xi)])),
        dist(&lie_bracket(xi, x)?, &[(-l, x), (c, px)]).max(dist(&lie_bracket(xi, px)?, &[(c, x), (l, px)])),
        dist(&lie_bracket(x, px)?, &[(-ba, x), (aa, px), (Jet::constant(2.0), xi)]),
    ];
    let two = Jet::constant(2.0);
    // ξ(A) = -λA + cB and ξ(B) = cA + λB, written as single products below.
    let xi_a_target = (one, -(l * fd.a) + c * fd.b);
    let xi_b_target = (one, c * fd.a + l * fd.b);
    out.extend(derivative_identities(d, &fd, n, [(two, fd.b), (-two, fd.a), xi_a_target, xi_b_target])?);
    Ok(out)
}

pub fn curvature_defs() -> Vec<EntryDef> {
    vec![
        def("curvature", "h_frame", "hX = λX, hφX = -λφX (h1) or hX = λφX, hφX = -λX (h3)", F, false),
        def("curvature", "frame_orthonormality", "g(e_i,e_j) = ε_i δ_ij with ε = (ξ:+1, X:-1, φX:+1)", F, false),
        def("curvature", "nullity_fit", "R(V,ξ)ξ = κV + μhV + νφhV for V = X, φX", C, false),
        def("curvature", "nu_vanishes", "ν = 0", C, false),
        def("curvature", "paranullity", "R(X,Y)ξ = κ(η(Y)X - η(X)Y) + μ(η(Y)hX - η(X)hY) + ν(η(Y)φhX - η(X)φhY)", C, false),
        def("curvature", "lambda_squared", "λ² = |1+κ|", C, false),
        def("curvature", "laplacian_formula", "Δλ = -X(A) + φX(B) + (A² - B²)/(2λ)", C, true),
        def("curvature", "laplacian_forms", "Σ ε_i (e_i e_i λ - (∇_{e_i} e_i)λ) = |g|^{-1/2} ∂_i(|g|^{1/2} g^{ij} ∂_j λ)", C, false),
        def("curvature", "scalar_formula", "τ = Δλ/λ - |grad λ|²/λ² + 2(κ+μ)", C, true),
        def("curvature", "ricci_frame_contraction", "Σ_i [R(∂_i,Y)Z]^i = Σ ε_i g(R(Y,e_i)e_i, Z)", C, false),
        def("curvature", "ricci_eigen_xi", "Qξ is parallel to ξ", C, false),
    ]
}

pub fn curvature_values(d: &PointData, f: &HFrame, n: &NullityCoefficients) -> Result<Vec<f64>> {
    let mut out: Vec<f64> = crate::nullity::frame_residuals_from(d, f).into_iter().map(|r| r.value).collect();
    let g = &d.geom;
    let frame = f.signed_frame(&d.xi);
    let l = f.lambda;
    let (kappa, mu) = (n.kappa.value(), n.mu.unwrap_or_default().value());
    let lap = g.laplacian_signed_frame(&frame, &l)?;
    let lap_div = g.laplacian_divergence(&l)?;
    let (a, b) = (n.a.value(), n.b.value());
    let lv = l.value();
    let lap_formula = -directional(&f.x, &n.a)?.value() + directional(&f.phi_x, &n.b)?.value() + (a * a - b * b) / (2.0 * lv);
    let grad_l = g.gradient(&l)?;
    let grad_sq = g.inner(&grad_l, &grad_l).value();
    let (q, tau) = g.ricci_and_scalar()?;
    let tau_formula = lap / lv - grad_sq / (lv * lv) + 2.0 * (kappa + mu);
    let (q_frame, _) = g.ricci_signed_frame(&frame)?;
    let q_xi = tensor::mat_vec(&q, &d.xi);
    let along = tensor::dot(&d.eta, &q_xi);
    out.extend([
        n.residual,
        n.nu.unwrap_or_default().value().abs(),
        paranullity_from(d, n)?,
        (lv * lv - (1.0 + kappa).abs()).abs(),
        (lap - lap_formula).abs(),
        (lap - lap_div).abs(),
        (tau.value() - tau_formula).abs(),
        tensor::mat_max_abs(&tensor::mat_sub(&q, &tensor::mat_from(q_frame))),
        tensor::max_abs(&tensor::sub(&q_xi, &tensor::scale(&d.xi, along))),
    ]);
    Ok(out)
}

pub fn main_defs() -> Vec<EntryDef> {
    vec![
        def("main", "xi_mu", "ξ(μ) = 0", C, false),
        def("main", "mu_branch", "μ = 2(1+λ) or μ = 2(1-λ)", C, false),
        def("main", "branch_product", "(1+λ-μ/2)(1-λ-μ/2) = 0", C, false),
        def("main", "kappa_depends_on_z", "∂κ/∂x = ∂κ/∂y = 0", C, false),
        def("main", "mu_depends_on_z", "∂μ/∂x = ∂μ/∂y = 0", C, false),
        def("main", "branch_gradient", "B = 0 where μ = 2(1+λ); A = 0 where μ = 2(1-λ)", C, false),
        def("main", "bracket_xi_x", "[ξ,X] = -2λφX where μ = 2(1+λ); [ξ,X] = 0 where μ = 2(1-λ)", C, false),
        def("main", "bracket_xi_phi_x", "[ξ,φX] = 0 where μ = 2(1+λ); [ξ,φX] = 2λX where μ = 2(1-λ)", C, false),
        def("main", "bracket_x_phi_x", "[X,φX] = (A/2λ)φX + 2ξ where μ = 2(1+λ); [X,φX] = -(B/2λ)X + 2ξ where μ = 2(1-λ)", C, true),
    ]
}

pub fn main_values(d: &PointData, f: &HFrame, n: &NullityCoefficients) -> Result<(Vec<f64>, Branch)> {
    let fd = FrameData::new(d, f, n);
    let mb = mu_branch_from(n)?;
    let (x, px, xi, l) = (&fd.x, &fd.px, &fd.xi, fd.lambda);
    let grad = |j: &Jet| {
        let g = j.gradient();
        g[0].abs().max(g[1].abs())
    };
    let two = Jet::constant(2.0);
    let zero = Jet::zero();
    let (branch_grad, bxx, bxpx, bxp) = match mb.branch {
        Branch::Minus => (
            fd.a.value().abs(),
            dist(&lie_bracket(xi, x)?, &[]),
            dist(&lie_bracket(xi, px)?, &[(l * 2.0, x)]),
            dist(&lie_bracket(x, px)?, &[(-fd.b_over()?, x), (two, xi)]),
        ),
        _ => (
            fd.b.value().abs(),
            dist(&lie_bracket(xi, x)?, &[(l * -2.0, px)]),
            dist(&lie_bracket(xi, px)?, &[(zero, x)]),
            dist(&lie_bracket(x, px)?, &[(fd.a_over()?, px), (two, xi)]),
        ),
    };
    Ok((
        vec![
            directional(xi, &fd.mu)?.value().abs(),
            mb.plus_residual.min(mb.minus_residual),
            mb.f_residual,
            grad(&n.kappa),
            grad(&fd.mu),
            branch_grad,
            bxx,
            bxpx,
            bxp,
        ],
        mb.branch,
    ))
}

pub fn deformation_defs() -> Vec<EntryDef> {
    let mut out = axiom_defs("deformation");
    out.extend([
        def("deformation", "nullity_fit", "R(V,ξ)ξ = κV + μhV + νφhV for V = X, φX", C, false),
        def("deformation", "nu_vanishes", "ν = 0", C, false),
        def("deformation", "paranullity", "R(X,Y)ξ = κ(η(Y)X - η(X)Y) + μ(η(Y)hX - η(X)hY) + ν(η(Y)φhX - η(X)φhY)", C, false),
    ]);
    out
}

/// Number of axiom entries at the start of [`deformation_defs`].
pub fn axiom_count() -> usize {
    axiom_defs("axioms").len()
}

pub fn deformation_nullity_values(d: &PointData, n: &NullityCoefficients) -> Result<Vec<f64>> {
    Ok(vec![n.residual, n.nu.unwrap_or_default().value().abs(), paranullity_from(d, n)?])
}
