//! Tensor fields on a single chart and the Levi-Civita toolchain.
//!
//! Fields are pure maps from the coordinate jets at a point to jet-valued
//! components. [`LocalGeometry`] holds the metric, its inverse and the
//! Christoffel symbols as jets at one point; every differential operation
//! works on jet-valued arguments, so derived fields can be differentiated
//! again as long as their derivative budget allows.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{jet_seed, Axis, Jet};
use crate::tensor::{self, JetMat, JetVec};

/// Default threshold on `|det g|` below which the metric counts as degenerate.
pub const DEGENERACY_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ChartPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        ChartPoint { x, y, z }
    }

    pub fn from_array(p: [f64; 3]) -> Self {
        ChartPoint { x: p[0], y: p[1], z: p[2] }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn coord(self, axis: Axis) -> f64 {
        self.to_array()[axis as usize]
    }

    pub fn seeds(&self) -> Result<[Jet; 3]> {
        Ok(jet_seed(self.x, self.y, self.z)?)
    }
}

impl fmt::Display for ChartPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

type Eval<T> = Arc<dyn Fn(&[Jet; 3]) -> Result<T> + Send + Sync>;

macro_rules! field_type {
    ($(#[$m:meta])* $name:ident, $out:ty) => {
        $(#[$m])*
        #[derive(Clone)]
        pub struct $name(Eval<$out>);

        impl $name {
            pub fn new<F>(f: F) -> Self
            where
                F: Fn(&[Jet; 3]) -> Result<$out> + Send + Sync + 'static,
            {
                $name(Arc::new(f))
            }

            /// Components at the point whose coordinate jets are `seeds`.
            pub fn eval_seeds(&self, seeds: &[Jet; 3]) -> Result<$out> {
                (self.0)(seeds)
            }

            pub fn eval(&self, p: &ChartPoint) -> Result<$out> {
                self.eval_seeds(&p.seeds()?)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(concat!(stringify!($name), "(..)"))
            }
        }
    };
}

field_type!(
    /// Scalar field; the derivative budget travels with the returned jet.
    ScalarField,
    Jet
);
field_type!(
    /// Contravariant components in the coordinate basis.
    VectorField,
    JetVec
);
field_type!(
    /// Covariant components in the coordinate basis.
    OneForm,
    JetVec
);
field_type!(
    /// `(1,1)` tensor; entry `[i][j]` is `T^i_j`.
    Tensor11Field,
    JetMat
);

/// Symmetric metric field. Only the upper triangle of the evaluator output is read.
#[derive(Clone)]
pub struct MetricField(Eval<JetMat>);

impl MetricField {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&[Jet; 3]) -> Result<JetMat> + Send + Sync + 'static,
    {
        MetricField(Arc::new(f))
    }

    pub fn eval_seeds(&self, seeds: &[Jet; 3]) -> Result<JetMat> {
        let mut m = (self.0)(seeds)?;
        for i in 0..3 {
            for j in 0..i {
                m[i][j] = m[j][i];
            }
        }
        Ok(m)
    }

    pub fn eval(&self, p: &ChartPoint) -> Result<JetMat> {
        self.eval_seeds(&p.seeds()?)
    }
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MetricField(..)")
    }
}

impl ScalarField {
    pub fn constant(c: f64) -> Self {
        ScalarField::new(move |_| Ok(Jet::constant(c)))
    }
}

impl VectorField {
    pub fn constant(v: [f64; 3]) -> Self {
        VectorField::new(move |_| Ok(tensor::vec_from(v)))
    }
}

impl MetricField {
    pub fn constant(m: [[f64; 3]; 3]) -> Self {
        MetricField::new(move |_| Ok(tensor::mat_from(m)))
    }
}

/// Orthonormal frame at a point: `g(e_i, e_j) = signs[i] δ_ij`.
#[derive(Debug, Clone, Copy)]
pub struct SignedFrame {
    pub vectors: [JetVec; 3],
    pub signs: [f64; 3],
}

impl SignedFrame {
    /// Largest deviation of `g(e_i, e_j)` from `signs[i] δ_ij`.
    pub fn orthonormality_residual(&self, geom: &LocalGeometry) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { self.signs[i] } else { 0.0 };
                let got = geom.inner(&self.vectors[i], &self.vectors[j]).value();
                worst = worst.max((got - target).abs());
            }
        }
        worst
    }
}

/// `X(f) = X^i ∂_i f`.
pub fn directional(x: &JetVec, f: &Jet) -> Result<Jet> {
    let mut out = Jet::zero();
    for axis in Axis::ALL {
        out += x[axis as usize] * f.partial(axis)?;
    }
    Ok(out)
}

/// Componentwise `X(V^k)`.
pub fn directional_vec(x: &JetVec, v: &JetVec) -> Result<JetVec> {
    Ok([directional(x, &v[0])?, directional(x, &v[1])?, directional(x, &v[2])?])
}

/// `[X,Y]^k = X(Y^k) - Y(X^k)`.
pub fn lie_bracket(x: &JetVec, y: &JetVec) -> Result<JetVec> {
    Ok(tensor::sub(&directional_vec(x, y)?, &directional_vec(y, x)?))
}

/// `(L_ξ T)^k_j = ξ(T^k_j) - T^i_j ∂_i ξ^k + T^k_i ∂_j ξ^i`.
pub fn lie_derivative_tensor11(xi: &JetVec, t: &JetMat) -> Result<JetMat> {
    let mut dxi = [[Jet::zero(); 3]; 3];
    for (i, row) in dxi.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            *entry = xi[k].partial(Axis::from_index(i))?;
        }
    }
    // dxi[i][k] = ∂_i ξ^k
    let mut out = tensor::zero_mat();
    for k in 0..3 {
        for j in 0..3 {
            let mut acc = directional(xi, &t[k][j])?;
            for i in 0..3 {
                acc -= t[i][j] * dxi[i][k];
                acc += t[k][i] * dxi[j][i];
            }
            out[k][j] = acc;
        }
    }
    Ok(out)
}

/// Metric data at one point: `g`, `g^{-1}` and `Γ^k_ij` as jets.
#[derive(Debug, Clone)]
pub struct LocalGeometry {
    point: ChartPoint,
    g: JetMat,
    ginv: JetMat,
    det: Jet,
    gamma: [JetMat; 3],
}

impl LocalGeometry {
    pub fn new(point: ChartPoint, g: JetMat) -> Result<Self> {
        Self::with_eps(point, g, DEGENERACY_EPS)
    }

    pub fn with_eps(point: ChartPoint, g: JetMat, det_eps: f64) -> Result<Self> {
        let det = tensor::det(&g);
        if !(det.value().abs() > det_eps) {
            return Err(Error::DegenerateMetric { point, det: det.value() });
        }
        let ginv = tensor::inverse(&g, det_eps)?;
        let mut dg = [[[Jet::zero(); 3]; 3]; 3];
        for axis in Axis::ALL {
            for i in 0..3 {
                for j in 0..3 {
                    dg[axis as usize][i][j] = g[i][j].partial(axis)?;
                }
            }
        }
        // Γ^k_ij = ½ g^{kl} (∂_i g_jl + ∂_j g_il - ∂_l g_ij)
        let mut lowered = [[[Jet::zero(); 3]; 3]; 3];
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    lowered[l][i][j] = (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]) * 0.5;
                }
            }
        }
        let mut gamma = [tensor::zero_mat(); 3];
        for (k, gk) in gamma.iter_mut().enumerate() {
            for i in 0..3 {
                for j in i..3 {
                    let v: Jet = (0..3).map(|l| ginv[k][l] * lowered[l][i][j]).sum();
                    gk[i][j] = v;
                    gk[j][i] = v;
                }
            }
        }
        Ok(LocalGeometry { point, g, ginv, det, gamma })
    }

    pub fn point(&self) -> ChartPoint {
        self.point
    }

    pub fn metric(&self) -> &JetMat {
        &self.g
    }

    pub fn inverse(&self) -> &JetMat {
        &self.ginv
    }

    pub fn det(&self) -> Jet {
        self.det
    }

    /// `gamma()[k][i][j] = Γ^k_ij`.
    pub fn christoffel(&self) -> &[JetMat; 3] {
        &self.gamma
    }

    pub fn inner(&self, u: &JetVec, v: &JetVec) -> Jet {
        tensor::dot(&tensor::mat_vec(&self.g, v), u)
    }

    pub fn lower(&self, v: &JetVec) -> JetVec {
        tensor::mat_vec(&self.g, v)
    }

    pub fn raise(&self, w: &JetVec) -> JetVec {
        tensor::mat_vec(&self.ginv, w)
    }

    /// `(∇_X Y)^k = X^i (∂_i Y^k + Γ^k_ij Y^j)`.
    pub fn covariant(&self, x: &JetVec, y: &JetVec) -> Result<JetVec> {
        let mut out = directional_vec(x, y)?;
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    *o += x[i] * self.gamma[k][i][j] * y[j];
                }
            }
        }
        Ok(out)
    }

    /// `R(X,Y)Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z - ∇_[X,Y] Z`.
    pub fn riemann_apply(&self, x: &JetVec, y: &JetVec, z: &JetVec) -> Result<JetVec> {
        let a = self.covariant(x, &self.covariant(y, z)?)?;
        let b = self.covariant(y, &self.covariant(x, z)?)?;
        let c = self.covariant(&lie_bracket(x, y)?, z)?;
        Ok(tensor::sub(&tensor::sub(&a, &b), &c))
    }

    /// `r[i][j][k] = R(∂_i, ∂_j) ∂_k` for all coordinate triples.
    pub fn riemann_coordinate(&self) -> Result<[[[JetVec; 3]; 3]; 3]> {
        let mut out = [[[tensor::zero_vec(); 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                for k in 0..3 {
                    out[i][j][k] = self.riemann_apply(&tensor::basis(i), &tensor::basis(j), &tensor::basis(k))?;
                }
            }
        }
        Ok(out)
    }

    /// Ricci operator `Q` (with `g(QY,Z) = Ric(Y,Z)`) and scalar curvature `τ = tr Q`,
    /// from the coordinate trace `Ric(Y,Z) = tr(V ↦ R(V,Y)Z)`.
    pub fn ricci_and_scalar(&self) -> Result<(JetMat, Jet)> {
        let r = self.riemann_coordinate()?;
        let mut ric = tensor::zero_mat();
        for j in 0..3 {
            for k in 0..3 {
                ric[j][k] = (0..3).map(|i| r[i][j][k][i]).sum();
            }
        }
        let q = tensor::mat_mul(&self.ginv, &ric);
        let tau = tensor::trace(&q);
        Ok((q, tau))
    }

    /// Ricci operator by frame contraction `QY = Σ ε_i R(Y, e_i) e_i` (values only).
    pub fn ricci_signed_frame(&self, frame: &SignedFrame) -> Result<([[f64; 3]; 3], f64)> {
        let mut q = [[0.0; 3]; 3];
        for col in 0..3 {
            let y = tensor::basis(col);
            let mut acc = [0.0; 3];
            for (e, eps) in frame.vectors.iter().zip(frame.signs) {
                let r = tensor::values(&self.riemann_apply(&y, e, e)?);
                for k in 0..3 {
                    acc[k] += eps * r[k];
                }
            }
            for k in 0..3 {
                q[k][col] = acc[k];
            }
        }
        // τ = Σ ε_i g(Q e_i, e_i)
        let qj = tensor::mat_from(q);
        let tau = frame
            .vectors
            .iter()
            .zip(frame.signs)
            .map(|(e, eps)| eps * self.inner(&tensor::mat_vec(&qj, e), e).value())
            .sum();
        Ok((q, tau))
    }

    /// `(grad f)^i = g^{ij} ∂_j f`.
    pub fn gradient(&self, f: &Jet) -> Result<JetVec> {
        let df = [f.partial(Axis::X)?, f.partial(Axis::Y)?, f.partial(Axis::Z)?];
        Ok(self.raise(&df))
    }

    /// `Δf = Σ ε_i (e_i e_i f - (∇_{e_i} e_i) f)`.
    pub fn laplacian_signed_frame(&self, frame: &SignedFrame, f: &Jet) -> Result<f64> {
        let mut out = 0.0;
        for (e, eps) in frame.vectors.iter().zip(frame.signs) {
            let second = directional(e, &directional(e, f)?)?;
            let acc = directional(&self.covariant(e, e)?, f)?;
            out += eps * (second.value() - acc.value());
        }
        Ok(out)
    }

    /// `Δf = |g|^{-1/2} ∂_i (|g|^{1/2} g^{ij} ∂_j f)`.
    pub fn laplacian_divergence(&self, f: &Jet) -> Result<f64> {
        let vol = if self.det.value() < 0.0 { -self.det } else { self.det }.sqrt()?;
        let flux = tensor::scale(&self.gradient(f)?, vol);
        let mut div = Jet::zero();
        for axis in Axis::ALL {
            div += flux[axis as usize].partial(axis)?;
        }
        Ok(div.value() / vol.value())
    }

    /// `dη(X,Y) = ½ (X η(Y) - Y η(X) - η([X,Y]))`.
    pub fn exterior_derivative(&self, eta: &JetVec, x: &JetVec, y: &JetVec) -> Result<Jet> {
        exterior_derivative(eta, x, y)
    }
}

/// `dη(X,Y) = ½ (X η(Y) - Y η(X) - η([X,Y]))`.
pub fn exterior_derivative(eta: &JetVec, x: &JetVec, y: &JetVec) -> Result<Jet> {
    let a = directional(x, &tensor::dot(eta, y))?;
    let b = directional(y, &tensor::dot(eta, x))?;
    let c = tensor::dot(eta, &lie_bracket(x, y)?);
    Ok((a - b - c) * 0.5)
}

/// Geometry of `g` at `p`.
pub fn local_geometry(g: &MetricField, p: &ChartPoint) -> Result<LocalGeometry> {
    LocalGeometry::new(*p, g.eval(p)?)
}

/// Value of `g(p)^{-1}`.
pub fn metric_inverse(g: &MetricField, p: &ChartPoint) -> Result<[[f64; 3]; 3]> {
    Ok(tensor::mat_values(local_geometry(g, p)?.inverse()))
}

/// Values `Γ^k_ij` at `p`, indexed `[k][i][j]`.
pub fn christoffel(g: &MetricField, p: &ChartPoint) -> Result<[[[f64; 3]; 3]; 3]> {
    let geom = local_geometry(g, p)?;
    Ok(geom.christoffel().map(|m| tensor::mat_values(&m)))
}

pub fn covariant_derivative_vector(
    g: &MetricField,
    x: &VectorField,
    y: &VectorField,
    p: &ChartPoint,
) -> Result<[f64; 3]> {
    let seeds = p.seeds()?;
    let geom = LocalGeometry::new(*p, g.eval_seeds(&seeds)?)?;
    Ok(tensor::values(&geom.covariant(&x.eval_seeds(&seeds)?, &y.eval_seeds(&seeds)?)?))
}

pub fn lie_bracket_fields(x: &VectorField, y: &VectorField, p: &ChartPoint) -> Result<[f64; 3]> {
    let seeds = p.seeds()?;
    Ok(tensor::values(&lie_bracket(&x.eval_seeds(&seeds)?, &y.eval_seeds(&seeds)?)?))
}

pub fn riemann_apply(
    g: &MetricField,
    x: &VectorField,
    y: &VectorField,
    z: &VectorField,
    p: &ChartPoint,
) -> Result<[f64; 3]> {
    let seeds = p.seeds()?;
    let geom = LocalGeometry::new(*p, g.eval_seeds(&seeds)?)?;
    let r = geom.riemann_apply(&x.eval_seeds(&seeds)?, &y.eval_seeds(&seeds)?, &z.eval_seeds(&seeds)?)?;
    Ok(tensor::values(&r))
}

pub fn gradient_field(g: &MetricField, f: &ScalarField, p: &ChartPoint) -> Result<[f64; 3]> {
    let seeds = p.seeds()?;
    let geom = LocalGeometry::new(*p, g.eval_seeds(&seeds)?)?;
    Ok(tensor::values(&geom.gradient(&f.eval_seeds(&seeds)?)?))
}
