//! Fixed-size jet-valued vectors and matrices.
//!
//! Matrices are row-major: `m[i][j]` is the component `T^i_j` of a (1,1)
//! tensor, or `g_ij` for a metric, in the coordinate basis.

use crate::jet::{Jet, JetError};

pub type JetVec = [Jet; 3];
pub type JetMat = [[Jet; 3]; 3];

pub fn zero_vec() -> JetVec {
    [Jet::zero(); 3]
}

pub fn zero_mat() -> JetMat {
    [[Jet::zero(); 3]; 3]
}

pub fn identity() -> JetMat {
    let mut m = zero_mat();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Jet::one();
    }
    m
}

/// Constant coordinate basis vector `∂_i`.
pub fn basis(i: usize) -> JetVec {
    let mut v = zero_vec();
    v[i] = Jet::one();
    v
}

pub fn vec_from(v: [f64; 3]) -> JetVec {
    v.map(Jet::constant)
}

pub fn mat_from(m: [[f64; 3]; 3]) -> JetMat {
    m.map(|r| r.map(Jet::constant))
}

pub fn add(a: &JetVec, b: &JetVec) -> JetVec {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &JetVec, b: &JetVec) -> JetVec {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: &JetVec, s: Jet) -> JetVec {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn scale_f(a: &JetVec, s: f64) -> JetVec {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Linear combination `Σ c_i v_i`.
pub fn combine(terms: &[(Jet, &JetVec)]) -> JetVec {
    terms.iter().fold(zero_vec(), |acc, (c, v)| add(&acc, &scale(v, *c)))
}

/// Euclidean pairing `Σ a_i b_i` (form on vector).
pub fn dot(a: &JetVec, b: &JetVec) -> Jet {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn mat_vec(m: &JetMat, v: &JetVec) -> JetVec {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

/// Row vector times matrix: `(w m)_j = Σ_i w_i m_ij`.
pub fn vec_mat(w: &JetVec, m: &JetMat) -> JetVec {
    let mut out = zero_vec();
    for (j, o) in out.iter_mut().enumerate() {
        *o = w[0] * m[0][j] + w[1] * m[1][j] + w[2] * m[2][j];
    }
    out
}

pub fn mat_mul(a: &JetMat, b: &JetMat) -> JetMat {
    let mut out = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    out
}

pub fn mat_add(a: &JetMat, b: &JetMat) -> JetMat {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn mat_sub(a: &JetMat, b: &JetMat) -> JetMat {
    mat_add(a, &mat_scale_f(b, -1.0))
}

pub fn mat_scale(a: &JetMat, s: Jet) -> JetMat {
    a.map(|r| r.map(|c| c * s))
}

pub fn mat_scale_f(a: &JetMat, s: f64) -> JetMat {
    a.map(|r| r.map(|c| c * s))
}

pub fn transpose(a: &JetMat) -> JetMat {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

/// Outer product `u v^T`.
pub fn outer(u: &JetVec, v: &JetVec) -> JetMat {
    let mut out = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = u[i] * v[j];
        }
    }
    out
}

pub fn trace(a: &JetMat) -> Jet {
    a[0][0] + a[1][1] + a[2][2]
}

pub fn det(a: &JetMat) -> Jet {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Cofactor inverse; fails when `|det| ≤ eps`.
pub fn inverse(a: &JetMat, eps: f64) -> Result<JetMat, JetError> {
    let inv_det = det(a).recip_with_eps(eps)?;
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
    let adj = [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ];
    Ok(mat_scale(&adj, inv_det))
}

pub fn values(v: &JetVec) -> [f64; 3] {
    v.map(|c| c.value())
}

pub fn mat_values(m: &JetMat) -> [[f64; 3]; 3] {
    m.map(|r| r.map(|c| c.value()))
}

/// Largest absolute component value.
pub fn max_abs(v: &JetVec) -> f64 {
    v.iter().map(|c| c.value().abs()).fold(0.0, f64::max)
}

pub fn mat_max_abs(m: &JetMat) -> f64 {
    m.iter().map(max_abs).fold(0.0, f64::max)
}
