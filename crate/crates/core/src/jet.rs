//! Truncated Taylor jets in three chart variables.
//!
//! A [`Jet`] stores the Taylor coefficients `∂^α f(p) / α!` of a scalar
//! function for every multi-index `α = (i, j, k)` with `i + j + k ≤ 3`,
//! i.e. 20 numbers. Arithmetic on jets is exact truncated-Taylor
//! arithmetic, so every stored coefficient equals the corresponding partial
//! derivative of the composite expression at the base point.
//!
//! Each jet also carries a derivative budget: the number of derivative
//! orders that are still valid. Seeds start with [`MAX_ORDER`]; taking a
//! partial derivative consumes one order and binary operations keep the
//! smaller budget. Differentiating a jet whose budget is exhausted is an
//! error instead of a silent loss of accuracy.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

/// Highest derivative order tracked by a [`Jet`].
pub const MAX_ORDER: u8 = 3;

/// Number of stored Taylor coefficients (multi-indices with total degree ≤ 3).
pub const NCOEF: usize = 20;

/// Default threshold below which a divisor is treated as zero.
pub const DEFAULT_DIV_EPS: f64 = 1e-12;

const fn build_multi() -> [[u8; 3]; NCOEF] {
    let mut out = [[0u8; 3]; NCOEF];
    let mut n = 0;
    let mut d = 0i32;
    while d <= 3 {
        let mut i = d;
        while i >= 0 {
            let mut j = d - i;
            while j >= 0 {
                out[n] = [i as u8, j as u8, (d - i - j) as u8];
                n += 1;
                j -= 1;
            }
            i -= 1;
        }
        d += 1;
    }
    out
}

/// Multi-indices in storage order: grouped by total degree.
const MULTI: [[u8; 3]; NCOEF] = build_multi();

const fn degree(m: [u8; 3]) -> u8 {
    m[0] + m[1] + m[2]
}

const fn build_index() -> [[[u8; 4]; 4]; 4] {
    let mut out = [[[u8::MAX; 4]; 4]; 4];
    let mut n = 0;
    while n < NCOEF {
        let m = MULTI[n];
        out[m[0] as usize][m[1] as usize][m[2] as usize] = n as u8;
        n += 1;
    }
    out
}

const INDEX: [[[u8; 4]; 4]; 4] = build_index();

const NPAIRS: usize = 84;

const fn build_pairs() -> [(u8, u8, u8); NPAIRS] {
    let mut out = [(0u8, 0u8, 0u8); NPAIRS];
    let mut n = 0;
    let mut a = 0;
    while a < NCOEF {
        let mut b = 0;
        while b < NCOEF {
            let ma = MULTI[a];
            let mb = MULTI[b];
            let s = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
            if degree(s) <= 3 {
                out[n] = (a as u8, b as u8, INDEX[s[0] as usize][s[1] as usize][s[2] as usize]);
                n += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

/// Coefficient index triples `(a, b, a+b)` for the truncated Cauchy product.
const PAIRS: [(u8, u8, u8); NPAIRS] = build_pairs();

fn factorial(n: u8) -> f64 {
    (1..=n).map(f64::from).product()
}

fn index_of(i: u8, j: u8, k: u8) -> Option<usize> {
    if i + j + k > MAX_ORDER {
        return None;
    }
    Some(INDEX[i as usize][j as usize][k as usize] as usize)
}

/// Failures of jet arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a value near zero ({value:e}, threshold {eps:e})")]
    DivisionNearZero { value: f64, eps: f64 },
    #[error("{op} is undefined at {value}")]
    DomainError { op: &'static str, value: f64 },
    #[error("non-finite input: {0}")]
    NonFinite(String),
    #[error("derivative budget exhausted: cannot differentiate a jet with {order} remaining orders")]
    BudgetExhausted { order: u8 },
}

/// Chart coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }
}

/// Order-3 truncated Taylor jet in the chart coordinates `(x, y, z)`.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    coeffs: [f64; NCOEF],
    order: u8,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("value", &self.coeffs[0])
            .field("gradient", &self.gradient())
            .field("order", &self.order)
            .finish()
    }
}

impl Default for Jet {
    fn default() -> Self {
        Jet::constant(0.0)
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::constant(v)
    }
}

impl Jet {
    pub fn constant(value: f64) -> Jet {
        let mut coeffs = [0.0; NCOEF];
        coeffs[0] = value;
        Jet { coeffs, order: MAX_ORDER }
    }

    pub fn zero() -> Jet {
        Jet::constant(0.0)
    }

    pub fn one() -> Jet {
        Jet::constant(1.0)
    }

    /// Coordinate jet: `value` in the constant slot and unit first derivative along `axis`.
    pub fn variable(value: f64, axis: Axis) -> Jet {
        let mut j = Jet::constant(value);
        j.coeffs[1 + axis as usize] = 1.0;
        j
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Remaining derivative budget.
    pub fn order(&self) -> u8 {
        self.order
    }

    /// Raw Taylor coefficient `∂^α f / α!`; zero beyond the budget.
    pub fn taylor_coeff(&self, i: u8, j: u8, k: u8) -> f64 {
        match index_of(i, j, k) {
            Some(n) if i + j + k <= self.order => self.coeffs[n],
            _ => 0.0,
        }
    }

    /// Partial derivative `∂^(i+j+k) f / ∂x^i ∂y^j ∂z^k` at the base point.
    ///
    /// Returns `BudgetExhausted` when the requested order exceeds the budget.
    pub fn derivative(&self, i: u8, j: u8, k: u8) -> Result<f64, JetError> {
        if i + j + k > self.order {
            return Err(JetError::BudgetExhausted { order: self.order });
        }
        Ok(self.taylor_coeff(i, j, k) * factorial(i) * factorial(j) * factorial(k))
    }

    /// First derivatives. Zero when the budget is exhausted.
    pub fn gradient(&self) -> [f64; 3] {
        if self.order == 0 {
            return [0.0; 3];
        }
        [self.coeffs[1], self.coeffs[2], self.coeffs[3]]
    }

    /// Second derivatives (symmetric). Zero when the budget is below 2.
    pub fn hessian(&self) -> [[f64; 3]; 3] {
        let mut h = [[0.0; 3]; 3];
        if self.order < 2 {
            return h;
        }
        for (a, row) in h.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                let mut m = [0u8; 3];
                m[a] += 1;
                m[b] += 1;
                *entry = self.derivative(m[0], m[1], m[2]).unwrap_or(0.0);
            }
        }
        h
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Drops every coefficient above `order` and lowers the budget accordingly.
    pub fn truncated(&self, order: u8) -> Jet {
        let order = order.min(self.order);
        let mut out = *self;
        out.order = order;
        for (n, m) in MULTI.iter().enumerate() {
            if degree(*m) > order {
                out.coeffs[n] = 0.0;
            }
        }
        out
    }

    /// Partial derivative along `axis`, consuming one order of the budget.
    pub fn partial(&self, axis: Axis) -> Result<Jet, JetError> {
        if self.order == 0 {
            return Err(JetError::BudgetExhausted { order: 0 });
        }
        let a = axis as usize;
        let mut coeffs = [0.0; NCOEF];
        for (n, m) in MULTI.iter().enumerate() {
            if degree(*m) >= self.order {
                continue;
            }
            let mut up = *m;
            up[a] += 1;
            let src = INDEX[up[0] as usize][up[1] as usize][up[2] as usize] as usize;
            coeffs[n] = f64::from(up[a]) * self.coeffs[src];
        }
        Ok(Jet { coeffs, order: self.order - 1 })
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    fn mul_jet(&self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut coeffs = [0.0; NCOEF];
        for &(a, b, t) in PAIRS.iter() {
            if degree(MULTI[t as usize]) <= order {
                coeffs[t as usize] += self.coeffs[a as usize] * rhs.coeffs[b as usize];
            }
        }
        Jet { coeffs, order }
    }

    /// Applies a univariate function given its value and first three
    /// derivatives at the base value.
    fn compose(&self, d: [f64; 4]) -> Jet {
        let mut delta = *self;
        delta.coeffs[0] = 0.0;
        let d2 = delta.mul_jet(&delta);
        let d3 = d2.mul_jet(&delta);
        let mut out = delta.scale(d[1]) + d2.scale(d[2] / 2.0) + d3.scale(d[3] / 6.0);
        out.coeffs[0] = d[0];
        out.truncated(self.order)
    }

    fn check_finite(self, op: &'static str) -> Result<Jet, JetError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(JetError::DomainError { op, value: self.value() })
        }
    }

    pub fn recip_with_eps(&self, eps: f64) -> Result<Jet, JetError> {
        let v = self.value();
        if !(v.abs() > eps) {
            return Err(JetError::DivisionNearZero { value: v, eps });
        }
        let r = 1.0 / v;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
            .check_finite("reciprocal")
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        self.recip_with_eps(DEFAULT_DIV_EPS)
    }

    pub fn div_with_eps(&self, rhs: &Jet, eps: f64) -> Result<Jet, JetError> {
        Ok(*self * rhs.recip_with_eps(eps)?)
    }

    pub fn checked_div(&self, rhs: &Jet) -> Result<Jet, JetError> {
        self.div_with_eps(rhs, DEFAULT_DIV_EPS)
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let v = self.value();
        if !(v > 0.0) {
            return Err(JetError::DomainError { op: "sqrt", value: v });
        }
        let s = v.sqrt();
        self.compose([s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)])
            .check_finite("sqrt")
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let v = self.value();
        if !(v > 0.0) {
            return Err(JetError::DomainError { op: "ln", value: v });
        }
        self.compose([v.ln(), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)])
            .check_finite("ln")
    }

    pub fn exp(&self) -> Result<Jet, JetError> {
        let e = self.value().exp();
        self.compose([e, e, e, e]).check_finite("exp")
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    /// Integer power. Negative exponents require a nonzero base.
    pub fn powi(&self, n: i32) -> Result<Jet, JetError> {
        if n == 0 {
            return Ok(Jet::constant(1.0).truncated(self.order));
        }
        if n > 0 {
            let mut acc = *self;
            for _ in 1..n {
                acc = acc.mul_jet(self);
            }
            return acc.check_finite("powi");
        }
        let v = self.value();
        if !(v.abs() > DEFAULT_DIV_EPS) {
            return Err(JetError::DivisionNearZero { value: v, eps: DEFAULT_DIV_EPS });
        }
        let nf = f64::from(n);
        let d = [
            v.powi(n),
            nf * v.powi(n - 1),
            nf * (nf - 1.0) * v.powi(n - 2),
            nf * (nf - 1.0) * (nf - 2.0) * v.powi(n - 3),
        ];
        self.compose(d).check_finite("powi")
    }
}

/// The three coordinate jets at `(x, y, z)`.
pub fn jet_seed(x: f64, y: f64, z: f64) -> Result<[Jet; 3], JetError> {
    for (name, v) in [("x", x), ("y", y), ("z", z)] {
        if !v.is_finite() {
            return Err(JetError::NonFinite(format!("coordinate {name} = {v}")));
        }
    }
    Ok([
        Jet::variable(x, Axis::X),
        Jet::variable(y, Axis::Y),
        Jet::variable(z, Axis::Z),
    ])
}

/// Operation selector for [`jet_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Sqrt,
    Powi(i32),
    Exp,
    Ln,
    Sin,
    Cos,
}

/// Applies `op` to `a` (and `b` for binary operations).
///
/// A missing second operand for a binary operation is treated as a domain error.
pub fn jet_arith(op: JetOp, a: &Jet, b: Option<&Jet>) -> Result<Jet, JetError> {
    let rhs = || b.ok_or(JetError::DomainError { op: "binary operation without operand", value: f64::NAN });
    match op {
        JetOp::Add => Ok(*a + *rhs()?),
        JetOp::Sub => Ok(*a - *rhs()?),
        JetOp::Mul => Ok(*a * *rhs()?),
        JetOp::Div => a.checked_div(rhs()?),
        JetOp::Neg => Ok(-*a),
        JetOp::Sqrt => a.sqrt(),
        JetOp::Powi(n) => a.powi(n),
        JetOp::Exp => a.exp(),
        JetOp::Ln => a.ln(),
        JetOp::Sin => Ok(a.sin()),
        JetOp::Cos => Ok(a.cos()),
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        for (c, r) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *c += r;
        }
        self.order = order;
        self.truncated(order)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.mul_jet(&rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        (-rhs) + self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for Jet {
    fn sum<I: Iterator<Item = Jet>>(iter: I) -> Jet {
        iter.fold(Jet::zero(), |a, b| a + b)
    }
}

/// Central-difference derivative estimates produced by [`finite_difference_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDifferenceEstimate {
    pub value: f64,
    pub gradient: [f64; 3],
    pub hessian: [[f64; 3]; 3],
}

/// Central-difference gradient and Hessian of `f` at `p` with step `h`.
///
/// Gradient uses `(f(p+h e) - f(p-h e)) / 2h`; second derivatives compose two
/// central differences, so the stencil reaches `p ± 2h` on the diagonal.
/// This is an oracle for testing the jet engine, independent of it.
pub fn finite_difference_oracle<E, F>(f: F, p: [f64; 3], h: f64) -> Result<FiniteDifferenceEstimate, E>
where
    F: Fn([f64; 3]) -> Result<f64, E>,
{
    let shifted = |offsets: &[(usize, f64)]| {
        let mut q = p;
        for &(axis, d) in offsets {
            q[axis] += d;
        }
        f(q)
    };
    let value = f(p)?;
    let mut gradient = [0.0; 3];
    let mut hessian = [[0.0; 3]; 3];
    for a in 0..3 {
        gradient[a] = (shifted(&[(a, h)])? - shifted(&[(a, -h)])?) / (2.0 * h);
        hessian[a][a] =
            (shifted(&[(a, 2.0 * h)])? - 2.0 * value + shifted(&[(a, -2.0 * h)])?) / (4.0 * h * h);
    }
    for a in 0..3 {
        for b in (a + 1)..3 {
            let mixed = (shifted(&[(a, h), (b, h)])? - shifted(&[(a, h), (b, -h)])?
                - shifted(&[(a, -h), (b, h)])?
                + shifted(&[(a, -h), (b, -h)])?)
                / (4.0 * h * h);
            hessian[a][b] = mixed;
            hessian[b][a] = mixed;
        }
    }
    Ok(FiniteDifferenceEstimate { value, gradient, hessian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn seeds(x: f64, y: f64, z: f64) -> [Jet; 3] {
        jet_seed(x, y, z).unwrap()
    }

    #[test]
    fn tables_are_consistent() {
        assert_eq!(MULTI[0], [0, 0, 0]);
        assert_eq!(MULTI[19], [0, 0, 3]);
        for (n, m) in MULTI.iter().enumerate() {
            assert_eq!(INDEX[m[0] as usize][m[1] as usize][m[2] as usize] as usize, n);
        }
        assert_eq!(PAIRS.iter().filter(|p| p.2 == 0).count(), 1);
    }

    #[test]
    fn seed_jets() {
        let [x, _, _] = seeds(1.0, 2.0, 3.0);
        assert_eq!(x.value(), 1.0);
        assert_eq!(x.derivative(1, 0, 0).unwrap(), 1.0);
        assert_eq!(x.derivative(0, 1, 0).unwrap(), 0.0);
        assert_eq!(x.derivative(2, 0, 0).unwrap(), 0.0);
        let [_, _, z] = seeds(0.0, 0.0, 0.0);
        assert_eq!(z.value(), 0.0);
        assert_eq!(z.gradient(), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn leibniz_mixed_partial() {
        let [x, y, _] = seeds(0.3, -1.7, 2.0);
        let xy = x * y;
        assert_eq!(xy.derivative(1, 1, 0).unwrap(), 1.0);
        assert_eq!(xy.derivative(1, 0, 0).unwrap(), -1.7);
    }

    #[test]
    fn seed_rejects_non_finite() {
        assert!(matches!(jet_seed(f64::NAN, 0.0, 0.0), Err(JetError::NonFinite(_))));
        assert!(jet_seed(0.0, f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn sqrt_of_constant() {
        let r = Jet::constant(4.0).sqrt().unwrap();
        assert_eq!(r.value(), 2.0);
        assert_eq!(r.gradient(), [0.0; 3]);
    }

    #[test]
    fn monomial_cube() {
        let [_, _, z] = seeds(0.0, 0.0, 2.0);
        let c = z * z * z;
        assert_eq!(c.value(), 8.0);
        assert_eq!(c.derivative(0, 0, 1).unwrap(), 12.0);
        assert_eq!(c.derivative(0, 0, 2).unwrap(), 12.0);
        assert_eq!(c.derivative(0, 0, 3).unwrap(), 6.0);
    }

    #[test]
    fn sqrt_composite_matches_finite_differences() {
        // d/dz sqrt(1+z^2) at z=1; the frozen value 0.70710678 comes from the
        // central-difference oracle with step 1e-5.
        let fd = finite_difference_oracle(
            |q: [f64; 3]| Ok::<_, ()>((1.0 + q[2] * q[2]).sqrt()),
            [0.0, 0.0, 1.0],
            1e-5,
        )
        .unwrap();
        assert_abs_diff_eq!(fd.gradient[2], 0.707_106_78, epsilon = 1e-8);
        let [_, _, z] = seeds(0.0, 0.0, 1.0);
        let j = (z * z + 1.0).sqrt().unwrap();
        assert_abs_diff_eq!(j.derivative(0, 0, 1).unwrap(), fd.gradient[2], epsilon = 1e-9);
    }

    #[test]
    fn division_near_zero_and_domain_errors() {
        let a = Jet::constant(1.0);
        let tiny = Jet::constant(1e-14);
        assert!(matches!(a.checked_div(&tiny), Err(JetError::DivisionNearZero { .. })));
        assert!(a.div_with_eps(&tiny, 1e-16).is_ok());
        assert!(matches!(Jet::constant(-1.0).sqrt(), Err(JetError::DomainError { op: "sqrt", .. })));
        assert!(matches!(Jet::constant(0.0).ln(), Err(JetError::DomainError { op: "ln", .. })));
        assert!(matches!(Jet::constant(0.0).powi(-2), Err(JetError::DivisionNearZero { .. })));
        assert!(matches!(Jet::constant(800.0).exp(), Err(JetError::DomainError { op: "exp", .. })));
    }

    #[test]
    fn budget_is_consumed_by_partials() {
        let [x, _, _] = seeds(1.0, 0.0, 0.0);
        let f = x * x * x;
        let d1 = f.partial(Axis::X).unwrap();
        assert_eq!(d1.order(), 2);
        assert_eq!(d1.value(), 3.0);
        let d3 = d1.partial(Axis::X).unwrap().partial(Axis::X).unwrap();
        assert_eq!(d3.order(), 0);
        assert_eq!(d3.value(), 6.0);
        assert!(matches!(d3.partial(Axis::X), Err(JetError::BudgetExhausted { order: 0 })));
        assert!(d3.derivative(1, 0, 0).is_err());
        // Mixing budgets keeps the smaller one.
        assert_eq!((d1 * f).order(), 2);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let [x, y, z] = seeds(0.7, -0.4, 1.3);
        let base = x * y + z;
        let p = base.powi(3).unwrap();
        let q = base * base * base;
        for (a, b) in p.coeffs.iter().zip(q.coeffs.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        let inv = base.powi(-2).unwrap() * base * base;
        assert_abs_diff_eq!(inv.value(), 1.0, epsilon = 1e-12);
        for c in &inv.coeffs[1..] {
            assert_abs_diff_eq!(*c, 0.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn trig_and_exp_log_inverse() {
        let [x, _, z] = seeds(0.4, 0.0, 0.9);
        let u = x * z + 0.5;
        let back = u.exp().unwrap().ln().unwrap();
        for (a, b) in back.coeffs.iter().zip(u.coeffs.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        let pyth = u.sin() * u.sin() + u.cos() * u.cos();
        assert_abs_diff_eq!(pyth.value(), 1.0, epsilon = 1e-14);
        for c in &pyth.coeffs[1..] {
            assert_abs_diff_eq!(*c, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn jet_arith_dispatch() {
        let a = Jet::constant(9.0);
        let b = Jet::constant(3.0);
        assert_eq!(jet_arith(JetOp::Div, &a, Some(&b)).unwrap().value(), 3.0);
        assert_eq!(jet_arith(JetOp::Sqrt, &a, None).unwrap().value(), 3.0);
        assert_eq!(jet_arith(JetOp::Neg, &a, None).unwrap().value(), -9.0);
        assert!(jet_arith(JetOp::Mul, &a, None).is_err());
    }

    #[test]
    fn fd_oracle_basics() {
        let est = finite_difference_oracle(|q: [f64; 3]| Ok::<_, ()>(q[0] * q[0]), [3.0, 0.0, 0.0], 1e-4)
            .unwrap();
        assert_abs_diff_eq!(est.gradient[0], 6.0, epsilon = 1e-6);
        let c = finite_difference_oracle(|_: [f64; 3]| Ok::<_, ()>(4.2), [0.1, 0.2, 0.3], 1e-3).unwrap();
        for a in 0..3 {
            assert_abs_diff_eq!(c.gradient[a], 0.0, epsilon = 1e-8);
            for b in 0..3 {
                assert_abs_diff_eq!(c.hessian[a][b], 0.0, epsilon = 1e-8);
            }
        }
        let err = finite_difference_oracle(
            |q: [f64; 3]| if q[0] > 1.0 { Err("outside") } else { Ok(q[0]) },
            [1.0, 0.0, 0.0],
            0.1,
        );
        assert_eq!(err.unwrap_err(), "outside");
    }
}
