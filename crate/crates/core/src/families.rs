//! Structure constructors: the two coordinate families, built-in presets
//! and JSON manifests.
//!
//! Both families use `ξ = ∂x`, `η = dx - a dz` and
//!
//! ```text
//! φ = [[0, a, -ab], [0, b, 1 - b²], [0, 1, -b]]
//! ```
//!
//! with, for `case1`,
//!
//! ```text
//! a = -2y + f(z),  b = -(y/2) r'/r - 2x r + s(z)
//! g = [[1, 0, -a], [0, 1, -b], [-a, -b, -1 + a² + b²]]
//! ```
//!
//! and for `case2`,
//!
//! ```text
//! a = 2y + f(z),   b = -(y/2) r'/r + 2x r + s(z)
//! g = [[1, 0, -a], [0, -1, b], [-a, b, 1 + a² - b²]]
//! ```
//!
//! The first family has `λ = r`, `μ = 2(1 + λ)`; the second `λ = r`, `μ = 2(1 - λ)`.

use serde::{Deserialize, Serialize};

use crate::chart::{ChartPoint, MetricField, OneForm, Tensor11Field, VectorField};
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::jet::{Axis, Jet};
use crate::paracontact::{axioms_from, d_homothetic_deform, DomainPredicate, ParacontactStructure};
use crate::tensor::JetMat;

/// Samples used to check positivity of `r` on the z-interval.
pub const POSITIVITY_SAMPLES: usize = 256;

/// Smallest accepted value of `r` on the domain.
pub const R_FLOOR: f64 = 1e-9;

/// Axiom tolerance applied when validating a freshly built structure.
pub const VALIDATION_TOL: f64 = 1e-8;

/// Scalar function of `z` given by an expression.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    source: String,
    expr: Expr,
    derivative: Expr,
}

impl FunctionSpec {
    pub fn source(&self) -> &str {
        &self.source
    }

    fn seeds(z: &Jet) -> [Jet; 3] {
        [Jet::zero(), Jet::zero(), *z]
    }

    /// Value on a z-jet.
    pub fn eval(&self, z: &Jet) -> Result<Jet> {
        Ok(self.expr.eval(&Self::seeds(z))?)
    }

    /// Symbolic derivative evaluated on a z-jet, keeping the full budget.
    pub fn eval_derivative(&self, z: &Jet) -> Result<Jet> {
        Ok(self.derivative.eval(&Self::seeds(z))?)
    }

    pub fn value(&self, z: f64) -> Result<f64> {
        Ok(self.expr.value_at([0.0, 0.0, z])?)
    }
}

/// Parses an expression in `z`.
pub fn parse_scalar_function(text: &str) -> Result<FunctionSpec> {
    let expr = expr::parse(text, &[Axis::Z])?;
    let derivative = expr.derivative(Axis::Z);
    Ok(FunctionSpec { source: text.to_string(), expr, derivative })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyCase {
    Case1,
    Case2,
}

/// Open interval; infinite endpoints are allowed in manifests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub min: f64,
    pub max: f64,
}

impl Interval {
    pub fn new(min: f64, max: f64) -> Self {
        Interval { min, max }
    }

    pub fn contains(&self, v: f64) -> bool {
        v > self.min && v < self.max
    }

    pub fn is_bounded(&self) -> bool {
        self.min.is_finite() && self.max.is_finite()
    }
}

fn family_tensors(case: FamilyCase, r: &FunctionSpec, f: &FunctionSpec, s: &FunctionSpec, seeds: &[Jet; 3]) -> Result<(Jet, Jet, JetMat)> {
    let [x, y, z] = *seeds;
    let rz = r.eval(&z)?;
    let ratio = r.eval_derivative(&z)?.checked_div(&rz)?;
    let sign = match case {
        FamilyCase::Case1 => -1.0,
        FamilyCase::Case2 => 1.0,
    };
    let a = y * (2.0 * sign) + f.eval(&z)?;
    let b = y * ratio * -0.5 + x * rz * (2.0 * sign) + s.eval(&z)?;
    let (zero, one) = (Jet::zero(), Jet::one());
    let g = match case {
        FamilyCase::Case1 => [
            [one, zero, -a],
            [zero, one, -b],
            [-a, -b, a * a + b * b - 1.0],
        ],
        FamilyCase::Case2 => [
            [one, zero, -a],
            [zero, -one, b],
            [-a, b, a * a - b * b + 1.0],
        ],
    };
    Ok((a, b, g))
}

fn family_structure(
    label: &str,
    case: FamilyCase,
    r: &FunctionSpec,
    f: &FunctionSpec,
    s: &FunctionSpec,
    domain: DomainPredicate,
) -> ParacontactStructure {
    let fns = std::sync::Arc::new((r.clone(), f.clone(), s.clone()));
    let (f1, f2, f3) = (fns.clone(), fns.clone(), fns);
    let eta = OneForm::new(move |seeds| {
        let (a, _, _) = family_tensors(case, &f1.0, &f1.1, &f1.2, seeds)?;
        Ok([Jet::one(), Jet::zero(), -a])
    });
    let phi = Tensor11Field::new(move |seeds| {
        let (a, b, _) = family_tensors(case, &f2.0, &f2.1, &f2.2, seeds)?;
        let zero = Jet::zero();
        Ok([
            [zero, a, -(a * b)],
            [zero, b, 1.0 - b * b],
            [zero, Jet::one(), -b],
        ])
    });
    let g = MetricField::new(move |seeds| Ok(family_tensors(case, &f3.0, &f3.1, &f3.2, seeds)?.2));
    ParacontactStructure::new(label, VectorField::constant([1.0, 0.0, 0.0]), eta, phi, g, domain)
}

/// Rejects `r` that is not bounded away from zero on `domain`.
pub fn check_positive(r: &FunctionSpec, domain: Interval) -> Result<()> {
    if !domain.is_bounded() || domain.min >= domain.max {
        return Err(Error::DomainViolation(format!(
            "z-interval ({}, {}) must be bounded and nonempty",
            domain.min, domain.max
        )));
    }
    for k in 0..POSITIVITY_SAMPLES {
        let z = domain.min + (domain.max - domain.min) * (k as f64 + 0.5) / POSITIVITY_SAMPLES as f64;
        let v = r.value(z).map_err(|e| Error::DomainViolation(format!("r({z}) failed: {e}")))?;
        if !(v > R_FLOOR) {
            return Err(Error::DomainViolation(format!("r({z}) = {v} is not positive")));
        }
    }
    Ok(())
}

/// Validation sample: a 3×3×3 lattice at cell centres of `bounds`, keeping in-domain points.
fn validation_points(s: &ParacontactStructure, bounds: [Interval; 3]) -> Vec<ChartPoint> {
    let t = |iv: Interval, k: usize| iv.min + (iv.max - iv.min) * (k as f64 + 0.5) / 3.0;
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let p = ChartPoint::new(t(bounds[0], i), t(bounds[1], j), t(bounds[2], k));
                if s.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Checks every axiom residual on a validation sample.
pub fn validate_structure(s: &ParacontactStructure, bounds: [Interval; 3]) -> Result<()> {
    let pts = validation_points(s, bounds);
    if pts.is_empty() {
        return Err(Error::EmptyGridAfterExclusions);
    }
    for p in pts {
        let d = s.evaluate(&p)?;
        for r in axioms_from(&d)? {
            if !(r.value <= VALIDATION_TOL) {
                return Err(Error::ValidationFailure { check: r.name, residual: r.value, point: p });
            }
        }
    }
    Ok(())
}

/// Builds a family member on `(x, y) ∈ R²`, `z ∈ domain`, after checking `r > 0` and the axioms.
pub fn build_family(
    case: FamilyCase,
    r: &FunctionSpec,
    f: &FunctionSpec,
    s: &FunctionSpec,
    domain: Interval,
) -> Result<ParacontactStructure> {
    check_positive(r, domain)?;
    let label = match case {
        FamilyCase::Case1 => "case1",
        FamilyCase::Case2 => "case2",
    };
    let pred = DomainPredicate::new(format!("z in ({}, {})", domain.min, domain.max), move |p| domain.contains(p.z));
    let st = family_structure(label, case, r, f, s, pred);
    validate_structure(&st, [Interval::new(-1.0, 1.0), Interval::new(-1.0, 1.0), domain])?;
    Ok(st)
}

/// The worked example: first family with `r = z`, `f = 1`, `s = 2` on `z ≠ 0`.
pub fn example_preset() -> ParacontactStructure {
    Manifest::preset("ex1")
        .and_then(|m| m.build())
        .unwrap_or_else(|e| unreachable!("built-in example must build: {e}"))
}

/// Names accepted by [`Manifest::preset`].
pub const PRESETS: [&str; 3] = ["ex1", "h3-sl2", "heisenberg"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifestCase {
    Example,
    Case1,
    Case2,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionSources {
    pub r: String,
    pub f: String,
    pub s: String,
}

/// Component expressions in `x, y, z`; matrices are row-major, `phi[i][j] = φ^i_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSources {
    pub xi: [String; 3],
    pub eta: [String; 3],
    pub phi: [[String; 3]; 3],
    pub metric: [[String; 3]; 3],
}

/// Open per-axis bounds; `None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DomainBox {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Interval>,
}

impl DomainBox {
    pub fn axis(&self, a: Axis) -> Option<Interval> {
        match a {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn contains(&self, p: &ChartPoint) -> bool {
        Axis::ALL
            .iter()
            .all(|a| self.axis(*a).map_or(true, |iv| iv.contains(p.coord(*a))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    X,
    Y,
    Z,
}

impl From<AxisName> for Axis {
    fn from(a: AxisName) -> Axis {
        match a {
            AxisName::X => Axis::X,
            AxisName::Y => Axis::Y,
            AxisName::Z => Axis::Z,
        }
    }
}

/// Plane `axis = value`, removed together with points closer than `min_distance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcludedLocus {
    pub axis: AxisName,
    pub value: f64,
    pub min_distance: f64,
}

impl ExcludedLocus {
    pub fn excludes(&self, p: &ChartPoint) -> bool {
        (p.coord(self.axis.into()) - self.value).abs() <= self.min_distance
    }
}

/// Serializable description of a structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub label: String,
    pub case: ManifestCase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<FunctionSources>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<ComponentSources>,
    #[serde(default)]
    pub domain: DomainBox,
    #[serde(default)]
    pub excluded: Vec<ExcludedLocus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deformation: Option<f64>,
}

fn strings<const N: usize>(items: [&str; N]) -> [String; N] {
    items.map(str::to_string)
}

impl Manifest {
    pub fn family(case: FamilyCase, r: &str, f: &str, s: &str, z: Interval) -> Manifest {
        let (label, case) = match case {
            FamilyCase::Case1 => ("case1", ManifestCase::Case1),
            FamilyCase::Case2 => ("case2", ManifestCase::Case2),
        };
        Manifest {
            label: label.into(),
            case,
            functions: Some(FunctionSources { r: r.into(), f: f.into(), s: s.into() }),
            components: None,
            domain: DomainBox { x: None, y: None, z: Some(z) },
            excluded: Vec::new(),
            deformation: None,
        }
    }

    /// Built-in manifests; see [`PRESETS`].
    pub fn preset(name: &str) -> Result<Manifest> {
        match name {
            "ex1" => Ok(Manifest {
                label: "ex1".into(),
                case: ManifestCase::Example,
                functions: Some(FunctionSources { r: "z".into(), f: "1".into(), s: "2".into() }),
                components: None,
                domain: DomainBox::default(),
                excluded: vec![ExcludedLocus { axis: AxisName::Z, value: 0.0, min_distance: 0.0 }],
                deformation: None,
            }),
            // Left-invariant structure on a Lie group with h of h3 type,
            // λ = 3/2, μ = -2, κ = -13/4. Not a member of either family.
            "h3-sl2" => Ok(Manifest {
                label: "h3-sl2".into(),
                case: ManifestCase::Custom,
                functions: None,
                components: Some(ComponentSources {
                    xi: strings(["5/4", "-5*y/2", "5*z/2"]),
                    eta: strings(["8*y*z/5 + 4/5", "4*z/5", "0"]),
                    phi: [
                        strings(["-12*y*z^3/5 - 8*y*z/5 - 12*z^2/5", "-6*z^3/5 - 4*z/5", "6*z/5"]),
                        strings([
                            "24*y^2*z^3/5 + 16*y^2*z/5 + 36*y*z^2/5 + 8*y/5 + 12*z/5",
                            "12*y*z^3/5 + 8*y*z/5 + 6*z^2/5 + 4/5",
                            "-12*y*z/5 - 6/5",
                        ]),
                        strings(["-12*y*z^4/5 - 3*y/5 - 12*z^3/5 + 8*z/5", "-6*z^4/5 - 3/10", "6*z^2/5 - 4/5"]),
                    ],
                    metric: [
                        strings([
                            "-48*y^2*z^4/25 + 12*y^2/25 - 96*y*z^3/25 - 48*z^2/25 + 16/25",
                            "-24*y*z^4/25 + 6*y/25 - 24*z^3/25",
                            "24*y*z^2/25 + 16*y/25 + 24*z/25",
                        ]),
                        strings(["-24*y*z^4/25 + 6*y/25 - 24*z^3/25", "3/25 - 12*z^4/25", "12*z^2/25 + 8/25"]),
                        strings(["24*y*z^2/25 + 16*y/25 + 24*z/25", "12*z^2/25 + 8/25", "-12/25"]),
                    ],
                }),
                domain: DomainBox::default(),
                excluded: Vec::new(),
                deformation: None,
            }),
            // Flat para-Sasakian model: h = 0, κ = -1.
            "heisenberg" => Ok(Manifest {
                label: "heisenberg".into(),
                case: ManifestCase::Custom,
                functions: None,
                components: Some(ComponentSources {
                    xi: strings(["0", "0", "1"]),
                    eta: strings(["y", "-x", "1"]),
                    phi: [strings(["0", "1", "0"]), strings(["1", "0", "0"]), strings(["x", "-y", "0"])],
                    metric: [
                        strings(["y^2 - 1", "-x*y", "y"]),
                        strings(["-x*y", "1 + x^2", "-x"]),
                        strings(["y", "-x", "1"]),
                    ],
                }),
                domain: DomainBox::default(),
                excluded: Vec::new(),
                deformation: None,
            }),
            other => Err(Error::Manifest(format!(
                "unknown preset '{other}' (expected one of {})",
                PRESETS.join(", ")
            ))),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Manifest(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Manifest> {
        serde_json::from_str(text).map_err(|e| Error::Manifest(e.to_string()))
    }

    fn domain_predicate(&self) -> DomainPredicate {
        let domain = self.domain;
        let excluded = self.excluded.clone();
        let mut desc: Vec<String> = Vec::new();
        for a in Axis::ALL {
            if let Some(iv) = domain.axis(a) {
                desc.push(format!("{:?} in ({}, {})", a, iv.min, iv.max).to_lowercase());
            }
        }
        for e in &excluded {
            desc.push(format!("|{:?} - {}| > {}", Axis::from(e.axis), e.value, e.min_distance).to_lowercase());
        }
        let text = if desc.is_empty() { "R^3".to_string() } else { desc.join(", ") };
        DomainPredicate::new(text, move |p| domain.contains(p) && !excluded.iter().any(|e| e.excludes(p)))
    }

    /// Box used for validation: declared bounds, with unbounded axes clamped to `(-1, 1)`.
    pub fn validation_box(&self) -> [Interval; 3] {
        Axis::ALL.map(|a| {
            let iv = self.domain.axis(a).unwrap_or(Interval::new(-1.0, 1.0));
            Interval::new(
                if iv.min.is_finite() { iv.min } else { iv.max.min(1.0) - 2.0 },
                if iv.max.is_finite() { iv.max } else { iv.min.max(-1.0) + 2.0 },
            )
        })
    }

    fn functions(&self) -> Result<(FunctionSpec, FunctionSpec, FunctionSpec)> {
        let src = self
            .functions
            .as_ref()
            .ok_or_else(|| Error::Manifest(format!("case {:?} requires functions r, f, s", self.case)))?;
        Ok((parse_scalar_function(&src.r)?, parse_scalar_function(&src.f)?, parse_scalar_function(&src.s)?))
    }

    /// Builds and validates the structure, then applies the deformation if present.
    pub fn build(&self) -> Result<ParacontactStructure> {
        let pred = self.domain_predicate();
        let base = match self.case {
            ManifestCase::Example | ManifestCase::Case1 | ManifestCase::Case2 => {
                let (r, f, s) = self.functions()?;
                let case = if self.case == ManifestCase::Case2 { FamilyCase::Case2 } else { FamilyCase::Case1 };
                if self.case != ManifestCase::Example {
                    let z = self.domain.z.ok_or_else(|| {
                        Error::DomainViolation("family manifests need a bounded z interval".into())
                    })?;
                    check_positive(&r, z)?;
                }
                family_structure(&self.label, case, &r, &f, &s, pred)
            }
            ManifestCase::Custom => {
                let c = self
                    .components
                    .as_ref()
                    .ok_or_else(|| Error::Manifest("custom case requires components".into()))?;
                custom_structure(&self.label, c, pred)?
            }
        };
        validate_structure(&base, self.validation_box())?;
        match self.deformation {
            None => Ok(base),
            Some(alpha) => {
                let mut s = d_homothetic_deform(&base, alpha)?;
                s.label = self.label.clone();
                Ok(s)
            }
        }
    }
}

fn parse_xyz(text: &str) -> Result<Expr> {
    Ok(expr::parse(text, &[Axis::X, Axis::Y, Axis::Z])?)
}

fn custom_structure(label: &str, c: &ComponentSources, domain: DomainPredicate) -> Result<ParacontactStructure> {
    let vec_exprs = |v: &[String; 3]| -> Result<[Expr; 3]> { Ok([parse_xyz(&v[0])?, parse_xyz(&v[1])?, parse_xyz(&v[2])?]) };
    let mat_exprs = |m: &[[String; 3]; 3]| -> Result<[[Expr; 3]; 3]> {
        Ok([vec_exprs(&m[0])?, vec_exprs(&m[1])?, vec_exprs(&m[2])?])
    };
    let (xi, eta, phi, g) = (vec_exprs(&c.xi)?, vec_exprs(&c.eta)?, mat_exprs(&c.phi)?, mat_exprs(&c.metric)?);
    for i in 0..3 {
        for j in 0..i {
            if c.metric[i][j] != c.metric[j][i] {
                return Err(Error::Manifest(format!("metric entry ({i},{j}) differs from ({j},{i})")));
            }
        }
    }
    fn eval_vec(v: &[Expr; 3], s: &[Jet; 3]) -> Result<[Jet; 3]> {
        Ok([v[0].eval(s)?, v[1].eval(s)?, v[2].eval(s)?])
    }
    fn eval_mat(m: &[[Expr; 3]; 3], s: &[Jet; 3]) -> Result<JetMat> {
        Ok([eval_vec(&m[0], s)?, eval_vec(&m[1], s)?, eval_vec(&m[2], s)?])
    }
    Ok(ParacontactStructure::new(
        label,
        VectorField::new(move |s| eval_vec(&xi, s)),
        OneForm::new(move |s| eval_vec(&eta, s)),
        Tensor11Field::new(move |s| eval_mat(&phi, s)),
        MetricField::new(move |s| eval_mat(&g, s)),
        domain,
    ))
}
