//! Grid-evaluated identity suites.
//!
//! Points are evaluated in parallel; reduction into entries runs in grid
//! order on one thread, so reports are deterministic.

pub mod grid;
pub mod report;
pub mod suites;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chart::ChartPoint;
use crate::error::{Error, Result};
use crate::nullity::{extract_from, extract_with_frame, h_frame_from, Branch, NullityCoefficients, Regime, LAMBDA_MIN};
use crate::paracontact::{classify_from, d_homothetic_deform, HType, ParacontactStructure, PointData, H_TYPE_TOL};

pub use grid::{GridMode, SampleGrid};
pub use report::{emit_report, CheckEntry, CheckReport, PointResidual, ReportFormat, SkippedSuite};
use suites::EntryDef;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Identities with at most one derivative of the structure.
    pub first_order: f64,
    /// Curvature-level identities.
    pub curvature: f64,
    /// Frame-based checks skip points with `λ` below this.
    pub lambda_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { first_order: 1e-8, curvature: 1e-7, lambda_min: LAMBDA_MIN }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Suite {
    Axioms,
    L1,
    L2,
    L3,
    Curvature,
    MainTheorem,
    Deformation(f64),
}

impl Suite {
    pub const STANDARD: [Suite; 6] =
        [Suite::Axioms, Suite::L1, Suite::L2, Suite::L3, Suite::Curvature, Suite::MainTheorem];

    fn defs(&self) -> Vec<EntryDef> {
        match self {
            Suite::Axioms => suites::axiom_defs("axioms"),
            Suite::L1 => suites::l1_defs(),
            Suite::L2 => suites::l2_defs(),
            Suite::L3 => suites::l3_defs(),
            Suite::Curvature => suites::curvature_defs(),
            Suite::MainTheorem => suites::main_defs(),
            Suite::Deformation(_) => suites::deformation_defs(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Suite::Axioms => f.write_str("axioms"),
            Suite::L1 => f.write_str("L1"),
            Suite::L2 => f.write_str("L2"),
            Suite::L3 => f.write_str("L3"),
            Suite::Curvature => f.write_str("curvature"),
            Suite::MainTheorem => f.write_str("main_theorem"),
            Suite::Deformation(a) => write!(f, "deformation:{a}"),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    /// Accepts `axioms`, `L1`, `L2`, `L3`, `curvature`, `main_theorem` and `deformation:<alpha>`.
    fn from_str(s: &str) -> Result<Suite> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "axioms" => Suite::Axioms,
            "l1" => Suite::L1,
            "l2" => Suite::L2,
            "l3" => Suite::L3,
            "curvature" => Suite::Curvature,
            "main_theorem" | "main" => Suite::MainTheorem,
            other => match other.strip_prefix("deformation:") {
                Some(a) => Suite::Deformation(
                    a.parse().map_err(|_| Error::InvalidArgument(format!("invalid deformation parameter '{a}'")))?,
                ),
                None => return Err(Error::InvalidArgument(format!("unknown suite '{s}'"))),
            },
        })
    }
}

/// Per-point classification for frame-based suites.
enum Analysis {
    Framed { frame: crate::nullity::HFrame, nullity: NullityCoefficients },
    Killing(NullityCoefficients),
    /// Outside every frame-based regime (small λ, h2 type, degenerate h).
    Excluded,
}

fn analyze(d: &PointData, tol: &Tolerances) -> Result<Analysis> {
    match classify_from(d, H_TYPE_TOL) {
        HType::Zero => Ok(Analysis::Killing(extract_from(d)?)),
        HType::H1 { lambda } | HType::H3 { lambda } if lambda >= tol.lambda_min => {
            let frame = h_frame_from(d)?;
            let nullity = extract_with_frame(d, &frame)?;
            Ok(Analysis::Framed { frame, nullity })
        }
        _ => Ok(Analysis::Excluded),
    }
}

/// Outcome of one suite at one point.
enum Outcome {
    Values { values: Vec<f64>, lambda: Option<f64>, info: Info },
    Excluded,
    Errored,
}

#[derive(Default, Clone, Copy)]
struct Info {
    branch: Option<Branch>,
    kappa: Option<f64>,
    mu: Option<f64>,
}

fn values(values: Vec<f64>, lambda: Option<f64>, info: Info) -> Outcome {
    Outcome::Values { values, lambda, info }
}

fn suite_outcome(suite: Suite, d: &PointData, analysis: &Result<Analysis>) -> Outcome {
    let run = || -> Result<Outcome> {
        if suite == Suite::Axioms {
            return Ok(values(suites::axiom_values(d)?, None, Info::default()));
        }
        let analysis = match analysis {
            Ok(a) => a,
            Err(_) => return Ok(Outcome::Errored),
        };
        Ok(match (suite, analysis) {
            (Suite::L1, Analysis::Framed { nullity, .. } | Analysis::Killing(nullity)) => {
                values(suites::l1_values(d, nullity)?, None, Info::default())
            }
            (Suite::L2, Analysis::Framed { frame, nullity }) if frame.regime == Regime::KappaGt => {
                values(suites::l2_values(d, frame, nullity)?, Some(frame.lambda.value()), Info::default())
            }
            (Suite::L3, Analysis::Framed { frame, nullity }) if frame.regime == Regime::KappaLt => {
                values(suites::l3_values(d, frame, nullity)?, Some(frame.lambda.value()), Info::default())
            }
            (Suite::Curvature, Analysis::Framed { frame, nullity }) => {
                values(suites::curvature_values(d, frame, nullity)?, Some(frame.lambda.value()), Info::default())
            }
            (Suite::MainTheorem, Analysis::Framed { frame, nullity }) if frame.regime == Regime::KappaGt => {
                let (v, branch) = suites::main_values(d, frame, nullity)?;
                values(v, Some(frame.lambda.value()), Info { branch: Some(branch), ..Info::default() })
            }
            _ => Outcome::Excluded,
        })
    };
    run().unwrap_or(Outcome::Errored)
}

/// Deformation suite: axioms on every point, nullity entries where a frame exists.
fn deformation_outcome(d: &PointData, tol: &Tolerances) -> Outcome {
    let run = || -> Result<Outcome> {
        let mut v = suites::axiom_values(d)?;
        let (tail, lambda, info) = match analyze(d, tol)? {
            Analysis::Framed { frame, nullity } => (
                suites::deformation_nullity_values(d, &nullity)?,
                Some(frame.lambda.value()),
                Info { branch: None, kappa: Some(nullity.kappa.value()), mu: nullity.mu.map(|m| m.value()) },
            ),
            Analysis::Killing(nullity) => (
                suites::deformation_nullity_values(d, &nullity)?,
                None,
                Info { branch: None, kappa: Some(nullity.kappa.value()), mu: None },
            ),
            Analysis::Excluded => (vec![f64::NAN; 3], None, Info::default()),
        };
        v.extend(tail);
        Ok(values(v, lambda, info))
    };
    run().unwrap_or(Outcome::Errored)
}

struct Accumulator {
    def: EntryDef,
    max: f64,
    argmax: Option<ChartPoint>,
    evaluated: usize,
    excluded: usize,
    errored: usize,
    samples: Vec<PointResidual>,
}

impl Accumulator {
    fn new(def: EntryDef) -> Self {
        Accumulator { def, max: 0.0, argmax: None, evaluated: 0, excluded: 0, errored: 0, samples: Vec::new() }
    }

    fn push(&mut self, p: ChartPoint, r: f64) {
        if r.is_nan() {
            self.excluded += 1;
            return;
        }
        self.evaluated += 1;
        if self.argmax.is_none() || r > self.max {
            self.max = r;
            self.argmax = Some(p);
        }
        self.samples.push(PointResidual { point: p, residual: r });
    }

    fn finish(mut self, tol: &Tolerances, lambda_floor: f64, note: Option<String>) -> CheckEntry {
        let mut tolerance = match self.def.tier {
            suites::Tier::FirstOrder => tol.first_order,
            suites::Tier::Curvature => tol.curvature,
        };
        if self.def.inverse_lambda && lambda_floor.is_finite() && lambda_floor > 0.0 {
            tolerance *= (1.0 / lambda_floor).max(1.0);
        }
        let pass = self.evaluated > 0 && self.max <= tolerance;
        self.samples.retain(|s| !(s.residual <= tolerance));
        // Stable sort keeps grid order among equal residuals.
        self.samples.sort_by(|a, b| b.residual.total_cmp(&a.residual));
        self.samples.truncate(report::WORST_POINTS);
        CheckEntry {
            check: self.def.name,
            anchor: self.def.anchor.to_string(),
            max_residual: self.max,
            argmax: self.argmax,
            tolerance,
            pass,
            points_evaluated: self.evaluated,
            points_excluded: self.excluded,
            errored_points: self.errored,
            failing_points: self.samples,
            note,
        }
    }
}

fn branch_note(infos: &[Info]) -> Option<String> {
    let plus = infos.iter().filter(|i| i.branch == Some(Branch::Plus)).count();
    let minus = infos.iter().filter(|i| i.branch == Some(Branch::Minus)).count();
    let degenerate = infos.iter().filter(|i| i.branch == Some(Branch::Degenerate)).count();
    let kind = match (plus, minus, degenerate) {
        (0, 0, 0) => return None,
        (_, 0, 0) => "plus",
        (0, _, 0) => "minus",
        (0, 0, _) => "degenerate",
        _ => "mixed",
    };
    Some(format!("branch {kind} (plus {plus}, minus {minus}, degenerate {degenerate})"))
}

fn range_note(infos: &[Info]) -> Option<String> {
    let range = |vals: Vec<f64>| {
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (!vals.is_empty()).then(|| format!("[{lo:.9e}, {hi:.9e}]"))
    };
    let k = range(infos.iter().filter_map(|i| i.kappa).collect())?;
    let m = range(infos.iter().filter_map(|i| i.mu).collect()).unwrap_or_else(|| "undefined".into());
    Some(format!("deformed kappa in {k}, deformed mu in {m}"))
}

fn reduce(
    suite: Suite,
    points: &[ChartPoint],
    outcomes: Vec<Outcome>,
    tol: &Tolerances,
    report: &mut CheckReport,
) {
    let defs = suite.defs();
    let mut accs: Vec<Accumulator> = defs.into_iter().map(Accumulator::new).collect();
    let mut lambda_floor = f64::INFINITY;
    let mut infos = Vec::new();
    let mut in_regime = 0;
    for (p, o) in points.iter().zip(outcomes) {
        match o {
            Outcome::Values { values, lambda, info } => {
                in_regime += 1;
                debug_assert_eq!(values.len(), accs.len());
                for (acc, v) in accs.iter_mut().zip(values) {
                    acc.push(*p, v);
                }
                if let Some(l) = lambda {
                    lambda_floor = lambda_floor.min(l);
                }
                infos.push(info);
            }
            Outcome::Excluded => accs.iter_mut().for_each(|a| a.excluded += 1),
            Outcome::Errored => accs.iter_mut().for_each(|a| a.errored += 1),
        }
    }
    if in_regime == 0 {
        let errored = accs.first().map_or(0, |a| a.errored);
        report.skipped.push(SkippedSuite {
            suite: suite.to_string(),
            reason: if errored > 0 {
                format!("all {errored} points failed to evaluate")
            } else {
                "no grid point lies in the regime of this suite".into()
            },
        });
        return;
    }
    for acc in accs {
        let note = match (suite, acc.def.name.as_str()) {
            (Suite::MainTheorem, "main.mu_branch") => branch_note(&infos),
            (Suite::Deformation(_), "deformation.nullity_fit") => range_note(&infos),
            _ => None,
        };
        report.entries.push(acc.finish(tol, lambda_floor, note));
    }
}

fn metadata(s: &ParacontactStructure, grid: Option<&SampleGrid>, description: String, suites: &[Suite], tol: &Tolerances, n: usize) -> report::ReportMetadata {
    report::ReportMetadata {
        schema_version: report::SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        structure: s.label.clone(),
        domain: s.domain.description().to_string(),
        grid: grid.copied(),
        grid_description: description,
        seed: grid.and_then(|g| g.seed()),
        suites: suites.iter().map(|s| s.to_string()).collect(),
        tolerances: *tol,
        points_in_domain: n,
        conventions: vec![
            "compatibility uses dη(X,Y) = ½(Xη(Y) - Yη(X) - η([X,Y]))".into(),
            "contact volume uses the unnormalized dη".into(),
            "frame signs ε = (ξ:+1, X:-1, φX:+1)".into(),
        ],
    }
}

/// Runs `suites` on an explicit point list.
pub fn run_suites_on_points(
    s: &ParacontactStructure,
    suites: &[Suite],
    points: &[ChartPoint],
    grid: Option<&SampleGrid>,
    tol: &Tolerances,
) -> Result<CheckReport> {
    let points: Vec<ChartPoint> = points.iter().copied().filter(|p| s.contains(p)).collect();
    if points.is_empty() {
        return Err(Error::EmptyGridAfterExclusions);
    }
    let description = grid.map_or_else(|| format!("{} explicit points", points.len()), |g| g.to_string());
    let mut report = CheckReport {
        metadata: metadata(s, grid, description, suites, tol, points.len()),
        entries: Vec::new(),
        skipped: Vec::new(),
    };
    let frame_suites: Vec<Suite> = suites.iter().copied().filter(|x| !matches!(x, Suite::Axioms | Suite::Deformation(_))).collect();
    let needs_analysis = !frame_suites.is_empty();
    let base: Vec<Vec<Outcome>> = points
        .par_iter()
        .map(|p| {
            let d = match s.evaluate(p) {
                Ok(d) => d,
                Err(_) => return suites.iter().map(|_| Outcome::Errored).collect(),
            };
            let analysis = if needs_analysis { analyze(&d, tol) } else { Ok(Analysis::Excluded) };
            suites
                .iter()
                .map(|suite| match suite {
                    Suite::Deformation(_) => Outcome::Excluded,
                    other => suite_outcome(*other, &d, &analysis),
                })
                .collect()
        })
        .collect();
    let mut per_suite: Vec<Vec<Outcome>> = suites.iter().map(|_| Vec::with_capacity(points.len())).collect();
    for row in base {
        for (slot, o) in per_suite.iter_mut().zip(row) {
            slot.push(o);
        }
    }
    for (i, suite) in suites.iter().enumerate() {
        let outcomes = std::mem::take(&mut per_suite[i]);
        if let Suite::Deformation(alpha) = suite {
            let deformed = d_homothetic_deform(s, *alpha)?;
            let outs: Vec<Outcome> = points
                .par_iter()
                .map(|p| match deformed.evaluate(p) {
                    Ok(d) => deformation_outcome(&d, tol),
                    Err(_) => Outcome::Errored,
                })
                .collect();
            reduce(*suite, &points, outs, tol, &mut report);
        } else {
            reduce(*suite, &points, outcomes, tol, &mut report);
        }
    }
    report.sort();
    Ok(report)
}

/// Runs `suites` on the in-domain points of `grid`.
pub fn run_suites(s: &ParacontactStructure, suites: &[Suite], grid: &SampleGrid, tol: &Tolerances) -> Result<CheckReport> {
    run_suites_on_points(s, suites, &grid.points(s), Some(grid), tol)
}

pub fn run_suite(s: &ParacontactStructure, suite: Suite, grid: &SampleGrid, tol: &Tolerances) -> Result<CheckReport> {
    run_suites(s, &[suite], grid, tol)
}
