//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::Instant;

use common::*;
use paracontact_core::chart::{local_geometry, ChartPoint, Tensor11Field};
use paracontact_core::families::{example_preset, FamilyCase, Interval, Manifest};
use paracontact_core::jet::jet_seed;
use paracontact_core::nullity::extract_nullity;
use paracontact_core::paracontact::ParacontactStructure;
use paracontact_core::verify::{run_suites, run_suites_on_points, CheckReport, SampleGrid, Suite, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXAMPLE_BOX: [[f64; 2]; 3] = [[-1.0, 1.0], [-1.0, 1.0], [1.0, 3.0]];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn failing_entries(r: &CheckReport) -> Vec<String> {
    r.entries.iter().filter(|e| !e.pass).map(|e| format!("{} {:.3e} > {:.1e}", e.check, e.max_residual, e.tolerance)).collect()
}

fn example_report() -> Result<CheckReport, String> {
    let grid = SampleGrid::lattice(EXAMPLE_BOX, [5, 5, 5]).map_err(|e| e.to_string())?;
    let suites = [Suite::Axioms, Suite::L1, Suite::L2, Suite::Curvature, Suite::MainTheorem];
    run_suites(&example_preset(), &suites, &grid, &Tolerances::default()).map_err(|e| e.to_string())
}

fn example_fidelity() -> Outcome {
    let r = example_report()?;
    let failing = failing_entries(&r);
    ensure(failing.is_empty(), || failing.join("; "))?;
    ensure(r.skipped.is_empty(), || format!("skipped suites: {:?}", r.skipped))?;
    let worst = r.entries.iter().map(|e| e.max_residual / e.tolerance).fold(0.0, f64::max);
    Ok(format!("{} entries on 125 points, worst residual/tolerance {worst:.1e}", r.entries.len()))
}

fn nullity_certification() -> Outcome {
    let s = example_preset();
    let points = SampleGrid::random(EXAMPLE_BOX, 100, 20241016).map_err(|e| e.to_string())?.points(&s);
    ensure(points.len() == 100, || format!("{} points drawn", points.len()))?;
    let mut worst = [0.0f64; 3];
    for p in &points {
        let n = extract_nullity(&s, p).map_err(|e| e.to_string())?;
        let mu = n.mu.ok_or("mu undefined")?.value();
        let nu = n.nu.ok_or("nu undefined")?.value();
        let d = [(n.kappa.value() - (p.z * p.z - 1.0)).abs(), (mu - 2.0 * (1.0 + p.z)).abs(), nu.abs()];
        for k in 0..3 {
            worst[k] = worst[k].max(d[k]);
        }
    }
    ensure(worst.iter().all(|w| *w < 1e-7), || format!("max deviations kappa/mu/nu {worst:.3?}"))?;
    Ok(format!("max deviations kappa {:.1e}, mu {:.1e}, nu {:.1e}", worst[0], worst[1], worst[2]))
}

const FAMILY_Z: Interval = Interval { min: 0.5, max: 3.0 };
const FAMILY_BOX: [[f64; 2]; 3] = [[-1.0, 1.0], [-1.0, 1.0], [0.5, 3.0]];

/// Random `(r, f, s)` with `r = a + b sin(c z)` inside `[0.7, 2.5]`.
fn random_family(rng: &mut ChaCha8Rng, case: FamilyCase) -> Manifest {
    let a = rng.gen_range(1.2..2.0);
    let b = rng.gen_range(-0.5..0.5);
    let c = rng.gen_range(0.5..2.0);
    let r = format!("{a:.6} + {b:.6} * sin({c:.6} * z)");
    let f = format!("{:.6} * z^2 + {:.6} * cos(z)", rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let s = format!("{:.6} * z + {:.6} * exp(-z / 2)", rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    Manifest::family(case, &r, &f, &s, FAMILY_Z)
}

fn family_closure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let suites = [Suite::Axioms, Suite::L1, Suite::MainTheorem];
    let mut worst_branch = 0.0f64;
    for (case, branch) in [(FamilyCase::Case1, "plus"), (FamilyCase::Case2, "minus")] {
        for i in 0..10 {
            let m = random_family(&mut rng, case);
            let src = m.functions.clone().unwrap();
            let r_fn = paracontact_core::families::parse_scalar_function(&src.r).map_err(|e| e.to_string())?;
            for k in 0..=100 {
                let z = FAMILY_Z.min + (FAMILY_Z.max - FAMILY_Z.min) * k as f64 / 100.0;
                let rz = r_fn.value(z).map_err(|e| e.to_string())?;
                ensure((0.5..=3.0).contains(&rz), || format!("r({z}) = {rz} outside [0.5, 3]"))?;
            }
            let s = m.build().map_err(|e| format!("{case:?} #{i}: {e}"))?;
            let grid = SampleGrid::random(FAMILY_BOX, 200, 100 + i).map_err(|e| e.to_string())?;
            let r = run_suites(&s, &suites, &grid, &Tolerances::default()).map_err(|e| e.to_string())?;
            let failing = failing_entries(&r);
            ensure(failing.is_empty(), || format!("{case:?} #{i} ({}): {}", src.r, failing.join("; ")))?;
            ensure(r.metadata.points_in_domain == 200, || format!("{case:?} #{i}: {} points", r.metadata.points_in_domain))?;
            let note = r.entry("main.mu_branch").and_then(|e| e.note.clone()).unwrap_or_default();
            ensure(note.starts_with(&format!("branch {branch} ")), || format!("{case:?} #{i}: {note}"))?;
            let bg = r.entry("main.branch_gradient").ok_or("missing main.branch_gradient")?.max_residual;
            ensure(bg < 1e-7, || format!("{case:?} #{i}: branch gradient residual {bg:.3e}"))?;
            worst_branch = worst_branch.max(bg);
        }
    }
    Ok(format!("20 instances x 200 points, worst B/A residual {worst_branch:.1e}"))
}

fn scalar_curvature() -> Outcome {
    let s = example_preset();
    let probe = ChartPoint::new(1.0, 1.0, 2.0);
    let tau = s.evaluate(&probe).and_then(|d| d.geom.ricci_and_scalar()).map_err(|e| e.to_string())?.1.value();
    ensure((tau - 18.375).abs() < 1e-9, || format!("tau at probe {tau}"))?;
    let probe_report = run_suites_on_points(&s, &[Suite::Curvature], &[probe], None, &Tolerances::default())
        .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut reports = vec![probe_report, {
        let grid = SampleGrid::lattice(EXAMPLE_BOX, [4, 4, 4]).map_err(|e| e.to_string())?;
        run_suites(&s, &[Suite::Curvature], &grid, &Tolerances::default()).map_err(|e| e.to_string())?
    }];
    for case in [FamilyCase::Case1, FamilyCase::Case2] {
        for _ in 0..2 {
            let fam = random_family(&mut rng, case).build().map_err(|e| e.to_string())?;
            let grid = SampleGrid::random(FAMILY_BOX, 50, 11).map_err(|e| e.to_string())?;
            reports.push(run_suites(&fam, &[Suite::Curvature], &grid, &Tolerances::default()).map_err(|e| e.to_string())?);
        }
    }
    let (mut scalar, mut laplace) = (0.0f64, 0.0f64);
    for r in &reports {
        scalar = scalar.max(r.entry("curvature.scalar_formula").ok_or("missing scalar_formula")?.max_residual);
        laplace = laplace.max(r.entry("curvature.laplacian_formula").ok_or("missing laplacian_formula")?.max_residual);
    }
    ensure(scalar < 1e-6 && laplace < 1e-7, || format!("scalar {scalar:.3e}, laplacian {laplace:.3e}"))?;
    Ok(format!("tau(1,1,2) = {tau}, scalar formula {scalar:.1e}, laplacian formula {laplace:.1e}"))
}

fn deformation() -> Outcome {
    let s = example_preset();
    let grid = SampleGrid::random(EXAMPLE_BOX, 50, 5).map_err(|e| e.to_string())?;
    let mut worst_nu = 0.0f64;
    for alpha in [0.5, 2.0, 3.0] {
        let r = run_suites(&s, &[Suite::Deformation(alpha)], &grid, &Tolerances::default()).map_err(|e| e.to_string())?;
        let axioms: Vec<_> = r.entries.iter().filter(|e| !matches!(e.check.as_str(), "deformation.nullity_fit" | "deformation.nu_vanishes" | "deformation.paranullity")).collect();
        ensure(axioms.iter().all(|e| e.pass), || format!("alpha {alpha}: {}", failing_entries(&r).join("; ")))?;
        let nu = r.entry("deformation.nu_vanishes").ok_or("missing nu entry")?;
        ensure(nu.points_evaluated == 50 && nu.max_residual < 1e-6, || format!("alpha {alpha}: nu {:.3e} on {} points", nu.max_residual, nu.points_evaluated))?;
        worst_nu = worst_nu.max(nu.max_residual);
    }
    Ok(format!("alpha in {{0.5, 2, 3}}, max |nu| {worst_nu:.1e}"))
}

fn numerical_hygiene() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_fd = 0.0f64;
    for i in 0..100 {
        let choices: Vec<u32> = (0..64).map(|_| rng.gen()).collect();
        let text = composite_expression(&mut choices.into_iter(), 4);
        let e = parse_xyz(&text);
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let j = e.eval(&jet_seed(p[0], p[1], p[2]).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let (g, h) = extrapolated_differences(|q| e.value_at(q), p);
        for a in 0..3 {
            let mut check = |jet: f64, fd: f64| {
                let d = (jet - fd).abs() / jet.abs().max(1.0);
                worst_fd = worst_fd.max(d);
                ensure(d <= 1e-5, || format!("expression #{i} {text}: jet {jet} vs fd {fd}"))
            };
            check(j.gradient()[a], g[a])?;
            for b in 0..3 {
                check(j.hessian()[a][b], h[a][b])?;
            }
        }
    }
    let mut worst = [0.0f64; 3];
    let draw10 = |rng: &mut ChaCha8Rng| -> [f64; 10] { std::array::from_fn(|_| rng.gen_range(-1.0..1.0)) };
    for _ in 0..100 {
        let g: [[f64; 10]; 6] = std::array::from_fn(|_| draw10(&mut rng));
        let fields: [[[f64; 10]; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| draw10(&mut rng)));
        let p = point([rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)]);
        let geom = local_geometry(&quadratic_metric(g), &p).map_err(|e| e.to_string())?;
        let s = p.seeds().map_err(|e| e.to_string())?;
        let [x, y, z] = fields.map(|c| quadratic_field(&s, &c));
        let d = connection_defects(&geom, &x, &y, &z).map_err(|e| e.to_string())?;
        for k in 0..3 {
            worst[k] = worst[k].max(d[k]);
        }
    }
    ensure(worst.iter().all(|w| *w < 1e-8), || format!("torsion/compatibility/bianchi {worst:.3?}"))?;
    Ok(format!(
        "jet vs fd {worst_fd:.1e} (relative); torsion {:.1e}, compatibility {:.1e}, bianchi {:.1e}",
        worst[0], worst[1], worst[2]
    ))
}

fn negative_control() -> Outcome {
    let base = example_preset();
    let phi = base.phi.clone();
    let perturbed_phi = Tensor11Field::new(move |s| {
        let mut m = phi.eval_seeds(s)?;
        m[1][2] = m[1][2] + 1e-3;
        Ok(m)
    });
    let s = ParacontactStructure::new("ex1 perturbed", base.xi.clone(), base.eta.clone(), perturbed_phi, base.g.clone(), base.domain.clone());
    let grid = SampleGrid::lattice([[-0.1, 0.1], [-0.1, 0.1], [0.9, 1.1]], [3, 3, 3]).map_err(|e| e.to_string())?;
    let r = run_suites(&s, &[Suite::Axioms], &grid, &Tolerances::default()).map_err(|e| e.to_string())?;
    ensure(!r.all_pass(), || "perturbed structure passed all axioms".into())?;
    let worst = r.entries.iter().max_by(|a, b| a.max_residual.total_cmp(&b.max_residual)).ok_or("no entries")?;
    ensure((1e-4..=1e-2).contains(&worst.max_residual), || format!("{} residual {:.3e}", worst.check, worst.max_residual))?;
    Ok(format!("{} of {} axioms fail, largest {} = {:.2e}", failing_entries(&r).len(), r.entries.len(), worst.check, worst.max_residual))
}

fn determinism() -> Outcome {
    let a = example_report()?.to_json().map_err(|e| e.to_string())?;
    let b = example_report()?.to_json().map_err(|e| e.to_string())?;
    ensure(a.as_bytes() == b.as_bytes(), || "reports differ".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("example fidelity", example_fidelity),
        ("nullity certification", nullity_certification),
        ("family closure", family_closure),
        ("scalar curvature formula", scalar_curvature),
        ("deformation", deformation),
        ("numerical hygiene", numerical_hygiene),
        ("negative control", negative_control),
        ("determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail} [{secs:.1}s]", n + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
