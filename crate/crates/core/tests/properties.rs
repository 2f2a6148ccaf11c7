mod common;

use common::*;
use paracontact_core::chart::local_geometry;
use paracontact_core::families::{FamilyCase, Interval, Manifest};
use paracontact_core::jet::{jet_seed, Jet};
use paracontact_core::nullity::build_h_frame;
use paracontact_core::paracontact::ParacontactStructure;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = f64> {
    -1.0..1.0f64
}

fn metric_coeffs() -> impl Strategy<Value = [[f64; 10]; 6]> {
    prop::array::uniform6(prop::array::uniform10(coeff()))
}

fn field_coeffs() -> impl Strategy<Value = [[f64; 10]; 3]> {
    prop::array::uniform3(prop::array::uniform10(coeff()))
}

fn near_origin() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-0.5..0.5f64)
}

fn cubic_coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(coeff(), 20)
}

fn jet_of(coeffs: &[f64], p: [f64; 3]) -> Jet {
    polynomial(&jet_seed(p[0], p[1], p[2]).unwrap(), &cubic_monomials(), coeffs)
}

fn close(a: &Jet, b: &Jet, tol: f64) -> bool {
    cubic_monomials().iter().all(|m| (a.taylor_coeff(m[0], m[1], m[2]) - b.taylor_coeff(m[0], m[1], m[2])).abs() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cubic_polynomials_have_exact_jets(c in cubic_coeffs(), p in prop::array::uniform3(-2.0..2.0f64)) {
        let j = jet_of(&c, p);
        for m in cubic_monomials() {
            let want = polynomial_derivative(&cubic_monomials(), &c, p, m);
            let got = j.derivative(m[0], m[1], m[2]).unwrap();
            prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{m:?}: {got} vs {want}");
        }
    }

    #[test]
    fn jet_arithmetic_commutes_and_associates(a in cubic_coeffs(), b in cubic_coeffs(), c in cubic_coeffs(), p in near_origin()) {
        let (a, b, c) = (jet_of(&a, p), jet_of(&b, p), jet_of(&c, p));
        prop_assert!(close(&(a + b), &(b + a), 0.0));
        prop_assert!(close(&(a * b), &(b * a), 1e-12));
        prop_assert!(close(&((a + b) + c), &(a + (b + c)), 1e-12));
        prop_assert!(close(&((a * b) * c), &(a * (b * c)), 1e-12));
        prop_assert!(close(&(a * (b + c)), &(a * b + a * c), 1e-12));
    }

    #[test]
    fn composite_jets_match_finite_differences(
        choices in prop::collection::vec(any::<u32>(), 64),
        p in prop::array::uniform3(-1.0..1.0f64),
    ) {
        let text = composite_expression(&mut choices.into_iter(), 4);
        let e = parse_xyz(&text);
        let j = e.eval(&jet_seed(p[0], p[1], p[2]).unwrap()).unwrap();
        let (fd_gradient, fd_hessian) = extrapolated_differences(|q| e.value_at(q), p);
        let g = j.gradient();
        let h = j.hessian();
        for a in 0..3 {
            prop_assert!((g[a] - fd_gradient[a]).abs() <= 1e-5 * g[a].abs().max(1.0), "{text}: d{a}");
            for b in 0..3 {
                prop_assert!((h[a][b] - fd_hessian[a][b]).abs() <= 1e-5 * h[a][b].abs().max(1.0), "{text}: d{a}d{b}");
            }
        }
    }

    #[test]
    fn levi_civita_connection_is_torsion_free_and_compatible(
        g in metric_coeffs(), fx in field_coeffs(), fy in field_coeffs(), fz in field_coeffs(), p in near_origin(),
    ) {
        let geom = local_geometry(&quadratic_metric(g), &point(p)).unwrap();
        let s = point(p).seeds().unwrap();
        let d = connection_defects(&geom, &quadratic_field(&s, &fx), &quadratic_field(&s, &fy), &quadratic_field(&s, &fz)).unwrap();
        prop_assert!(d[0] < 1e-8, "torsion {}", d[0]);
        prop_assert!(d[1] < 1e-8, "compatibility {}", d[1]);
        prop_assert!(d[2] < 1e-8, "bianchi {}", d[2]);
    }

    #[test]
    fn curvature_is_tensorial(
        g in metric_coeffs(), fx in field_coeffs(), fy in field_coeffs(), fz in field_coeffs(),
        f in prop::array::uniform10(coeff()), p in near_origin(),
    ) {
        let geom = local_geometry(&quadratic_metric(g), &point(p)).unwrap();
        let s = point(p).seeds().unwrap();
        let scalar = polynomial(&s, &QUADRATIC, &f);
        let defect = tensoriality_defect(&geom, &quadratic_field(&s, &fx), &quadratic_field(&s, &fy), &quadratic_field(&s, &fz), &scalar).unwrap();
        prop_assert!(defect < 1e-8, "defect {defect}");
    }
}

fn linear_family(case: FamilyCase, a: f64, b: f64, c: f64, d: f64) -> ParacontactStructure {
    let r = format!("{a} + {b} * z");
    let f = format!("{c} * z^2");
    let s = format!("{d} * sin(z)");
    Manifest::family(case, &r, &f, &s, Interval::new(0.5, 3.5)).build().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn laplacian_forms_agree(
        case1 in any::<bool>(),
        a in 0.6..1.5f64, b in 0.0..1.0f64, c in coeff(), d in coeff(),
        f in prop::array::uniform10(coeff()),
        p in (-1.0..1.0f64, -1.0..1.0f64, 1.0..3.0f64),
    ) {
        let case = if case1 { FamilyCase::Case1 } else { FamilyCase::Case2 };
        let s = linear_family(case, a, b, c, d);
        let pt = point([p.0, p.1, p.2]);
        let data = s.evaluate(&pt).unwrap();
        let frame = build_h_frame(&s, &pt).unwrap().signed_frame(&data.xi);
        let scalar = polynomial(&pt.seeds().unwrap(), &QUADRATIC, &f);
        let by_frame = data.geom.laplacian_signed_frame(&frame, &scalar).unwrap();
        let by_divergence = data.geom.laplacian_divergence(&scalar).unwrap();
        prop_assert!((by_frame - by_divergence).abs() < 1e-7 * by_frame.abs().max(1.0), "{by_frame} vs {by_divergence}");
    }
}
