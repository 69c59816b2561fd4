use cogrowth_algebraic::PolynomialEquation;
use cogrowth_asymptotics::{
    find_critical_point, find_polynomial_critical_point, growth_and_moments, growth_and_moments_polynomial,
    minimal_poly_check, real_roots, AsymptoticsError, AXA_GROWTH_POLY, BRAID_GROWTH_POLY, RESIDUAL_TOLERANCE,
    TREFOIL_GROWTH_POLY, TREFOIL_VARIANCE_POLY,
};
use cogrowth_group::GroupSpec;
use cogrowth_series::QPolynomial;
use cogrowth_system::{build_axa_branch_system, build_axa_system, build_star_system, EquationSystem};
use proptest::prelude::*;

fn star(s: &str) -> EquationSystem {
    build_star_system(&GroupSpec::parse(s).unwrap()).unwrap()
}

fn smallest_positive_root(coeffs: &[f64]) -> f64 {
    real_roots(coeffs).into_iter().find(|r| *r > 0.0).unwrap()
}

#[test]
fn tree_subsystem_critical_point() {
    // A = 1 + 2 z² A²
    let mut sys = EquationSystem::new(vec!["A".into()]);
    let a = sys.arena();
    let v = a.var(0);
    let sq = a.prod(v, v);
    let z1 = a.z(sq);
    let z2 = a.z(z1);
    let one = a.one();
    let rhs = a.weighted_sum(&[(1, one), (2, z2)]);
    sys.set_rhs(vec![rhs]);
    let cp = find_critical_point(&sys, 1.0).unwrap();
    assert!((cp.z_c - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-12);
    assert!(cp.max_residual() < RESIDUAL_TOLERANCE);
}

#[test]
fn trefoil_critical_point() {
    let sys = star("G(2,3)");
    let cp = find_critical_point(&sys, 1.0).unwrap();
    assert!((cp.z_c - 0.2531241216).abs() < 1e-10);
    assert!((sys.assemble_f64(&cp.y_c).unwrap() - 6.744148958).abs() < 1e-8);
    assert!(cp.y_c.iter().all(|&y| y > 0.0));
    assert!(cp.max_residual() < RESIDUAL_TOLERANCE);
    let poly = find_polynomial_critical_point(&PolynomialEquation::trefoil(), 1.0, 1.0).unwrap();
    assert!((poly.z_c - cp.z_c).abs() < 1e-12);
    assert!((poly.y_c[0] - 6.744148958).abs() < 1e-8);
}

#[test]
fn tree_of_squares_grows_like_four() {
    let cp = find_critical_point(&star("G(2,2)"), 1.0).unwrap();
    assert!((cp.z_c - 0.25).abs() < 1e-12);
    for k in 2..=4u32 {
        let periods = vec![2u32; k as usize];
        let sys = build_star_system(&GroupSpec::star(&periods).unwrap()).unwrap();
        let law = growth_and_moments(&sys).unwrap();
        assert!((law.mu - 4.0 * ((k - 1) as f64).sqrt()).abs() < 1e-10, "k={k}");
    }
}

#[test]
fn trefoil_limit_law() {
    let law = growth_and_moments(&star("G(2,3)")).unwrap();
    assert!((law.mu - 3.950630994).abs() < 1e-8);
    let report = minimal_poly_check(law.mu, &TREFOIL_GROWTH_POLY);
    assert!(report.residual.abs() < 1e-8 && report.is_largest_positive);
    let target = smallest_positive_root(&TREFOIL_VARIANCE_POLY);
    assert!((target - 0.1801879445).abs() < 1e-9);
    assert!((law.sigma2 - target).abs() < 1e-6, "{}", law.sigma2);
    assert!(law.lambda.abs() < 1e-8);
    let poly = growth_and_moments_polynomial(&PolynomialEquation::trefoil(), 1.0).unwrap();
    assert!((poly.sigma2 - target).abs() < 1e-6);
}

#[test]
fn braid_limit_law() {
    let law = growth_and_moments_polynomial(&PolynomialEquation::braid_cubic(), 1.0).unwrap();
    assert!((law.mu - (1.0 + 2.0 * 2f64.sqrt())).abs() < 1e-8);
    assert!((law.sigma2 - (5.0 - 3.0 * 2f64.sqrt()) / 7.0).abs() < 1e-6);
    assert!(law.lambda.abs() < 1e-8);
    let report = minimal_poly_check(law.mu, &BRAID_GROWTH_POLY);
    assert!(report.residual.abs() < 1e-12 && report.is_largest_positive);
}

#[test]
fn axa_growth_rate() {
    let cp = find_critical_point(&build_axa_branch_system(), 1.0).unwrap();
    let mu = cp.growth();
    assert!((mu - 3.9076667).abs() < 1e-6);
    let report = minimal_poly_check(mu, &AXA_GROWTH_POLY);
    assert!(report.residual.abs() < 1e-6 && report.is_largest_positive, "{report:?}");
    let poly = find_polynomial_critical_point(&PolynomialEquation::axa_quintic(), 1.0, 1.0).unwrap();
    assert!((poly.growth() - mu).abs() < 1e-10);
}

#[test]
fn full_axa_system_is_rejected() {
    assert_eq!(
        find_critical_point(&build_axa_system(), 1.0),
        Err(AsymptoticsError::NotStronglyConnected)
    );
}

#[test]
fn star_groups_have_no_drift_and_positive_variance() {
    for s in ["G(2,3)", "G(3,3)", "G(3,4)", "G(2,3,4)", "G(3,5)"] {
        let law = growth_and_moments(&star(s)).unwrap();
        assert!(law.lambda.abs() < 1e-8, "{s}");
        assert!(law.sigma2 > 0.0, "{s}");
        assert!(law.mu > 1.0 && law.mu <= 2.0 * 2.0 * s.matches(',').count() as f64 + 4.0);
    }
}

#[test]
fn minimal_poly_examples() {
    let mu = (1.0 + (25.0 + 16.0 * 2f64.sqrt()).sqrt()) / 2.0;
    let r = minimal_poly_check(mu, &TREFOIL_GROWTH_POLY);
    assert!(r.residual.abs() < 1e-10 && r.is_largest_positive);
    assert_eq!(r.real_roots.len(), 4);
    let r = minimal_poly_check(1.2701595617, &TREFOIL_GROWTH_POLY);
    assert!(!r.is_largest_positive);
    let r = minimal_poly_check(1.0, &[1.0, 0.0, 1.0]);
    assert_eq!(r.largest_positive_root, None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_of_products_are_found(mut roots in prop::collection::vec(-5.0f64..5.0, 1..5)) {
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assume!(roots.windows(2).all(|w| w[1] - w[0] > 0.05));
        let mut coeffs = vec![1.0];
        for r in &roots {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * r;
            }
            coeffs = next;
        }
        let found = real_roots(&coeffs);
        prop_assert_eq!(found.len(), roots.len());
        for (a, b) in found.iter().zip(&roots) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn critical_point_is_symmetric_in_q(q in 0.6f64..1.6) {
        let sys = star("G(2,3)");
        let a = find_critical_point(&sys, q).unwrap();
        let b = find_critical_point(&sys, 1.0 / q).unwrap();
        prop_assert!((a.z_c - b.z_c).abs() < 1e-12);
        let eq = PolynomialEquation::trefoil();
        let p = find_polynomial_critical_point(&eq, 1.0, q).unwrap();
        prop_assert!((p.z_c - a.z_c).abs() < 1e-11);
        let _ = QPolynomial::zero();
    }
}
