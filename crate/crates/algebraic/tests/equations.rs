use cogrowth_algebraic::{
    constant_term_sequence, residual_check, series_solve_polynomial, AlgebraicError, PolynomialEquation,
};
use cogrowth_group::GroupSpec;
use cogrowth_oracle::{count_closed_walks, OracleConfig};
use cogrowth_series::{QPolynomial, QZSeries};
use cogrowth_system::{build_axa_system, solve_series, solve_star_modular};
use num_bigint::BigInt;
use proptest::prelude::*;

fn at_q_one_series(s: &QZSeries) -> QZSeries {
    QZSeries::from_coeffs(s.at_q_one().into_iter().map(QPolynomial::constant).collect())
}

#[test]
fn trefoil_equation_matches_the_star_system() {
    let spec = GroupSpec::parse("G(2,3)").unwrap();
    let f = solve_star_modular(&spec, 40).unwrap().f;
    let report = residual_check(&PolynomialEquation::trefoil(), &f, 40).unwrap();
    assert!(report.passed(), "{report:?}");
    let solved = series_solve_polynomial(&PolynomialEquation::trefoil(), 1, 40).unwrap();
    assert_eq!(solved, f);
}

#[test]
fn trefoil_equation_needs_its_sextic_term() {
    let spec = GroupSpec::parse("G(2,3)").unwrap();
    let f = solve_star_modular(&spec, 12).unwrap().f;
    let eq = PolynomialEquation::trefoil_without_sextic_term();
    assert_eq!(residual_check(&eq, &f, 12).unwrap().first_failure, Some(6));
    let q1 = at_q_one_series(&f);
    assert!(residual_check(&eq.specialize(2), &q1, 12).unwrap().passed());
}

#[test]
fn trefoil_first_coefficients() {
    let s = series_solve_polynomial(&PolynomialEquation::trefoil(), 1, 4).unwrap();
    assert_eq!(s.coeff(2), &QPolynomial::from_pairs(&[(-1, 1), (0, 4), (1, 1)]));
}

#[test]
fn braid_cubic_matches_the_oracle() {
    let s = series_solve_polynomial(&PolynomialEquation::braid_cubic(), 1, 12).unwrap();
    let table = count_closed_walks(&GroupSpec::BraidStandard, 12, &OracleConfig::default()).unwrap();
    for n in 0..=12usize {
        for m in -(n as i64)..=n as i64 {
            assert_eq!(s.get(n, m), BigInt::from(table.get(n, m)), "n={n} m={m}");
        }
    }
    assert_eq!(s.get(2, 0), BigInt::from(4));
}

#[test]
fn braid_coefficients_vanish_off_parity() {
    let s = series_solve_polynomial(&PolynomialEquation::braid_cubic(), 1, 40).unwrap();
    for n in 0..=40 {
        for (m, c) in s.coeff(n).terms() {
            assert!((n as i64 + m) % 2 == 0 || c == &BigInt::from(0), "n={n} m={m}");
        }
    }
    assert!(residual_check(&PolynomialEquation::braid_cubic(), &s, 40)
        .unwrap()
        .passed());
}

#[test]
fn braid_and_g33_share_constant_terms() {
    let braid = series_solve_polynomial(&PolynomialEquation::braid_cubic(), 1, 60).unwrap();
    let g33 = solve_star_modular(&GroupSpec::parse("G(3,3)").unwrap(), 60).unwrap().f;
    assert_eq!(braid.q_constant_term(), g33.q_constant_term());
}

#[test]
fn axa_quintic_matches_the_system_at_q_one() {
    let sol = solve_series(&build_axa_system(), 40).unwrap();
    let f = at_q_one_series(sol.f().unwrap());
    let report = residual_check(&PolynomialEquation::axa_quintic(), &f, 40).unwrap();
    assert!(report.passed(), "{report:?}");
    let solved = series_solve_polynomial(&PolynomialEquation::axa_quintic(), 1, 40).unwrap();
    assert_eq!(solved, f);
}

#[test]
fn constant_terms_match_the_full_solution() {
    let eq = PolynomialEquation::trefoil();
    let full = series_solve_polynomial(&eq, 1, 50).unwrap();
    assert_eq!(
        constant_term_sequence(&eq, 1, 50, 25, 4.0).unwrap(),
        full.q_constant_term()
    );
}

#[test]
fn residual_check_requires_enough_terms() {
    let s = series_solve_polynomial(&PolynomialEquation::braid_cubic(), 1, 5).unwrap();
    assert_eq!(
        residual_check(&PolynomialEquation::braid_cubic(), &s, 6),
        Err(AlgebraicError::SeriesTooShort { have: 5, need: 6 })
    );
}

fn z_poly(cs: &[i64]) -> Vec<QPolynomial> {
    cs.iter().map(|&c| QPolynomial::constant(c)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn solutions_pass_their_own_residual_check(
        tail in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 4),
        q_part in -2i64..=2,
    ) {
        // P = 1 - F + z*(...) has F = 1 as a simple root at z = 0.
        let mut rows = vec![vec![1i64], vec![-1]];
        rows.extend(std::iter::repeat_n(vec![0], 2));
        let mut coeffs: Vec<Vec<QPolynomial>> = rows.iter().map(|r| z_poly(r)).collect();
        for (j, t) in tail.iter().enumerate() {
            for (i, &c) in t.iter().enumerate() {
                let c = QPolynomial::from_pairs(&[(0, c), (1, if i == 0 { q_part } else { 0 })]);
                if coeffs[j].len() < i + 2 {
                    coeffs[j].resize(i + 2, QPolynomial::zero());
                }
                coeffs[j][i + 1] = c;
            }
        }
        let eq = PolynomialEquation::new("random", coeffs).unwrap();
        let s = series_solve_polynomial(&eq, 1, 12).unwrap();
        prop_assert!(residual_check(&eq, &s, 12).unwrap().passed());
        prop_assert_eq!(s.get(0, 0), BigInt::from(1));
    }
}
