use cogrowth_asymptotics::{
    expected_returns, exponent_fit, gaussian_profile_check, growth_rate_compare, variance_sequence, AsymptoticsError,
};
use cogrowth_group::GroupSpec;
use cogrowth_series::{QPolynomial, QZSeries};
use cogrowth_system::{ktree_closed_form, solve_star_modular};
use num_bigint::BigInt;
use proptest::prelude::*;

fn closed_form_sequence(k: u32, half: usize) -> Vec<BigInt> {
    let cf = ktree_closed_form(k, half).unwrap();
    let mut seq = vec![BigInt::from(0); 2 * half + 1];
    for (n, c) in cf.cogrowth.into_iter().enumerate() {
        seq[2 * n] = c;
    }
    seq
}

#[test]
fn closed_form_exponents() {
    let fit = exponent_fit(&closed_form_sequence(2, 200), 4.0, 2).unwrap();
    assert!((fit.alpha + 1.0).abs() < 0.1, "{fit:?}");
    // f_{2n} ~ 16^n/(πn) = 4^N · 2/(πN) with N = 2n
    assert!((fit.amplitude - 2.0 / std::f64::consts::PI).abs() < 1e-3);
    let fit = exponent_fit(&closed_form_sequence(3, 200), 4.0 * 2f64.sqrt(), 2).unwrap();
    assert!((fit.alpha + 2.0).abs() < 0.1, "{fit:?}");
}

#[test]
fn exponent_fit_needs_enough_terms() {
    assert_eq!(
        exponent_fit(&closed_form_sequence(2, 50), 4.0, 2),
        Err(AsymptoticsError::TooFewTerms { have: 50, need: 100 })
    );
}

#[test]
fn returns_on_small_groups() {
    let s = solve_star_modular(&GroupSpec::parse("G(2,3)").unwrap(), 10).unwrap();
    let v = expected_returns(&s.f.at_q_one(), 2);
    assert_eq!(v[0], 1.0);
    assert_eq!(v[1], 0.0);
    assert!((v[2] - 2.0).abs() < 1e-12);
    let v = expected_returns(&closed_form_sequence(2, 5), 2);
    assert!(v.iter().skip(1).step_by(2).all(|&x| x == 0.0));
}

#[test]
fn variances_on_small_groups() {
    let g22 = solve_star_modular(&GroupSpec::parse("G(2,2)").unwrap(), 30).unwrap();
    let report = variance_sequence(&g22.f).unwrap();
    assert!((report.variance[2] - 0.5).abs() < 1e-15);
    assert!(report.upper_bound_holds);
    let g23 = solve_star_modular(&GroupSpec::parse("G(2,3)").unwrap(), 30).unwrap();
    let report = variance_sequence(&g23.f).unwrap();
    assert!((report.variance[2] - 1.0 / 3.0).abs() < 1e-15);
    assert!(report.upper_bound_holds);
    let (lo, hi) = report.ratio_range(20);
    assert!(lo > 0.0 && hi <= 1.0);
}

#[test]
fn asymmetric_rows_are_rejected() {
    let s = QZSeries::from_coeffs(vec![QPolynomial::one(), QPolynomial::from_pairs(&[(1, 1)])]);
    assert_eq!(variance_sequence(&s), Err(AsymptoticsError::Asymmetric(1)));
}

#[test]
fn gaussian_profile_of_tree_of_squares() {
    let s = solve_star_modular(&GroupSpec::parse("G(2,2)").unwrap(), 120).unwrap();
    let sigma2 = 0.25;
    // the centre alone matches exactly
    assert_eq!(gaussian_profile_check(s.f.coeff(0), 0, sigma2, 1).unwrap(), 0.0);
    let dev = |n: usize| {
        let row = s.f.coeff(n);
        let ratio = cogrowth_asymptotics::ratio_f64(&row.coeff(1), &row.coeff(0));
        (ratio / (-1.0 / (2.0 * sigma2 * n as f64)).exp() - 1.0).abs()
    };
    assert!(dev(120) < dev(40) && dev(40) < dev(10));
    assert_eq!(
        gaussian_profile_check(s.f.coeff(1), 1, sigma2, 1),
        Err(AsymptoticsError::EmptyCentre(1))
    );
}

#[test]
fn growth_rates_of_tree_of_squares() {
    let s = solve_star_modular(&GroupSpec::parse("G(2,2)").unwrap(), 200).unwrap();
    let (mu0, mu1) = growth_rate_compare(&s.f, 200);
    assert!(mu0 < mu1 && mu1 <= 4.0 + 1e-12);
    assert!(4.0 - mu0 < 0.15 && 4.0 - mu1 < 0.1);
    let (a0, a1) = growth_rate_compare(&s.f, 100);
    assert!(mu1 - mu0 < a1 - a0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exponent_fit_recovers_synthetic_exponents(alpha in -3.0f64..0.0, mu in 2.0f64..6.0, amp in 0.5f64..20.0) {
        // f_n = round(2^200 · amp · μ^n · n^α) keeps plenty of significant digits
        let seq: Vec<BigInt> = (0..400)
            .map(|n| {
                if n == 0 {
                    return BigInt::from(0);
                }
                let l = (amp).ln() + n as f64 * mu.ln() + alpha * (n as f64).ln();
                let mant = (l - (l / std::f64::consts::LN_2).floor() * std::f64::consts::LN_2).exp();
                let e = (l / std::f64::consts::LN_2).floor() as i64 + 200;
                let m = BigInt::from((mant * (1u64 << 52) as f64) as u64);
                if e >= 52 { m << (e - 52) as usize } else { m >> (52 - e) as usize }
            })
            .collect();
        let fit = exponent_fit(&seq, mu, 1).unwrap();
        prop_assert!((fit.alpha - alpha).abs() < 1e-6);
        prop_assert!((fit.amplitude.ln() - amp.ln() - 200.0 * std::f64::consts::LN_2).abs() < 1e-4);
    }
}

#[test]
fn trefoil_profile_is_close_to_gaussian() {
    let s = solve_star_modular(&GroupSpec::parse("G(2,3)").unwrap(), 400).unwrap();
    let dev = gaussian_profile_check(s.f.coeff(400), 400, 0.1801879445, 1).unwrap();
    assert!(dev <= 0.1, "{dev}");
}
