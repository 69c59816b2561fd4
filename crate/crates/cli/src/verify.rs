//! Pass/fail checks of the computed series and constants against known values.

use std::fmt;
use std::sync::OnceLock;

use cogrowth_algebraic::{
    constant_term_sequence, guess_recurrence, residual_check, series_solve_polynomial, verify_range, PolynomialEquation,
};
use cogrowth_asymptotics::{
    eval_poly, expected_returns, exponent_fit, growth_rate_compare, real_roots, variance_sequence, AXA_GROWTH_POLY,
    TREFOIL_GROWTH_POLY, TREFOIL_VARIANCE_POLY,
};
use cogrowth_group::GroupSpec;
use cogrowth_oracle::{count_closed_walks, OracleConfig, WalkCountTable};
use cogrowth_series::{binomial, QPolynomial, QZSeries};
use cogrowth_system::{cone_positivity_check, ktree_closed_form, solve_star_modular, StarSeries};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::compute::{growth_rate, limit_law, series_for, Unknown};
use crate::CliError;

/// Longest walks compared against the oracle.
pub const ORACLE_LENGTH: usize = 12;
/// Series order for the exponent fits and return statistics.
pub const FIT_ORDER: usize = 400;
/// Terms used to guess a recurrence, and terms held out to confirm it.
pub const GUESS_TERMS: usize = 600;
pub const HELD_OUT_TERMS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Oracle equivalence and closed forms.
    Fast,
    /// Every check.
    #[value(name = "paper")]
    Full,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Fast => &[1, 2],
            Suite::Full => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(criterion: u8, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            criterion,
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(criterion: u8, name: &str, result: Result<(bool, String), CliError>) -> Self {
        match result {
            Ok((passed, detail)) => Check::new(criterion, name, passed, detail),
            Err(e) => Check::new(criterion, name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {}: {}", self.criterion, self.name, self.detail)
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    suite.criteria().iter().flat_map(|&c| run_criterion(c)).collect()
}

pub fn run_criterion(criterion: u8) -> Vec<Check> {
    match criterion {
        1 => oracle_equivalence(),
        2 => closed_forms(),
        3 => polynomial_residuals(),
        4 => growth_constants(),
        5 => variance_constants(),
        6 => exponents(),
        7 => structure(),
        8 => returns_and_variance(),
        9 => recurrences(),
        10 => growth_equality(),
        _ => Vec::new(),
    }
}

fn spec(s: &str) -> GroupSpec {
    GroupSpec::parse(s).expect("built-in group names parse")
}

fn trefoil_series() -> Result<&'static StarSeries, CliError> {
    static CACHE: OnceLock<Result<StarSeries, String>> = OnceLock::new();
    CACHE
        .get_or_init(|| solve_star_modular(&spec("G(2,3)"), FIT_ORDER).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| CliError::Compute(e.clone()))
}

/// First `(n, m)` where the series and the walk counts disagree.
pub fn first_mismatch(series: &QZSeries, table: &WalkCountTable) -> Option<(usize, i64)> {
    for n in 0..=table.max_len {
        let row = series.coeff(n);
        for (m, x) in row.terms() {
            if *x != BigInt::from(table.get(n, m)) {
                return Some((n, m));
            }
        }
        for (m, f) in table.row(n) {
            if row.coeff(m) != BigInt::from(f) {
                return Some((n, m));
            }
        }
    }
    None
}

fn oracle_equivalence() -> Vec<Check> {
    let config = OracleConfig::from_env();
    [
        "G(2,2)",
        "G(2,3)",
        "G(3,3)",
        "G(3,4)",
        "G(2,2,2)",
        "B3-standard",
        "B3-axa",
    ]
    .iter()
    .map(|s| {
        let result = (|| {
            let g = spec(s);
            let series = series_for(&g, ORACLE_LENGTH, &Unknown::F)?;
            let table = count_closed_walks(&g, ORACLE_LENGTH, &config)?;
            Ok(match first_mismatch(&series, &table) {
                None => (true, format!("f(n,m) agree for n <= {ORACLE_LENGTH}")),
                Some((n, m)) => (false, format!("first disagreement at n={n}, m={m}")),
            })
        })();
        Check::from_result(1, &format!("oracle equivalence {s}"), result)
    })
    .collect()
}

fn closed_forms() -> Vec<Check> {
    let mut checks: Vec<Check> = (2..=5u32)
        .map(|k| {
            let result = (|| {
                let periods = vec![2u32; k as usize];
                let star = solve_star_modular(&GroupSpec::star(&periods)?, 60)?;
                let closed = ktree_closed_form(k, 30)?;
                let q0 = star.f.q_constant_term();
                let bad = (0..=60).find(|&n| {
                    let expected = if n % 2 == 0 {
                        closed.cogrowth[n / 2].clone()
                    } else {
                        BigInt::zero()
                    };
                    q0[n] != expected
                });
                Ok(match bad {
                    None => (true, "[q^0]F matches through z^60".to_string()),
                    Some(n) => (false, format!("first disagreement at z^{n}")),
                })
            })();
            Check::from_result(2, &format!("closed form k={k}"), result)
        })
        .collect();
    let result = ktree_closed_form(2, 30).map_err(CliError::from).map(|closed| {
        let bad = (0..=30u64).find(|&n| {
            let c = binomial(2 * n, n);
            closed.cogrowth[n as usize] != &c * &c
        });
        match bad {
            None => (true, "f_2n = binom(2n,n)^2 for n <= 30".to_string()),
            Some(n) => (false, format!("differs at n={n}")),
        }
    });
    checks.push(Check::from_result(2, "central binomial squares k=2", result));
    checks
}

fn at_q_one(series: &QZSeries) -> QZSeries {
    QZSeries::from_coeffs(series.at_q_one().into_iter().map(QPolynomial::constant).collect())
}

fn polynomial_residuals() -> Vec<Check> {
    let trefoil = (|| {
        let f = solve_star_modular(&spec("G(2,3)"), 40)?.f;
        let report = residual_check(&PolynomialEquation::trefoil(), &f, 40)?;
        let printed = residual_check(&PolynomialEquation::trefoil_without_sextic_term(), &f, 40)?;
        let note = match printed.first_failure {
            Some(n) => format!(" (without the z^6 F^3 term it fails at z^{n})"),
            None => String::new(),
        };
        Ok(match report.first_failure {
            None => (true, format!("residual vanishes mod z^41{note}")),
            Some(n) => (false, format!("residual nonzero at z^{n}{note}")),
        })
    })();
    let braid_oracle = (|| {
        let s = series_solve_polynomial(&PolynomialEquation::braid_cubic(), 1, ORACLE_LENGTH)?;
        let table = count_closed_walks(&GroupSpec::BraidStandard, ORACLE_LENGTH, &OracleConfig::from_env())?;
        Ok(match first_mismatch(&s, &table) {
            None => (
                true,
                format!("cubic solution equals walk counts for n <= {ORACLE_LENGTH}"),
            ),
            Some((n, m)) => (false, format!("first disagreement at n={n}, m={m}")),
        })
    })();
    let braid_g33 = (|| {
        let s = series_solve_polynomial(&PolynomialEquation::braid_cubic(), 1, 60)?;
        let g33 = solve_star_modular(&spec("G(3,3)"), 60)?.f;
        let (a, b) = (s.q_constant_term(), g33.q_constant_term());
        Ok(match (0..=60).find(|&n| a[n] != b[n]) {
            None => (true, "[q^0] agrees with G(3,3) through z^60".to_string()),
            Some(n) => (false, format!("first disagreement at z^{n}")),
        })
    })();
    let axa = (|| {
        let sol = cogrowth_system::solve_series(&cogrowth_system::build_axa_system(), 40)?;
        let f = at_q_one(sol.f()?);
        let report = residual_check(&PolynomialEquation::axa_quintic(), &f, 40)?;
        Ok(match report.first_failure {
            None => (true, "residual vanishes mod z^41".to_string()),
            Some(n) => (false, format!("residual nonzero at z^{n}")),
        })
    })();
    vec![
        Check::from_result(3, "trefoil quintic on G(2,3)", trefoil),
        Check::from_result(3, "braid cubic against walk counts", braid_oracle),
        Check::from_result(3, "braid cubic against G(3,3)", braid_g33),
        Check::from_result(3, "axa quintic at q=1", axa),
    ]
}

fn growth_constants() -> Vec<Check> {
    let mut checks = vec![
        Check::from_result(
            4,
            "trefoil growth rate",
            growth_rate(&spec("G(2,3)")).map(|mu| {
                let residual = eval_poly(&TREFOIL_GROWTH_POLY, mu);
                let err = (mu - 3.950630994).abs();
                (
                    err < 1e-8 && residual.abs() < 1e-8,
                    format!("mu={mu:.12} |err|={err:.1e} residual={residual:.1e}"),
                )
            }),
        ),
        Check::from_result(
            4,
            "braid growth rate",
            growth_rate(&GroupSpec::BraidStandard).map(|mu| {
                let err = (mu - (1.0 + 2.0 * 2f64.sqrt())).abs();
                (err < 1e-8, format!("mu={mu:.12} |err|={err:.1e}"))
            }),
        ),
        Check::from_result(
            4,
            "axa growth rate",
            growth_rate(&GroupSpec::BraidAxa).map(|mu| {
                let residual = eval_poly(&AXA_GROWTH_POLY, mu);
                let err = (mu - 3.9076667).abs();
                (
                    err < 1e-6 && residual.abs() < 1e-6,
                    format!("mu={mu:.12} |err|={err:.1e} residual={residual:.1e}"),
                )
            }),
        ),
    ];
    for k in 2..=4u32 {
        let result = GroupSpec::star(&vec![2; k as usize])
            .map_err(CliError::from)
            .and_then(|g| growth_rate(&g))
            .map(|mu| {
                let err = (mu - 4.0 * ((k - 1) as f64).sqrt()).abs();
                (err < 1e-10, format!("mu={mu:.12} |err|={err:.1e}"))
            });
        checks.push(Check::from_result(
            4,
            &format!("growth rate of G(2,...,2) with k={k}"),
            result,
        ));
    }
    checks
}

/// Specs covered by the drift and structure checks.
const STAR_SPECS: [&str; 8] = [
    "G(2,2)", "G(2,3)", "G(3,3)", "G(3,4)", "G(2,2,2)", "G(3,5)", "G(4,6)", "G(2,3,4)",
];

fn variance_constants() -> Vec<Check> {
    let trefoil = limit_law(&spec("G(2,3)")).map(|law| {
        let target = real_roots(&TREFOIL_VARIANCE_POLY)
            .into_iter()
            .find(|r| *r > 0.0)
            .unwrap_or(f64::NAN);
        let err = (law.sigma2 - target).abs();
        (
            err < 1e-6,
            format!("sigma2={:.10} root={target:.10} |err|={err:.1e}", law.sigma2),
        )
    });
    let braid = limit_law(&GroupSpec::BraidStandard).map(|law| {
        let target = (5.0 - 3.0 * 2f64.sqrt()) / 7.0;
        let err = (law.sigma2 - target).abs();
        (
            err < 1e-6,
            format!("sigma2={:.10} target={target:.10} |err|={err:.1e}", law.sigma2),
        )
    });
    let mut checks = vec![
        Check::from_result(5, "trefoil winding variance", trefoil),
        Check::from_result(5, "braid winding variance", braid),
    ];
    for s in STAR_SPECS {
        let result = limit_law(&spec(s)).map(|law| (law.lambda.abs() < 1e-8, format!("lambda={:.1e}", law.lambda)));
        checks.push(Check::from_result(5, &format!("zero drift {s}"), result));
    }
    checks
}

fn fit_check(name: &str, seq: &[BigInt], mu: f64, step: usize, target: f64, tol: f64) -> Check {
    let result = exponent_fit(seq, mu, step).map_err(CliError::from).map(|fit| {
        let err = (fit.alpha - target).abs();
        (
            err <= tol,
            format!("alpha={:.4} target={target} |err|={err:.3}", fit.alpha),
        )
    });
    Check::from_result(6, name, result)
}

fn exponents() -> Vec<Check> {
    let mut checks = Vec::new();
    match (trefoil_series(), growth_rate(&spec("G(2,3)"))) {
        (Ok(star), Ok(mu)) => {
            checks.push(fit_check(
                "[q^0]F exponent G(2,3)",
                &star.f.q_constant_term(),
                mu,
                2,
                -2.0,
                0.25,
            ));
            for (i, l0) in star.one_sided.iter().enumerate() {
                checks.push(fit_check(
                    &format!("L0 facet {} exponent G(2,3) at q=1", i + 1),
                    &l0.at_q_one(),
                    mu,
                    1,
                    -1.5,
                    0.25,
                ));
            }
        }
        (Err(e), _) | (_, Err(e)) => checks.push(Check::new(6, "G(2,3) exponents", false, e.to_string())),
    }
    let g33 = (|| -> Result<_, CliError> {
        let g = spec("G(3,3)");
        let seq = solve_star_modular(&g, FIT_ORDER)?.f.q_constant_term();
        Ok((seq, growth_rate(&g)?))
    })();
    match g33 {
        Ok((seq, mu)) => checks.push(fit_check("[q^0]F exponent G(3,3)", &seq, mu, 2, -2.0, 0.25)),
        Err(e) => checks.push(Check::new(6, "[q^0]F exponent G(3,3)", false, e.to_string())),
    }
    match ktree_closed_form(2, FIT_ORDER / 2) {
        Ok(closed) => {
            let mut seq = vec![BigInt::zero(); FIT_ORDER + 1];
            for (n, c) in closed.cogrowth.into_iter().enumerate() {
                seq[2 * n] = c;
            }
            checks.push(fit_check("closed-form exponent G(2,2)", &seq, 4.0, 2, -1.0, 0.1));
        }
        Err(e) => checks.push(Check::new(6, "closed-form exponent G(2,2)", false, e.to_string())),
    }
    checks
}

fn expected_parity(periods: &[u32]) -> Option<cogrowth_series::ParityClass> {
    if periods.iter().all(|p| p % 2 == 0) {
        Some(cogrowth_series::ParityClass::Even)
    } else if periods.iter().all(|p| p % 2 == 1) {
        Some(cogrowth_series::ParityClass::Odd)
    } else {
        None
    }
}

fn structure() -> Vec<Check> {
    let mut checks = Vec::new();
    for s in STAR_SPECS {
        let result = (|| {
            let g = spec(s);
            let star = solve_star_modular(&g, 60)?;
            let symmetric = |x: &QZSeries| x.coeffs().iter().all(QPolynomial::is_symmetric);
            let sym = symmetric(&star.f) && star.one_sided.iter().all(symmetric);
            let expected = expected_parity(g.periods().unwrap_or(&[]));
            let parity = star.f.parity_class();
            Ok((
                sym && parity == expected,
                format!("symmetric={sym} parity={parity:?} expected={expected:?} through z^60"),
            ))
        })();
        checks.push(Check::from_result(7, &format!("symmetry and parity {s}"), result));
    }
    for s in ["G(2,3)", "G(3,4)"] {
        let result = (|| {
            let star = solve_star_modular(&spec(s), 60)?;
            let basis = star.f.loop_basis()?;
            Ok(match basis.iter().position(|d| d.iter().any(|x| x.is_negative())) {
                None => (true, "loop-basis coefficients nonnegative through z^60".to_string()),
                Some(n) => (false, format!("negative loop-basis coefficient at z^{n}")),
            })
        })();
        checks.push(Check::from_result(7, &format!("loop basis {s}"), result));
    }
    for s in ["G(4,6)", "G(3,5)", "G(3,4)"] {
        let result = (|| {
            let g = spec(s);
            let report = cone_positivity_check(&solve_star_modular(&g, 60)?, &g)?;
            Ok((
                report.passed(),
                format!(
                    "{:?}: {} coefficients checked, violation {:?}",
                    report.class, report.checked, report.violation
                ),
            ))
        })();
        checks.push(Check::from_result(7, &format!("cone positivity {s}"), result));
    }
    checks
}

fn returns_and_variance() -> Vec<Check> {
    let star = match trefoil_series() {
        Ok(s) => s,
        Err(e) => return vec![Check::new(8, "trefoil series", false, e.to_string())],
    };
    let v = expected_returns(&star.f.at_q_one(), 2);
    let (half, full) = (FIT_ORDER / 2, FIT_ORDER);
    let max_upto = |n: usize| v[..=n].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut checks = vec![
        Check::new(
            8,
            "returns stabilise",
            v[full] - v[half] <= 0.5,
            format!(
                "v_{half}={:.4} v_{full}={:.4} difference={:.4} (limit 0.5)",
                v[half],
                v[full],
                v[full] - v[half]
            ),
        ),
        Check::new(
            8,
            "returns maximum",
            max_upto(full) <= max_upto(half) + 1.0,
            format!(
                "max to {full}={:.4} max to {half}={:.4} (limit +1)",
                max_upto(full),
                max_upto(half)
            ),
        ),
    ];
    let result = (|| {
        let report = variance_sequence(&star.f)?;
        Ok((
            report.upper_bound_holds,
            format!("V[W_n] <= n for n <= {full}: {}", report.upper_bound_holds),
        ))
    })();
    checks.push(Check::from_result(8, "variance upper bound", result));
    let result = (|| {
        let report = variance_sequence(&star.f)?;
        let sigma2 = limit_law(&spec("G(2,3)"))?.sigma2;
        let (lo, hi) = report.ratio_range(50);
        Ok((
            lo >= 0.5 * sigma2 && hi <= 1.0,
            format!(
                "V[W_n]/n in [{lo:.5}, {hi:.5}] for n >= 50, required [{:.5}, 1]",
                0.5 * sigma2
            ),
        ))
    })();
    checks.push(Check::from_result(8, "variance ratio", result));
    checks
}

fn recurrence_check(name: &str, seq: &[BigInt], max_order: usize, max_degree: usize) -> Check {
    let result = guess_recurrence(&seq[..GUESS_TERMS], max_order, max_degree)
        .map_err(CliError::from)
        .map(|found| match found {
            Some(rec) => {
                let held = verify_range(&rec, seq, GUESS_TERMS - rec.order);
                (
                    held,
                    format!(
                        "order {} degree {} found on {GUESS_TERMS} terms, held-out {HELD_OUT_TERMS} terms {}",
                        rec.order,
                        rec.degree,
                        if held { "verified" } else { "violated" }
                    ),
                )
            }
            None => (
                false,
                format!("no recurrence with order <= {max_order} and degree <= {max_degree} on {GUESS_TERMS} terms"),
            ),
        });
    Check::from_result(9, name, result)
}

fn recurrences() -> Vec<Check> {
    let total = GUESS_TERMS + HELD_OUT_TERMS;
    let trefoil = constant_term_sequence(&PolynomialEquation::trefoil(), 1, total - 1, total / 2, 4.0);
    let braid = constant_term_sequence(
        &PolynomialEquation::braid_cubic(),
        1,
        2 * total - 1,
        2 * total / 3 + 1,
        4.0,
    );
    vec![
        match trefoil {
            Ok(seq) => recurrence_check("trefoil cogrowth recurrence", &seq, 13, 30),
            Err(e) => Check::new(9, "trefoil cogrowth recurrence", false, e.to_string()),
        },
        match braid {
            Ok(seq) => {
                let even: Vec<BigInt> = seq.into_iter().step_by(2).collect();
                recurrence_check("braid even-index cogrowth recurrence", &even, 9, 30)
            }
            Err(e) => Check::new(9, "braid even-index cogrowth recurrence", false, e.to_string()),
        },
    ]
}

fn growth_equality() -> Vec<Check> {
    let result = trefoil_series().map(|star| {
        let (centre, total) = growth_rate_compare(&star.f, FIT_ORDER);
        let diff = (centre - total).abs();
        (
            diff < 0.02,
            format!("f_(N,0)^(1/N)={centre:.5} (sum_m f_(N,m))^(1/N)={total:.5} difference={diff:.4} at N={FIT_ORDER}"),
        )
    });
    vec![Check::from_result(10, "trefoil growth-rate equality", result)]
}
