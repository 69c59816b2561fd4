use cogrowth_algebraic::{series_solve_polynomial, PolynomialEquation};
use cogrowth_asymptotics::{
    find_critical_point, find_polynomial_critical_point, growth_and_moments, growth_and_moments_polynomial, LimitLaw,
};
use cogrowth_group::GroupSpec;
use cogrowth_series::QZSeries;
use cogrowth_system::{build_axa_branch_system, build_axa_system, build_star_system, solve_series, solve_star_modular};

use crate::CliError;

/// Which generating function of a group to expand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unknown {
    F,
    /// `L0` of the given facet (1-based).
    OneSided(usize),
    /// Primitive walks `P` of the given facet (1-based).
    Primitive(usize),
    /// A named unknown or derived series of the system, such as `G00` for B3-axa.
    Named(String),
}

impl std::str::FromStr for Unknown {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let facet = |rest: &str| {
            rest.parse::<usize>()
                .ok()
                .filter(|i| *i >= 1)
                .ok_or_else(|| format!("invalid facet in {s:?}"))
        };
        match s.split_once(':') {
            None if s == "F" => Ok(Unknown::F),
            None if !s.is_empty() => Ok(Unknown::Named(s.to_string())),
            Some(("L0", rest)) => Ok(Unknown::OneSided(facet(rest)?)),
            Some(("P", rest)) => Ok(Unknown::Primitive(facet(rest)?)),
            _ => Err(format!(
                "unknown series {s:?}; expected F, L0:i, P:i or a system unknown"
            )),
        }
    }
}

fn pick(list: &[QZSeries], facet: usize) -> Result<QZSeries, CliError> {
    list.get(facet - 1)
        .cloned()
        .ok_or_else(|| CliError::Usage(format!("facet {facet} out of range 1..={}", list.len())))
}

/// The requested series of a group to `z^order`.
pub fn series_for(spec: &GroupSpec, order: usize, unknown: &Unknown) -> Result<QZSeries, CliError> {
    match spec {
        GroupSpec::StarPolygon { .. } => {
            if let Unknown::Named(name) = unknown {
                let sol = solve_series(&build_star_system(spec)?, order)?;
                return sol
                    .get(name)
                    .cloned()
                    .ok_or_else(|| CliError::Usage(format!("no series named {name:?}")));
            }
            let star = solve_star_modular(spec, order)?;
            match unknown {
                Unknown::F => Ok(star.f),
                Unknown::OneSided(i) => pick(&star.one_sided, *i),
                Unknown::Primitive(i) => pick(&star.primitives, *i),
                Unknown::Named(_) => unreachable!(),
            }
        }
        GroupSpec::BraidStandard => match unknown {
            Unknown::F => Ok(series_solve_polynomial(&PolynomialEquation::braid_cubic(), 1, order)?),
            _ => Err(CliError::Usage("B3-standard only provides F".into())),
        },
        GroupSpec::BraidAxa => {
            let sol = solve_series(&build_axa_system(), order)?;
            match unknown {
                Unknown::F => Ok(sol.f()?.clone()),
                Unknown::Named(name) => sol
                    .get(name)
                    .cloned()
                    .ok_or_else(|| CliError::Usage(format!("no series named {name:?}"))),
                _ => Err(CliError::Usage(
                    "B3-axa has no facets; name a system unknown instead".into(),
                )),
            }
        }
    }
}

/// `1/z_c` at `q = 1`.
pub fn growth_rate(spec: &GroupSpec) -> Result<f64, CliError> {
    let cp = match spec {
        GroupSpec::StarPolygon { .. } => find_critical_point(&build_star_system(spec)?, 1.0)?,
        GroupSpec::BraidStandard => find_polynomial_critical_point(&PolynomialEquation::braid_cubic(), 1.0, 1.0)?,
        GroupSpec::BraidAxa => find_critical_point(&build_axa_branch_system(), 1.0)?,
    };
    Ok(cp.growth())
}

/// Growth rate, drift and winding variance.
pub fn limit_law(spec: &GroupSpec) -> Result<LimitLaw, CliError> {
    Ok(match spec {
        GroupSpec::StarPolygon { .. } => growth_and_moments(&build_star_system(spec)?)?,
        GroupSpec::BraidStandard => growth_and_moments_polynomial(&PolynomialEquation::braid_cubic(), 1.0)?,
        GroupSpec::BraidAxa => growth_and_moments(&build_axa_branch_system())?,
    })
}
