use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use cogrowth_algebraic::{guess_recurrence, Recurrence};
use cogrowth_asymptotics::{
    eval_poly, expected_returns, exponent_fit, variance_sequence, AXA_GROWTH_POLY, BRAID_GROWTH_POLY,
    TREFOIL_GROWTH_POLY, TREFOIL_VARIANCE_POLY,
};
use cogrowth_group::GroupSpec;
use cogrowth_oracle::{count_closed_walks, count_one_sided_walks, OracleConfig};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::compute::{growth_rate, limit_law, series_for, Unknown};
use crate::output::{self, Format};
use crate::verify::{run_suite, Suite};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "cogrowth", version, about = "Cogrowth series of star-polygon groups and B3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand a generating function with winding tracked by q.
    Series(SeriesArgs),
    /// Count closed walks by enumeration.
    Oracle(OracleArgs),
    /// Print the exponential growth rate of the cogrowth series.
    Cogrowth(CogrowthArgs),
    /// Growth rate, limit-law parameters and coefficient statistics.
    Asymptotics(AsymptoticsArgs),
    /// Guess a linear recurrence with polynomial coefficients.
    Guess(GuessArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, value_parser = parse_group)]
    pub group: GroupSpec,
    #[arg(long)]
    pub order: usize,
    /// Keep every power of q (default).
    #[arg(long, conflicts_with = "q0")]
    pub q_track: bool,
    /// Keep only the q^0 coefficients.
    #[arg(long)]
    pub q0: bool,
    /// F, L0:i, P:i or the name of a system unknown.
    #[arg(long, default_value = "F")]
    pub unknown: Unknown,
    /// Output file; `.csv` selects CSV, anything else JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_parser = parse_group)]
    pub group: GroupSpec,
    #[arg(long)]
    pub max_len: usize,
    /// Count walks in the one-sided graph of this facet (1-based).
    #[arg(long)]
    pub facet: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CogrowthArgs {
    #[arg(long, value_parser = parse_group)]
    pub group: GroupSpec,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u8).range(0..=14))]
    pub digits: u8,
}

#[derive(Debug, Args)]
pub struct AsymptoticsArgs {
    #[arg(long, value_parser = parse_group)]
    pub group: GroupSpec,
    /// Series order used for the coefficient statistics.
    #[arg(long, default_value_t = 200)]
    pub order: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GuessArgs {
    /// JSON array of integers (or decimal strings), or a series dump whose q^0 terms are used.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub max_order: usize,
    #[arg(long)]
    pub max_degree: usize,
    /// Use every `stride`-th term starting from the first.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub stride: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Also write the results as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_group(s: &str) -> Result<GroupSpec, String> {
    GroupSpec::parse(s).map_err(|e| e.to_string())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Series(a) => cmd_series(&a),
        Command::Oracle(a) => cmd_oracle(&a),
        Command::Cogrowth(a) => cmd_cogrowth(&a),
        Command::Asymptotics(a) => cmd_asymptotics(&a),
        Command::Guess(a) => cmd_guess(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

pub fn cmd_series(args: &SeriesArgs) -> Result<(), CliError> {
    let mut series = series_for(&args.group, args.order, &args.unknown)?;
    if args.q0 {
        if args.out.is_none() {
            let terms: Vec<String> = series.q_constant_term().iter().map(BigInt::to_string).collect();
            println!("{}", terms.join(","));
            return Ok(());
        }
        series = output::constant_terms(&series);
    }
    let text = match args.out.as_deref().map(Format::for_path) {
        Some(Format::Csv) => output::series_csv(&series),
        _ => output::series_text(&series),
    };
    output::emit(args.out.as_deref(), &text)
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let config = OracleConfig::from_env();
    let table = match args.facet {
        Some(i) => count_one_sided_walks(&args.group, i, args.max_len, &config)?,
        None => count_closed_walks(&args.group, args.max_len, &config)?,
    };
    let text = match args.out.as_deref().map(Format::for_path) {
        Some(Format::Csv) => output::table_csv(&table),
        _ => output::pretty(&output::table_json(&table)),
    };
    output::emit(args.out.as_deref(), &text)
}

pub fn cmd_cogrowth(args: &CogrowthArgs) -> Result<(), CliError> {
    let mu = growth_rate(&args.group)?;
    println!("{mu:.*}", args.digits as usize);
    Ok(())
}

/// Residuals of the computed constants in their known minimal polynomials.
fn minimal_poly_residuals(spec: &GroupSpec, mu: f64, sigma2: f64) -> Map<String, Value> {
    let mut out = Map::new();
    let mut put = |name: &str, v: f64| {
        out.insert(name.to_string(), output::number(Some(v)));
    };
    match spec {
        GroupSpec::StarPolygon { periods } if periods == &[2, 3] => {
            put("growth", eval_poly(&TREFOIL_GROWTH_POLY, mu));
            put("variance", eval_poly(&TREFOIL_VARIANCE_POLY, sigma2));
        }
        GroupSpec::StarPolygon { periods } if periods.iter().all(|p| *p == 2) => {
            let k = periods.len() as f64;
            put("growth", eval_poly(&[1.0, 0.0, -16.0 * (k - 1.0)], mu));
        }
        GroupSpec::BraidStandard => {
            put("growth", eval_poly(&BRAID_GROWTH_POLY, mu));
            put("variance", eval_poly(&[7.0, -10.0, 1.0], sigma2));
        }
        GroupSpec::BraidAxa => put("growth", eval_poly(&AXA_GROWTH_POLY, mu)),
        GroupSpec::StarPolygon { .. } => {}
    }
    out
}

pub fn asymptotics_report(spec: &GroupSpec, order: usize) -> Result<Value, CliError> {
    let law = limit_law(spec)?;
    let series = series_for(spec, order, &Unknown::F)?;
    let fit = exponent_fit(&series.q_constant_term(), law.mu, 2).ok();
    let returns = expected_returns(&series.at_q_one(), spec.generator_count() as u32);
    let vn_max = returns
        .iter()
        .copied()
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    let slope = variance_sequence(&series).ok().map(|r| r.slope);
    Ok(json!({
        "group": spec.to_string(),
        "order": order,
        "mu": law.mu,
        "lambda": law.lambda,
        "sigma2": law.sigma2,
        "z_c": law.critical.z_c,
        "alpha": output::number(fit.map(|f| f.alpha)),
        "amplitude": output::number(fit.map(|f| f.amplitude)),
        "vn_max": output::number(vn_max),
        "variance_slope": output::number(slope),
        "minimal_poly_residuals": Value::Object(minimal_poly_residuals(spec, law.mu, law.sigma2)),
    }))
}

pub fn cmd_asymptotics(args: &AsymptoticsArgs) -> Result<(), CliError> {
    let report = asymptotics_report(&args.group, args.order)?;
    output::emit(args.out.as_deref(), &output::pretty(&report))
}

fn parse_integer(v: &Value) -> Option<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().ok(),
        Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)),
        _ => None,
    }
}

/// Reads a coefficient sequence from a JSON array of integers or from a series dump.
pub fn read_sequence(path: &Path) -> Result<Vec<BigInt>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let bad = |what: &str| CliError::Usage(format!("{}: {what}", path.display()));
    let items = value.as_array().ok_or_else(|| bad("expected a JSON array"))?;
    items
        .iter()
        .map(|item| {
            if let Some(q) = item.get("q") {
                let terms = q.as_array().ok_or_else(|| bad("malformed series row"))?;
                for t in terms {
                    if t.get(0).and_then(Value::as_i64) == Some(0) {
                        return t
                            .get(1)
                            .and_then(parse_integer)
                            .ok_or_else(|| bad("malformed coefficient"));
                    }
                }
                Ok(BigInt::from(0))
            } else {
                parse_integer(item).ok_or_else(|| bad("expected integers or decimal strings"))
            }
        })
        .collect()
}

pub fn cmd_guess(args: &GuessArgs) -> Result<(), CliError> {
    let seq: Vec<BigInt> = read_sequence(&args.input)?
        .into_iter()
        .step_by(args.stride as usize)
        .collect();
    let rec: Recurrence = guess_recurrence(&seq, args.max_order, args.max_degree)?.ok_or_else(|| {
        CliError::Compute(format!(
            "no recurrence with order <= {} and degree <= {} fits {} terms",
            args.max_order,
            args.max_degree,
            seq.len()
        ))
    })?;
    output::emit(args.out.as_deref(), &output::pretty(&rec.to_json()))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let checks = run_suite(args.suite);
    for c in &checks {
        println!("{c}");
    }
    if let Some(path) = &args.out {
        let v = serde_json::to_value(&checks).map_err(|e| CliError::Io(e.to_string()))?;
        output::emit(Some(path), &output::pretty(&v))?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::Compute(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}
