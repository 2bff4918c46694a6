//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 inequality violations, 2 parameter or domain error,
//! 3 term budget exceeded.

pub mod output;

use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::asymptotics::{
    compare_expansion_vs_direct, eval_expansion, expand, first_omitted_term, optimal_truncation, Validity,
    DEFAULT_ORDER, MAX_ORDER,
};
use crate::constants::{
    classical_mathieu_report, compute_constant, linear_grid, log_grid, verify_inequality_n1, verify_inequality_n2,
    verify_inequality_n3, ConstantKind, VerificationReport,
};
use crate::series::{eval_family, EvalResult, Family, MathieuParams, SeriesError};
use crate::special::{alt_hurwitz_zeta_estimate, hurwitz_zeta_estimate, Precision, SpecialError};
use output::{num, opt_num, row, to_csv, to_json, OutputRecord};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATIONS: u8 = 1;
pub const EXIT_PARAM: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mathieu-asym",
    version,
    about = "Hurwitz zeta, exponential and Mathieu-type series, expansions and sharp constants"
)]
pub struct Cli {
    /// Target absolute tolerance
    #[arg(long, global = true, env = "MATHIEU_ASYM_TOL", default_value_t = Precision::DEFAULT_TOL)]
    pub tol: f64,
    /// Summation budget per evaluation
    #[arg(long, global = true, default_value_t = Precision::DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
    /// Emit rows as CSV instead of JSON
    #[arg(long, global = true)]
    pub csv: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hurwitz zeta ζ(s,a) or its alternating form
    #[command(allow_negative_numbers = true)]
    Zeta {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        alt: bool,
    },
    /// Certified value of one series
    #[command(allow_negative_numbers = true)]
    Eval {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        x: f64,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Small-x expansion coefficients
    #[command(allow_negative_numbers = true)]
    Expand {
        #[arg(long)]
        family: Family,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        terms: usize,
        /// Evaluate the expansion at this x
        #[arg(long)]
        at: Option<f64>,
        /// Number of power terms to use with --at (default: optimal truncation)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Direct series against its expansion on a grid
    #[command(allow_negative_numbers = true)]
    Compare {
        #[arg(long)]
        family: Family,
        #[command(flatten)]
        params: ParamArgs,
        /// lo:hi:n
        #[arg(long)]
        x_grid: Grid,
        #[arg(long)]
        linear: bool,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        terms: usize,
    },
    /// Sharp constants A..F, or the classical Mathieu constants
    #[command(allow_negative_numbers = true)]
    Constants {
        #[arg(long, required_unless_present = "classical")]
        kind: Option<String>,
        #[arg(long, default_value_t = 0.0)]
        shift: f64,
        #[arg(long, required_unless_present = "classical")]
        a: Option<f64>,
        #[arg(long, required_unless_present = "classical")]
        gamma: Option<f64>,
        #[arg(long, required_unless_present = "classical")]
        alpha: Option<f64>,
        #[arg(long)]
        classical: bool,
    },
    /// Grid check of a two-sided inequality
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(long)]
        ineq: Inequality,
        #[command(flatten)]
        params: ParamArgs,
        /// Upper constant (A, D or C); accepts inf
        #[arg(long, allow_hyphen_values = true)]
        upper: f64,
        /// Lower constant (B, E or F); accepts -inf
        #[arg(long, allow_hyphen_values = true)]
        lower: f64,
        #[arg(long, default_value_t = 0.0)]
        p_shift: f64,
        #[arg(long, default_value_t = 0.0)]
        q_shift: f64,
        /// Comma-separated μ values
        #[arg(long, value_delimiter = ',', required = true)]
        mu_list: Vec<f64>,
        /// lo:hi:n
        #[arg(long)]
        x_grid: Grid,
        #[arg(long)]
        linear: bool,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    N1,
    N2,
    N3,
}

impl FromStr for Inequality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "n1" => Ok(Inequality::N1),
            "n2" => Ok(Inequality::N2),
            "n3" => Ok(Inequality::N3),
            other => Err(format!("unknown inequality '{other}' (expected n1, n2, n3)")),
        }
    }
}

/// lo:hi:n
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self, linear: bool) -> Vec<f64> {
        if linear {
            linear_grid(self.lo, self.hi, self.n)
        } else {
            log_grid(self.lo, self.hi, self.n)
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must be lo:hi:n, got '{s}'"));
        }
        let lo: f64 = parts[0].parse().map_err(|e| format!("bad lo '{}': {e}", parts[0]))?;
        let hi: f64 = parts[1].parse().map_err(|e| format!("bad hi '{}': {e}", parts[1]))?;
        let n: usize = parts[2].parse().map_err(|e| format!("bad n '{}': {e}", parts[2]))?;
        if !(lo > 0.0 && hi >= lo) {
            return Err(format!("grid needs 0 < lo <= hi, got {lo}:{hi}"));
        }
        Ok(Grid { lo, hi, n })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

/// A failed command: exit code plus message, optionally with a partial record.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    pub record: Option<Box<OutputRecord>>,
}

impl CliError {
    fn param(message: impl Into<String>) -> Self {
        Self { code: EXIT_PARAM, message: message.into(), record: None }
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        let code = if matches!(e, SeriesError::BudgetExceeded(_)) { EXIT_BUDGET } else { EXIT_PARAM };
        Self { code, message: e.to_string(), record: None }
    }
}

impl From<SpecialError> for CliError {
    fn from(e: SpecialError) -> Self {
        Self::param(e.to_string())
    }
}

/// Final output of one invocation.
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Parses nothing; runs an already-parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let prec = match Precision::new(cli.tol, cli.max_terms) {
        Ok(p) => p,
        Err(e) => return render(cli, Err(CliError::param(e.to_string()))),
    };
    let result = match &cli.command {
        Command::Zeta { s, a, alt } => cmd_zeta(*s, *a, *alt, prec),
        Command::Eval { family, x, params } => cmd_eval(*family, *x, params, prec),
        Command::Expand { family, params, terms, at, n } => cmd_expand(*family, params, *terms, *at, *n),
        Command::Compare { family, params, x_grid, linear, terms } => {
            cmd_compare(*family, params, x_grid, *linear, *terms, prec)
        }
        Command::Constants { kind, shift, a, gamma, alpha, classical } => {
            cmd_constants(kind.as_deref(), *shift, (*a, *gamma, *alpha), *classical, prec)
        }
        Command::Verify { ineq, params, upper, lower, p_shift, q_shift, mu_list, x_grid, linear } => {
            cmd_verify(*ineq, params, (*upper, *lower, *p_shift, *q_shift), mu_list, &x_grid.points(*linear), prec)
        }
    };
    render(cli, result)
}

fn render(cli: &Cli, result: Result<(OutputRecord, u8), CliError>) -> Outcome {
    let emit = |record: &OutputRecord| -> Result<String, String> {
        if cli.csv {
            to_csv(record).map_err(|e| e.to_string())
        } else {
            Ok(to_json(record) + "\n")
        }
    };
    match result {
        Ok((record, code)) => match emit(&record) {
            Ok(stdout) => Outcome { code, stdout, stderr: String::new() },
            Err(e) => Outcome { code: EXIT_PARAM, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
        Err(err) => {
            let stdout = err.record.as_ref().and_then(|r| emit(r).ok()).unwrap_or_default();
            Outcome { code: err.code, stdout, stderr: format!("error: {}\n", err.message) }
        }
    }
}

fn mathieu(params: &ParamArgs, family_needs_mu: bool) -> Result<MathieuParams, CliError> {
    let mu = match (params.mu, family_needs_mu) {
        (Some(mu), _) => mu,
        (None, false) => 1.0,
        (None, true) => return Err(CliError::param("--mu is required for this family")),
    };
    Ok(MathieuParams::new(params.a, params.gamma, params.alpha, mu)?)
}

fn param_inputs(record: &mut OutputRecord, params: &ParamArgs) {
    record.input("a", num(params.a)).input("gamma", num(params.gamma)).input("alpha", num(params.alpha));
    if let Some(mu) = params.mu {
        record.input("mu", num(mu));
    }
}

fn cmd_zeta(s: f64, a: f64, alt: bool, prec: Precision) -> Result<(OutputRecord, u8), CliError> {
    let r = if alt { alt_hurwitz_zeta_estimate(s, a, prec)? } else { hurwitz_zeta_estimate(s, a, prec)? };
    let mut record = OutputRecord::new("zeta");
    record.input("s", num(s)).input("a", num(a)).input("alt", alt).input("tol", num(prec.abs_tol));
    record.rows.push(row([("value", num(r.value)), ("abs_error", num(r.abs_error))]));
    record.summary("value", num(r.value)).summary("abs_error", num(r.abs_error));
    Ok((record, EXIT_OK))
}

fn eval_row(r: &EvalResult) -> output::Map {
    row([
        ("value", num(r.value)),
        ("abs_error_bound", num(r.abs_error_bound)),
        ("terms_used", (r.terms_used as u64).into()),
    ])
}

fn cmd_eval(family: Family, x: f64, params: &ParamArgs, prec: Precision) -> Result<(OutputRecord, u8), CliError> {
    let p = mathieu(params, family.needs_mu())?;
    let mut record = OutputRecord::new("eval");
    record.input("family", family.to_string()).input("x", num(x)).input("tol", num(prec.abs_tol));
    param_inputs(&mut record, params);
    match eval_family(family, x, &p, prec) {
        Ok(r) => {
            record.rows.push(eval_row(&r));
            record.summary = eval_row(&r);
            Ok((record, EXIT_OK))
        }
        Err(SeriesError::BudgetExceeded(r)) => {
            record.rows.push(eval_row(&r));
            record.summary = eval_row(&r);
            record.summary("budget_exceeded", true);
            Err(CliError {
                code: EXIT_BUDGET,
                message: SeriesError::BudgetExceeded(r).to_string(),
                record: Some(Box::new(record)),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn validity_value(v: &Validity) -> Value {
    match v {
        Validity::AsymptoticOnly => row([("kind", "asymptotic_only".into())]).into_iter().collect(),
        Validity::ConvergentOn { x_max } => {
            row([("kind", "convergent_on".into()), ("x_max", num(*x_max))]).into_iter().collect()
        }
    }
}

fn cmd_expand(
    family: Family,
    params: &ParamArgs,
    terms: usize,
    at: Option<f64>,
    n: Option<usize>,
) -> Result<(OutputRecord, u8), CliError> {
    if terms > MAX_ORDER {
        return Err(CliError::param(format!("--terms must be <= {MAX_ORDER}")));
    }
    let p = mathieu(params, family.needs_mu())?;
    let e = expand(family, &p, terms)?;
    let mut record = OutputRecord::new("expand");
    record.input("family", family.to_string()).input("terms", terms as u64);
    param_inputs(&mut record, params);
    for &(k, c) in &e.terms {
        record.rows.push(row([("k", (k as u64).into()), ("coefficient", num(c))]));
    }
    let head = e.head.map_or(Value::Null, |h| {
        row([("coefficient", num(h.coefficient)), ("exponent", num(h.exponent))]).into_iter().collect()
    });
    let log_block = e.log_block.map_or(Value::Null, |l| {
        row([("r", (l.r as u64).into()), ("c_log", num(l.c_log)), ("c_const", num(l.c_const))]).into_iter().collect()
    });
    record.summary("head", head).summary("log_block", log_block).summary("validity", validity_value(&e.validity));
    if let Some(x) = at {
        if !(x > 0.0) {
            return Err(CliError::param(format!("--at must be > 0, got {x}")));
        }
        let used = n.unwrap_or_else(|| optimal_truncation(&e, x)).min(e.terms.len());
        record.input("at", num(x));
        record
            .summary("at", num(x))
            .summary("n_used", used as u64)
            .summary("value", num(eval_expansion(&e, x, used)))
            .summary("first_omitted", opt_num(first_omitted_term(&e, x, used)));
    }
    Ok((record, EXIT_OK))
}

fn cmd_compare(
    family: Family,
    params: &ParamArgs,
    grid: &Grid,
    linear: bool,
    terms: usize,
    prec: Precision,
) -> Result<(OutputRecord, u8), CliError> {
    if !(1..=MAX_ORDER).contains(&terms) {
        return Err(CliError::param(format!("--terms must be in 1..={MAX_ORDER}")));
    }
    let p = mathieu(params, family.needs_mu())?;
    // reject bad parameters up front; per-x failures become error cells
    expand(family, &p, terms)?;
    let mut record = OutputRecord::new("compare");
    record
        .input("family", family.to_string())
        .input("terms", terms as u64)
        .input("x_grid", grid.to_string())
        .input("linear", linear)
        .input("tol", num(prec.abs_tol));
    param_inputs(&mut record, params);
    let mut max_diff: f64 = 0.0;
    let mut errors = 0u64;
    for x in grid.points(linear) {
        match compare_expansion_vs_direct(family, &p, &[x], terms, prec) {
            Ok(rows) => {
                let r = rows[0];
                max_diff = max_diff.max(r.abs_diff);
                record.rows.push(row([
                    ("x", num(r.x)),
                    ("direct", num(r.direct)),
                    ("bound", num(r.direct_bound)),
                    ("expansion", num(r.expansion)),
                    ("diff", num(r.abs_diff)),
                    ("terms_used", (r.terms_used as u64).into()),
                    ("first_omitted", opt_num(r.first_omitted)),
                    ("error", Value::Null),
                ]));
            }
            Err(e) => {
                errors += 1;
                record.rows.push(row([("x", num(x)), ("error", e.to_string().into())]));
            }
        }
    }
    record.summary("rows", record.rows.len() as u64).summary("max_diff", num(max_diff)).summary("errors", errors);
    Ok((record, EXIT_OK))
}

fn cmd_constants(
    kind: Option<&str>,
    shift: f64,
    (a, gamma, alpha): (Option<f64>, Option<f64>, Option<f64>),
    classical: bool,
    prec: Precision,
) -> Result<(OutputRecord, u8), CliError> {
    let mut record = OutputRecord::new("constants");
    if classical {
        let r = classical_mathieu_report(prec)?;
        record.input("classical", true);
        for &(x, g) in &r.grid {
            record.rows.push(row([("x", num(x)), ("gap", num(g))]));
        }
        record
            .summary("q_sharp", num(r.q_sharp))
            .summary("p_sharp", num(r.p_sharp))
            .summary("p_sharp_limit", num(r.p_sharp_limit))
            .summary("sup_gap", num(r.sup_gap))
            .summary("inf_gap", num(r.inf_gap))
            .summary("monotone_decreasing", r.monotone_decreasing);
        return Ok((record, EXIT_OK));
    }
    let (Some(letter), Some(a), Some(gamma), Some(alpha)) = (kind, a, gamma, alpha) else {
        return Err(CliError::param("--kind, --a, --gamma and --alpha are required"));
    };
    let kind = ConstantKind::from_letter(letter, shift)
        .ok_or_else(|| CliError::param(format!("unknown kind '{letter}' (expected A..F)")))?;
    let p = crate::series::SeriesParams::new(a, gamma, alpha)?;
    let r = compute_constant(kind, &p, prec)?;
    record
        .input("kind", letter.to_uppercase())
        .input("shift", num(shift))
        .input("a", num(a))
        .input("gamma", num(gamma))
        .input("alpha", num(alpha))
        .input("tol", num(prec.abs_tol));
    let boundary = serde_json::to_value(r.boundary).unwrap_or(Value::Null);
    let summary = row([
        ("value", num(r.value)),
        ("finite", r.finite.into()),
        ("arg_x", opt_num(r.arg_x)),
        ("boundary", boundary),
        ("bracket_lo", num(r.bracket.0)),
        ("bracket_hi", num(r.bracket.1)),
        ("reason", r.reason.clone().map_or(Value::Null, Value::String)),
    ]);
    record.rows.push(summary.clone());
    record.summary = summary;
    Ok((record, EXIT_OK))
}

fn cmd_verify(
    ineq: Inequality,
    params: &ParamArgs,
    (upper, lower, p_shift, q_shift): (f64, f64, f64, f64),
    mu_list: &[f64],
    xs: &[f64],
    prec: Precision,
) -> Result<(OutputRecord, u8), CliError> {
    let p = crate::series::SeriesParams::new(params.a, params.gamma, params.alpha)?;
    if !(p_shift >= 0.0 && q_shift >= 0.0) {
        return Err(CliError::param("shifts must be >= 0"));
    }
    let report: VerificationReport = match ineq {
        Inequality::N1 => verify_inequality_n1(&p, upper, lower, p_shift, q_shift, mu_list, xs, prec)?,
        Inequality::N2 => verify_inequality_n2(&p, upper, lower, p_shift, q_shift, mu_list, xs, prec)?,
        Inequality::N3 => verify_inequality_n3(&p, upper, lower, p_shift, q_shift, mu_list, xs, prec)?,
    };
    let mut record = OutputRecord::new("verify");
    let name = match ineq {
        Inequality::N1 => "n1",
        Inequality::N2 => "n2",
        Inequality::N3 => "n3",
    };
    record
        .input("ineq", name)
        .input("upper", num(upper))
        .input("lower", num(lower))
        .input("p_shift", num(p_shift))
        .input("q_shift", num(q_shift))
        .input("mu_list", Value::Array(mu_list.iter().map(|&m| num(m)).collect()))
        .input("tol", num(prec.abs_tol));
    param_inputs(&mut record, params);
    for r in &report.rows {
        record.rows.push(row([
            ("mu", num(r.mu)),
            ("x", num(r.x)),
            ("lhs", num(r.lhs)),
            ("middle", num(r.middle)),
            ("middle_bound", num(r.middle_bound)),
            ("rhs", num(r.rhs)),
            ("slack_low", num(r.slack_low)),
            ("slack_high", num(r.slack_high)),
        ]));
    }
    record
        .summary("min_slack", num(report.min_slack))
        .summary("violations", Value::Array(report.violations.iter().map(|&i| (i as u64).into()).collect()))
        .summary("violation_count", report.violations.len() as u64)
        .summary("strictness_observed", report.strictness_observed);
    let code = if report.violations.is_empty() { EXIT_OK } else { EXIT_VIOLATIONS };
    Ok((record, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "0.001:1000:7".parse().unwrap();
        assert_eq!(g.n, 7);
        assert_eq!(g.points(false).len(), 7);
        assert!("1:2".parse::<Grid>().is_err());
        assert!("0:2:3".parse::<Grid>().is_err());
        assert!("1:2:0".parse::<Grid>().unwrap().points(true).is_empty());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
