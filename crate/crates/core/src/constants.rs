//! Sharp constants of the exponential envelopes of f and f̃ and grid checks
//! of the two-sided Mathieu-type inequalities they control.
//!
//! | kind | envelope h(x) | extremum | needs |
//! |------|---------------|----------|-------|
//! | A_p | e^(px) x^((γ+1)/α) f(x) | sup | γ+1 > 0 |
//! | B_q | e^(qx) x^((γ+1)/α) f(x) | inf | γ+1 > 0 |
//! | D_p | e^(px) f(x) | sup | γ+1 < 0 |
//! | E_q | e^(qx) f(x) | inf | γ+1 < 0 |
//! | C_p | e^(px) f̃(x) | sup | any γ |
//! | F_q | e^(qx) f̃(x) | inf | any γ |

use std::fmt;

use serde::Serialize;

use crate::asymptotics::{eval_expansion, expand_f, expand_g, first_omitted_term, optimal_truncation, Expansion};
use crate::series::{eval_S, eval_S_alt, eval_f_scaled, MathieuParams, SeriesError, SeriesParams};
use crate::special::{alt_hurwitz_zeta_estimate, gamma, hurwitz_zeta_estimate, Precision};

const SCAN_POINTS: usize = 400;
const SCAN_LO: f64 = 1e-8;
const SCAN_HI: f64 = 1e8;
const GOLDEN_REL_WIDTH: f64 = 1e-10;
const GOLDEN_MAX_ITER: usize = 200;
/// Above this many estimated direct terms the envelope uses the expansion.
const DIRECT_TERM_LIMIT: f64 = 1e5;
const EXPANSION_ORDER: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ConstantKind {
    A(f64),
    B(f64),
    C(f64),
    D(f64),
    E(f64),
    F(f64),
}

impl ConstantKind {
    pub fn shift(self) -> f64 {
        match self {
            ConstantKind::A(s)
            | ConstantKind::B(s)
            | ConstantKind::C(s)
            | ConstantKind::D(s)
            | ConstantKind::E(s)
            | ConstantKind::F(s) => s,
        }
    }

    pub fn from_letter(letter: &str, shift: f64) -> Option<Self> {
        Some(match letter {
            "A" | "a" => ConstantKind::A(shift),
            "B" | "b" => ConstantKind::B(shift),
            "C" | "c" => ConstantKind::C(shift),
            "D" | "d" => ConstantKind::D(shift),
            "E" | "e" => ConstantKind::E(shift),
            "F" | "f" => ConstantKind::F(shift),
            _ => return None,
        })
    }

    fn is_sup(self) -> bool {
        matches!(self, ConstantKind::A(_) | ConstantKind::C(_) | ConstantKind::D(_))
    }

    fn alternating(self) -> bool {
        matches!(self, ConstantKind::C(_) | ConstantKind::F(_))
    }

    fn weighted(self) -> bool {
        matches!(self, ConstantKind::A(_) | ConstantKind::B(_))
    }
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self {
            ConstantKind::A(_) => "A",
            ConstantKind::B(_) => "B",
            ConstantKind::C(_) => "C",
            ConstantKind::D(_) => "D",
            ConstantKind::E(_) => "E",
            ConstantKind::F(_) => "F",
        };
        write!(f, "{letter}_{}", self.shift())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    None,
    XToZero,
    XToInf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantResult {
    pub value: f64,
    pub arg_x: Option<f64>,
    pub boundary: Boundary,
    pub finite: bool,
    pub bracket: (f64, f64),
    /// Why the value was decided without a search, if it was.
    pub reason: Option<String>,
}

impl ConstantResult {
    fn by_law(value: f64, boundary: Boundary, reason: String) -> Self {
        Self { value, arg_x: None, boundary, finite: value.is_finite(), bracket: (value, value), reason: Some(reason) }
    }
}

/// h(x) for one constant kind, with an absolute error estimate.
struct Envelope {
    p: SeriesParams,
    shift: f64,
    power: f64,
    alternating: bool,
    expansion: Option<Expansion>,
    prec: Precision,
}

impl Envelope {
    fn new(kind: ConstantKind, p: &SeriesParams, prec: Precision) -> Result<Self, SeriesError> {
        let alternating = kind.alternating();
        let expansion = if alternating {
            crate::asymptotics::expand_f_alt(p, EXPANSION_ORDER)
        } else {
            expand_f(p, EXPANSION_ORDER)
        };
        // near-degenerate parameters can hit the zeta pole; fall back to direct sums then
        Ok(Self {
            p: *p,
            shift: kind.shift(),
            power: if kind.weighted() { p.singular_order() } else { 0.0 },
            alternating,
            expansion: expansion.ok(),
            prec,
        })
    }

    fn log_weight(&self, x: f64) -> f64 {
        self.shift * x + self.power * x.ln()
    }

    fn eval(&self, x: f64) -> Result<(f64, f64), SeriesError> {
        let est_terms = (40.0 / x).powf(1.0 / self.p.alpha);
        if let (true, Some(e)) = (est_terms > DIRECT_TERM_LIMIT, &self.expansion) {
            let n = if e.validity.converges_at(x) { e.terms.len() } else { optimal_truncation(e, x) };
            let v = eval_expansion(e, x, n);
            let omitted = first_omitted_term(e, x, n).map_or(0.0, f64::abs);
            let w = self.log_weight(x).exp();
            return Ok((w * v, w * (2.0 * omitted + 16.0 * f64::EPSILON * v.abs())));
        }
        let lw = self.log_weight(x) - self.p.decay_rate() * x;
        let tol = (self.prec.abs_tol * (-lw).exp()).clamp(f64::MIN_POSITIVE, f64::MAX);
        let r = eval_f_scaled(x, &self.p, self.alternating, Precision { abs_tol: tol, ..self.prec })?;
        let w = lw.exp();
        Ok((w * r.value, w * r.abs_error_bound))
    }
}

/// (limit of h at 0⁺, its error, limit of h at ∞).
fn boundary_limits(kind: ConstantKind, p: &SeriesParams, prec: Precision) -> Result<(f64, f64, f64), SeriesError> {
    let a_pow = p.decay_rate();
    let shift = kind.shift();
    let zprec = Precision::with_tol(prec.abs_tol.min(1e-14));
    let (at_zero, zero_err) = match kind {
        ConstantKind::A(_) | ConstantKind::B(_) => {
            let c = p.singular_order();
            (gamma(c)? / p.alpha, 4.0 * f64::EPSILON)
        }
        ConstantKind::D(_) | ConstantKind::E(_) => {
            let z = hurwitz_zeta_estimate(-p.gamma, p.a, zprec)?;
            (z.value, z.abs_error)
        }
        ConstantKind::C(_) | ConstantKind::F(_) => {
            let z = alt_hurwitz_zeta_estimate(-p.gamma, p.a, zprec)?;
            (z.value, z.abs_error)
        }
    };
    // h ~ a^γ x^power e^((shift − a^α) x)
    let at_inf = if shift < a_pow {
        0.0
    } else if shift > a_pow || (kind.weighted() && p.singular_order() > 0.0) {
        f64::INFINITY
    } else {
        p.a.powf(p.gamma)
    };
    Ok((at_zero, zero_err, at_inf))
}

fn check_hypotheses(kind: ConstantKind, p: &SeriesParams) -> Result<(), SeriesError> {
    let shift = kind.shift();
    if !(shift >= 0.0) || !shift.is_finite() {
        return Err(SeriesError::InvalidParams(format!("shift must be finite and >= 0, got {shift}")));
    }
    let g1 = p.gamma + 1.0;
    match kind {
        ConstantKind::A(_) | ConstantKind::B(_) if !(g1 > 0.0) => {
            Err(SeriesError::InvalidParams(format!("{kind} requires gamma + 1 > 0, got gamma = {}", p.gamma)))
        }
        ConstantKind::D(_) | ConstantKind::E(_) if !(g1 < 0.0) => {
            Err(SeriesError::InvalidParams(format!("{kind} requires gamma + 1 < 0, got gamma = {}", p.gamma)))
        }
        _ => Ok(()),
    }
}

/// Sharp constant of the given kind.
///
/// Finiteness laws are applied first. Otherwise h is scanned on 400
/// log-spaced points in [1e-8, 1e8], the best interior point is refined by
/// golden section in ln x, and the result is compared with the analytic
/// limits at 0⁺ and ∞.
pub fn compute_constant(kind: ConstantKind, p: &SeriesParams, prec: Precision) -> Result<ConstantResult, SeriesError> {
    check_hypotheses(kind, p)?;
    let a_pow = p.decay_rate();
    match kind {
        ConstantKind::A(s) if s >= a_pow => {
            return Ok(ConstantResult::by_law(f64::INFINITY, Boundary::XToInf, format!("p >= a^alpha = {a_pow}")));
        }
        ConstantKind::D(s) | ConstantKind::C(s) if s > a_pow => {
            return Ok(ConstantResult::by_law(f64::INFINITY, Boundary::XToInf, format!("p > a^alpha = {a_pow}")));
        }
        ConstantKind::B(s) | ConstantKind::E(s) if s < a_pow => {
            return Ok(ConstantResult::by_law(0.0, Boundary::XToInf, format!("q < a^alpha = {a_pow}")));
        }
        _ => {}
    }

    let sign = if kind.is_sup() { 1.0 } else { -1.0 };
    let env = Envelope::new(kind, p, prec)?;
    let (lo_t, hi_t) = (SCAN_LO.ln(), SCAN_HI.ln());
    let step = (hi_t - lo_t) / (SCAN_POINTS - 1) as f64;
    let mut best = (0usize, f64::NEG_INFINITY, 0.0);
    for i in 0..SCAN_POINTS {
        let x = (lo_t + step * i as f64).exp();
        let (v, e) = env.eval(x)?;
        if sign * v > best.1 {
            best = (i, sign * v, e);
        }
    }

    // golden section on t = ln x around the best grid point
    let (mut arg_t, mut best_val, mut best_err) = (lo_t + step * best.0 as f64, best.1, best.2);
    if best.0 > 0 && best.0 + 1 < SCAN_POINTS {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut a = arg_t - step;
        let mut b = arg_t + step;
        let eval_t = |t: f64| env.eval(t.exp()).map(|(v, e)| (sign * v, e));
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = eval_t(c)?;
        let mut fd = eval_t(d)?;
        let mut iter = 0;
        while (b - a) > GOLDEN_REL_WIDTH && iter < GOLDEN_MAX_ITER {
            if fc.0 > fd.0 {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = eval_t(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = eval_t(d)?;
            }
            iter += 1;
        }
        for (t, f) in [(c, fc), (d, fd)] {
            if f.0 > best_val {
                arg_t = t;
                best_val = f.0;
                best_err = f.1;
            }
        }
    }
    let interior = sign * best_val;

    let (at_zero, zero_err, at_inf) = boundary_limits(kind, p, prec)?;
    let mut result = ConstantResult {
        value: interior,
        arg_x: Some(arg_t.exp()),
        boundary: Boundary::None,
        finite: true,
        bracket: (interior - best_err, interior + best_err),
        reason: None,
    };
    if sign * at_zero >= sign * result.value {
        result = ConstantResult {
            value: at_zero,
            arg_x: None,
            boundary: Boundary::XToZero,
            finite: at_zero.is_finite(),
            bracket: (at_zero - zero_err, at_zero + zero_err),
            reason: None,
        };
    }
    if sign * at_inf >= sign * result.value {
        let err = 4.0 * f64::EPSILON * at_inf.abs();
        result = ConstantResult {
            value: at_inf,
            arg_x: None,
            boundary: Boundary::XToInf,
            finite: at_inf.is_finite(),
            bracket: (at_inf - err, at_inf + err),
            reason: None,
        };
    }
    if !result.finite {
        result.bracket = (result.value, result.value);
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerificationRow {
    pub mu: f64,
    pub x: f64,
    pub lhs: f64,
    pub middle: f64,
    pub middle_bound: f64,
    pub rhs: f64,
    /// middle − lhs − middle_bound
    pub slack_low: f64,
    /// rhs − middle − middle_bound
    pub slack_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub rows: Vec<VerificationRow>,
    pub min_slack: f64,
    pub violations: Vec<usize>,
    pub strictness_observed: bool,
}

impl VerificationReport {
    fn from_rows(rows: Vec<VerificationRow>) -> Self {
        let mut min_slack = f64::INFINITY;
        let mut violations = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            let s = r.slack_low.min(r.slack_high);
            min_slack = min_slack.min(s);
            if s < 0.0 || s.is_nan() {
                violations.push(i);
            }
        }
        Self { strictness_observed: violations.is_empty() && min_slack > 0.0, rows, min_slack, violations }
    }
}

/// Evaluates lhs(μ, x) ≤ middle(μ, x) ≤ rhs(μ, x) with x as the outer loop.
fn verify_grid(
    mu_list: &[f64],
    xs: &[f64],
    prec: Precision,
    mut bounds: impl FnMut(f64, f64) -> Result<(f64, f64), SeriesError>,
    mut middle: impl FnMut(f64, f64, Precision) -> Result<(f64, f64), SeriesError>,
) -> Result<VerificationReport, SeriesError> {
    let mut rows = Vec::with_capacity(mu_list.len() * xs.len());
    for &x in xs {
        for &mu in mu_list {
            let (lhs, rhs) = bounds(mu, x)?;
            let scale = [rhs, lhs].into_iter().find(|v| v.is_finite() && *v != 0.0).map_or(1.0, f64::abs);
            let tol = prec.abs_tol.min(1e-10 * scale).max(f64::MIN_POSITIVE);
            let (m, err) = middle(mu, x, Precision { abs_tol: tol, ..prec })?;
            rows.push(VerificationRow {
                mu,
                x,
                lhs,
                middle: m,
                middle_bound: err,
                rhs,
                slack_low: m - lhs - err,
                slack_high: rhs - m - err,
            });
        }
    }
    Ok(VerificationReport::from_rows(rows))
}

fn s_middle(
    p: &SeriesParams,
    alternating: bool,
) -> impl FnMut(f64, f64, Precision) -> Result<(f64, f64), SeriesError> + '_ {
    move |mu, x, prec| {
        let mp = MathieuParams { base: *p, mu };
        let r = if alternating { eval_S_alt(x, &mp, prec)? } else { eval_S(x, &mp, prec)? };
        Ok((r.value, r.abs_error_bound))
    }
}

fn scaled_bound(constant: f64, shift: f64, x: f64, power: f64, factor: f64) -> f64 {
    if constant == 0.0 {
        0.0
    } else if constant.is_infinite() {
        constant
    } else {
        constant * factor * (shift + x).powf(-power)
    }
}

/// B Γ(μ−c)/(Γ(μ)(q+x)^(μ−c)) ≤ S(x) ≤ A Γ(μ−c)/(Γ(μ)(p+x)^(μ−c)), c = (γ+1)/α.
#[allow(clippy::too_many_arguments)]
pub fn verify_inequality_n2(
    p: &SeriesParams,
    a_const: f64,
    b_const: f64,
    p_shift: f64,
    q_shift: f64,
    mu_list: &[f64],
    xs: &[f64],
    prec: Precision,
) -> Result<VerificationReport, SeriesError> {
    let c = p.singular_order();
    if !(c > 0.0) {
        return Err(SeriesError::InvalidParams("n2 requires gamma + 1 > 0".into()));
    }
    for &mu in mu_list {
        MathieuParams::new(p.a, p.gamma, p.alpha, mu)?.check_plain()?;
    }
    let bounds = |mu: f64, x: f64| -> Result<(f64, f64), SeriesError> {
        let factor = gamma(mu - c)? / gamma(mu)?;
        Ok((scaled_bound(b_const, q_shift, x, mu - c, factor), scaled_bound(a_const, p_shift, x, mu - c, factor)))
    };
    verify_grid(mu_list, xs, prec, bounds, s_middle(p, false))
}

/// E/(q+x)^μ ≤ S(x) ≤ D/(p+x)^μ.
#[allow(clippy::too_many_arguments)]
pub fn verify_inequality_n3(
    p: &SeriesParams,
    d_const: f64,
    e_const: f64,
    p_shift: f64,
    q_shift: f64,
    mu_list: &[f64],
    xs: &[f64],
    prec: Precision,
) -> Result<VerificationReport, SeriesError> {
    if !(p.gamma + 1.0 < 0.0) {
        return Err(SeriesError::InvalidParams("n3 requires gamma + 1 < 0".into()));
    }
    for &mu in mu_list {
        MathieuParams::new(p.a, p.gamma, p.alpha, mu)?.check_plain()?;
    }
    let bounds =
        |mu: f64, x: f64| Ok((scaled_bound(e_const, q_shift, x, mu, 1.0), scaled_bound(d_const, p_shift, x, mu, 1.0)));
    verify_grid(mu_list, xs, prec, bounds, s_middle(p, false))
}

/// F/(q+x)^μ ≤ S̃(x) ≤ C/(p+x)^μ. F may be −∞ to check only the upper side.
#[allow(clippy::too_many_arguments)]
pub fn verify_inequality_n1(
    p: &SeriesParams,
    c_const: f64,
    f_const: f64,
    p_shift: f64,
    q_shift: f64,
    mu_list: &[f64],
    xs: &[f64],
    prec: Precision,
) -> Result<VerificationReport, SeriesError> {
    for &mu in mu_list {
        MathieuParams::new(p.a, p.gamma, p.alpha, mu)?.check_alternating()?;
    }
    let bounds =
        |mu: f64, x: f64| Ok((scaled_bound(f_const, q_shift, x, mu, 1.0), scaled_bound(c_const, p_shift, x, mu, 1.0)));
    verify_grid(mu_list, xs, prec, bounds, s_middle(p, true))
}

/// n log-spaced points from lo to hi inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}

/// n evenly spaced points from lo to hi inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// μ₀ + {0.1, 0.5, 1, 3, 10}.
pub fn default_mu_list(mu0: f64) -> Vec<f64> {
    [0.1, 0.5, 1.0, 3.0, 10.0].iter().map(|d| mu0 + d).collect()
}

/// 25 points per decade over [1e-3, 1e3].
pub fn default_x_grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 151)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalReport {
    /// sup G = G(0⁺) = 1/(2ζ(3))
    pub q_sharp: f64,
    /// inf G over the grid (attained at its largest x)
    pub p_sharp: f64,
    /// lim_{x→∞} G from the large-x expansion of S
    pub p_sharp_limit: f64,
    /// q_sharp − max over the grid
    pub sup_gap: f64,
    /// min over the grid − p_sharp_limit
    pub inf_gap: f64,
    pub monotone_decreasing: bool,
    pub grid: Vec<(f64, f64)>,
}

/// G(x) = 1/(2 S(x, 1, 1, 2, 2)) − x, the gap function of the classical
/// Mathieu inequality 1/(x + q) < 2S(x) < 1/(x + p), on a log grid
/// reaching x = 1e6.
pub fn classical_mathieu_report(prec: Precision) -> Result<ClassicalReport, SeriesError> {
    let mp = MathieuParams::new(1.0, 1.0, 2.0, 2.0)?;
    let s0 = eval_S(0.0, &mp, Precision { abs_tol: prec.abs_tol.min(1e-15), ..prec })?.value;
    let q_sharp = 1.0 / (2.0 * s0);

    // S(x) = h0/x + c0/x² + … ⇒ G → −c0/(2 h0²)
    let e = expand_g(&mp, 1)?;
    let h0 = e.head.map_or(0.0, |h| h.coefficient);
    let c0 = e.terms[0].1;
    let p_sharp_limit = -c0 / (2.0 * h0 * h0);

    let mut grid = Vec::new();
    for x in log_grid(1e-3, 1e6, 64) {
        // G needs S to relative accuracy well below 1/x
        let s = eval_S(x, &mp, Precision { abs_tol: 1e-16 / (1.0 + x), ..prec })?.value;
        grid.push((x, 1.0 / (2.0 * s) - x));
    }
    let max_g = grid.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);
    let min_g = grid.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    let monotone_decreasing = grid.windows(2).all(|w| w[1].1 <= w[0].1);
    Ok(ClassicalReport {
        q_sharp,
        p_sharp: min_g,
        p_sharp_limit,
        sup_gap: q_sharp - max_g,
        inf_gap: min_g - p_sharp_limit,
        monotone_decreasing,
        grid,
    })
}

/// Relative variation (max − min)/max|·| of x^β e^(shift·x) f(x) over 11
/// log-spaced points in [0.1, 1].
pub fn lemma_nonconstancy_probe(p: &SeriesParams, beta: f64, shift: f64) -> Result<f64, SeriesError> {
    let prec = Precision::with_tol(1e-14);
    let mut values = Vec::new();
    for x in log_grid(0.1, 1.0, 11) {
        let lw = beta * x.ln() + (shift - p.decay_rate()) * x;
        let r = eval_f_scaled(x, p, false, prec)?;
        values.push(lw.exp() * r.value);
    }
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = max.abs().max(min.abs());
    Ok(if scale == 0.0 { 0.0 } else { (max - min) / scale })
}
