//! Certified direct evaluation of the six series families
//!
//! | family | term |
//! |--------|------|
//! | f  | (k+a)^γ e^(−(k+a)^α x) |
//! | f̃  | (−1)^k (k+a)^γ e^(−(k+a)^α x) |
//! | g  | (k+a)^γ / (x(k+a)^α + 1)^μ |
//! | g̃  | (−1)^k (k+a)^γ / (x(k+a)^α + 1)^μ |
//! | S  | (k+a)^γ / ((k+a)^α + x)^μ |
//! | S̃  | (−1)^k (k+a)^γ / ((k+a)^α + x)^μ |
//!
//! Every result carries an absolute error bound made of a truncation part
//! and a rounding allowance.
//!
//! Exponential families stop once the terms are decreasing and an
//! incomplete-gamma majorant of the integral tail (or the first omitted term,
//! for f̃) is below half the tolerance. The rational families sum directly
//! until (k+a)^α dominates the additive constant by a factor of four, then
//! expand the remaining tail binomially into Hurwitz (or alternating Hurwitz)
//! zeta values at the cutoff, which converges geometrically.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::special::{alt_hurwitz_zeta_estimate, hurwitz_zeta_estimate, Precision, SpecialError};
use crate::sum::NeumaierSum;

/// (a, γ, α) for f and f̃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesParams {
    pub a: f64,
    pub gamma: f64,
    pub alpha: f64,
}

impl SeriesParams {
    pub fn new(a: f64, gamma: f64, alpha: f64) -> Result<Self, SeriesError> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(SeriesError::InvalidParams(format!("a must be > 0, got {a}")));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(SeriesError::InvalidParams(format!("alpha must be > 0, got {alpha}")));
        }
        if !gamma.is_finite() {
            return Err(SeriesError::InvalidParams(format!("gamma must be finite, got {gamma}")));
        }
        Ok(Self { a, gamma, alpha })
    }

    /// (γ + 1)/α, the order of the x → 0⁺ singularity of f.
    pub fn singular_order(&self) -> f64 {
        (self.gamma + 1.0) / self.alpha
    }

    /// a^α, the decay rate of f at infinity.
    pub fn decay_rate(&self) -> f64 {
        self.a.powf(self.alpha)
    }
}

/// (a, γ, α, μ) for g, g̃, S and S̃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MathieuParams {
    pub base: SeriesParams,
    pub mu: f64,
}

impl MathieuParams {
    /// Builds the parameters; the μ constraint depends on the family and is
    /// checked by [`MathieuParams::check_plain`] / [`MathieuParams::check_alternating`].
    pub fn new(a: f64, gamma: f64, alpha: f64, mu: f64) -> Result<Self, SeriesError> {
        let base = SeriesParams::new(a, gamma, alpha)?;
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(SeriesError::InvalidParams(format!("mu must be > 0, got {mu}")));
        }
        Ok(Self { base, mu })
    }

    /// μ > max{(γ+1)/α, 0}, required by g and S.
    pub fn check_plain(&self) -> Result<(), SeriesError> {
        let bound = self.base.singular_order().max(0.0);
        if self.mu > bound {
            Ok(())
        } else {
            Err(SeriesError::InvalidParams(format!(
                "mu must exceed max((gamma+1)/alpha, 0) = {bound}, got {}",
                self.mu
            )))
        }
    }

    /// μ > max{γ/α, 0}, required by g̃ and S̃.
    pub fn check_alternating(&self) -> Result<(), SeriesError> {
        let bound = (self.base.gamma / self.base.alpha).max(0.0);
        if self.mu > bound {
            Ok(())
        } else {
            Err(SeriesError::InvalidParams(format!("mu must exceed max(gamma/alpha, 0) = {bound}, got {}", self.mu)))
        }
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Self { base: self.base, mu }
    }
}

/// A series value with its certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_bound: f64,
    pub terms_used: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// The term budget ran out; the partial result carries an honest bound
    /// (possibly infinite).
    #[error("term budget exhausted after {} terms (bound {:e})", .0.terms_used, .0.abs_error_bound)]
    BudgetExceeded(EvalResult),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// Tag for the six series families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    F,
    FAlt,
    G,
    GAlt,
    S,
    SAlt,
}

impl Family {
    pub fn is_alternating(self) -> bool {
        matches!(self, Family::FAlt | Family::GAlt | Family::SAlt)
    }

    pub fn needs_mu(self) -> bool {
        !matches!(self, Family::F | Family::FAlt)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::F => "f",
            Family::FAlt => "falt",
            Family::G => "g",
            Family::GAlt => "galt",
            Family::S => "S",
            Family::SAlt => "Salt",
        };
        f.write_str(name)
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f" => Ok(Family::F),
            "falt" | "f_alt" => Ok(Family::FAlt),
            "g" => Ok(Family::G),
            "galt" | "g_alt" => Ok(Family::GAlt),
            "S" | "s" => Ok(Family::S),
            "Salt" | "salt" | "S_alt" => Ok(Family::SAlt),
            other => Err(format!("unknown family '{other}' (expected f, falt, g, galt, S, Salt)")),
        }
    }
}

fn check_positive_x(x: f64) -> Result<(), SeriesError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SeriesError::InvalidParams(format!("x must be finite and > 0, got {x}")));
    }
    Ok(())
}

fn check_nonnegative_x(x: f64) -> Result<(), SeriesError> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SeriesError::InvalidParams(format!("x must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// e^(a^α x) f(x) (or the f̃ analogue): the exponential family with its
/// leading decay factored out, so large x neither underflows nor loses the
/// relative accuracy of the envelope e^(px) f(x).
pub fn eval_f_scaled(x: f64, p: &SeriesParams, alternating: bool, prec: Precision) -> Result<EvalResult, SeriesError> {
    check_positive_x(x)?;
    let SeriesParams { a, gamma, alpha } = *p;
    let a_pow = p.decay_rate();
    let c = p.singular_order();
    let half_tol = 0.5 * prec.abs_tol;
    // terms decrease in k once (k+a)^α ≥ γ/(αx)
    let monotone_from = if gamma > 0.0 { gamma / (alpha * x) } else { 0.0 };

    let term = |k: usize| -> f64 {
        let v = k as f64 + a;
        let v_pow = v.powf(alpha);
        v.powf(gamma) * (-(v_pow - a_pow) * x).exp()
    };

    let mut acc = NeumaierSum::new();
    let mut trunc = f64::INFINITY;
    let mut n = 0usize;
    while n < prec.max_terms {
        let t = term(n);
        let signed = if alternating && n % 2 == 1 { -t } else { t };
        acc.add(signed);
        n += 1;

        if alternating {
            let v_next = n as f64 + a;
            if v_next.powf(alpha) >= monotone_from {
                let next = term(n);
                if next <= half_tol {
                    trunc = next;
                    break;
                }
            }
        } else {
            // tail Σ_{k≥n} ≤ ∫_{n−1}^∞, valid when decreasing from n−1 on
            let b = (n - 1) as f64 + a;
            let b_pow = b.powf(alpha);
            let z = b_pow * x;
            if b_pow >= monotone_from && (c <= 1.0 || z >= 2.0 * (c - 1.0)) {
                let factor: f64 = if c <= 1.0 { 1.0 } else { 2.0 };
                let log_bound = factor.ln() - (alpha * x).ln() + (gamma + 1.0 - alpha) * b.ln() - (b_pow - a_pow) * x;
                let bound = log_bound.exp();
                if bound <= half_tol {
                    trunc = bound;
                    break;
                }
            }
        }
    }

    let result = EvalResult { value: acc.value(), abs_error_bound: trunc + acc.rounding_allowance(), terms_used: n };
    if trunc.is_finite() {
        Ok(result)
    } else {
        Err(SeriesError::BudgetExceeded(result))
    }
}

fn unscale(r: EvalResult, factor: f64) -> EvalResult {
    EvalResult { value: r.value * factor, abs_error_bound: r.abs_error_bound * factor, ..r }
}

fn eval_exponential(x: f64, p: &SeriesParams, alternating: bool, prec: Precision) -> Result<EvalResult, SeriesError> {
    check_positive_x(x)?;
    let factor = (-p.decay_rate() * x).exp();
    // the caller's tolerance applies to the unscaled value
    let scaled_prec = Precision { abs_tol: prec.abs_tol / factor.max(f64::MIN_POSITIVE), ..prec };
    match eval_f_scaled(x, p, alternating, scaled_prec) {
        Ok(r) => Ok(unscale(r, factor)),
        Err(SeriesError::BudgetExceeded(r)) => Err(SeriesError::BudgetExceeded(unscale(r, factor))),
        Err(e) => Err(e),
    }
}

/// f(x, a, γ, α) = Σ_{k≥0} (k+a)^γ e^(−(k+a)^α x), x > 0.
pub fn eval_f(x: f64, p: &SeriesParams, prec: Precision) -> Result<EvalResult, SeriesError> {
    eval_exponential(x, p, false, prec)
}

/// f̃(x, a, γ, α) = Σ_{k≥0} (−1)^k (k+a)^γ e^(−(k+a)^α x), x > 0.
pub fn eval_f_alt(x: f64, p: &SeriesParams, prec: Precision) -> Result<EvalResult, SeriesError> {
    eval_exponential(x, p, true, prec)
}

/// Σ ε^k (k+a)^γ (scale·(k+a)^α + shift)^(−μ), with scale > 0, shift ≥ 0.
fn eval_rational(
    scale: f64,
    shift: f64,
    p: &MathieuParams,
    alternating: bool,
    prec: Precision,
) -> Result<EvalResult, SeriesError> {
    let SeriesParams { a, gamma, alpha } = p.base;
    let mu = p.mu;
    let half_tol = 0.5 * prec.abs_tol;

    let term = |k: usize| -> f64 {
        let v = k as f64 + a;
        v.powf(gamma) * (scale * v.powf(alpha) + shift).powf(-mu)
    };

    // direct part until shift/(scale (N+a)^α) ≤ 1/4
    let ratio = shift / scale;
    let needed = if ratio > 0.0 { (4.0 * ratio).powf(1.0 / alpha) - a } else { 0.0 };
    let min_direct = 8.0;
    let n_direct = needed.max(min_direct).ceil();

    if alternating && n_direct > BOOLE_THRESHOLD as f64 {
        return alternating_boole(scale, shift, p, prec);
    }
    if n_direct >= prec.max_terms as f64 {
        return Err(SeriesError::BudgetExceeded(rational_partial(scale, shift, p, alternating, prec.max_terms)));
    }
    let n_direct = n_direct as usize;

    let mut acc = NeumaierSum::new();
    for k in 0..n_direct {
        let t = term(k);
        acc.add(if alternating && k % 2 == 1 { -t } else { t });
    }

    // tail: scale^(−μ) Σ_m C(−μ, m) ratio^m Z(αμ + αm − γ, N + a)
    let b = n_direct as f64 + a;
    let y = ratio / b.powf(alpha);
    let sign_n = if alternating && n_direct % 2 == 1 { -1.0 } else { 1.0 };
    let scale_mu = scale.powf(-mu);
    let mut tail = NeumaierSum::new();
    let mut zeta_err = 0.0;
    let mut binom = 1.0; // C(−μ, m)
    let mut ratio_pow = 1.0; // ratio^m
    let mut trunc = f64::INFINITY;
    let mut m = 0usize;
    let max_m = 400usize;
    while m <= max_m {
        let sigma = alpha * mu + alpha * m as f64 - gamma;
        let coef = scale_mu * binom * ratio_pow;
        if coef != 0.0 {
            let b_sigma = b.powf(-sigma);
            let zprec = Precision { abs_tol: (1e-17 * b_sigma).max(f64::MIN_POSITIVE), ..prec };
            let z = if alternating {
                alt_hurwitz_zeta_estimate(sigma, b, zprec)?
            } else {
                hurwitz_zeta_estimate(sigma, b, zprec)?
            };
            tail.add(sign_n * coef * z.value);
            zeta_err += (coef * z.abs_error).abs();
        }
        // bound on the remaining terms m' > m via the geometric majorant
        let next = m + 1;
        let next_sigma = sigma + alpha;
        let zbound = if alternating { 1.0 } else { 1.0 + b / (next_sigma - 1.0) };
        let next_binom = binom * -(mu + m as f64) / next as f64;
        let next_mag = scale_mu * next_binom.abs() * y.powi(next as i32) * b.powf(gamma - alpha * mu) * zbound;
        let rho = y * ((mu + next as f64) / (next as f64 + 1.0)).max(1.0);
        if rho < 1.0 {
            let rest = next_mag / (1.0 - rho);
            if rest <= 0.5 * half_tol || ratio == 0.0 {
                trunc = if ratio == 0.0 { 0.0 } else { rest };
                break;
            }
        }
        binom = next_binom;
        ratio_pow *= ratio;
        m = next;
    }
    if !trunc.is_finite() {
        return Err(SeriesError::BudgetExceeded(rational_partial(scale, shift, p, alternating, n_direct)));
    }
    acc.add(tail.value());
    let bound = trunc + zeta_err + acc.rounding_allowance() + tail.rounding_allowance();
    Ok(EvalResult { value: acc.value(), abs_error_bound: bound, terms_used: n_direct + m + 1 })
}

const BOOLE_THRESHOLD: usize = 4096;
const BOOLE_START: usize = 64;

/// Taylor coefficients of ln(n + t) about t = 0.
fn ln_shift_series(n: f64, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    out[0] = n.ln();
    let mut pow = 1.0;
    for (j, c) in out.iter_mut().enumerate().skip(1) {
        pow /= n;
        *c = if j % 2 == 1 { pow } else { -pow } / j as f64;
    }
    out
}

/// Taylor coefficients of (n + t)^p.
fn pow_shift_series(n: f64, p: f64, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    out[0] = n.powf(p);
    for j in 1..len {
        out[j] = out[j - 1] * (p - (j - 1) as f64) / (j as f64 * n);
    }
    out
}

fn series_ln(u: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; u.len()];
    w[0] = u[0].ln();
    for n in 1..u.len() {
        let mut s = u[n];
        for k in 1..n {
            s -= k as f64 * w[k] * u[n - k] / n as f64;
        }
        w[n] = s / u[0];
    }
    w
}

fn series_exp(w: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; w.len()];
    e[0] = w[0].exp();
    for n in 1..w.len() {
        let mut s = 0.0;
        for k in 1..=n {
            s += k as f64 * w[k] * e[n - k];
        }
        e[n] = s / n as f64;
    }
    e
}

/// Alternating rational series when the direct cutoff is far away: sum the
/// first terms directly, then apply Boole summation
/// Σ_{k≥0} (−1)^k h(N+k) = Σ_n E_n(0)/2 · h^(n)(N)/n!
/// to the tail. The expansion is asymptotic; it is truncated at the first
/// term below tol/8 while terms still decrease, and the bound is twice the
/// first omitted term.
fn alternating_boole(scale: f64, shift: f64, p: &MathieuParams, prec: Precision) -> Result<EvalResult, SeriesError> {
    let SeriesParams { a, gamma, alpha } = p.base;
    let mu = p.mu;
    let bern = crate::special::shared_bernoulli();
    let len = crate::special::SHARED_BERNOULLI_MAX;

    let mut acc = NeumaierSum::new();
    for k in 0..BOOLE_START {
        let v = k as f64 + a;
        let t = v.powf(gamma) * (scale * v.powf(alpha) + shift).powf(-mu);
        acc.add(if k % 2 == 1 { -t } else { t });
    }

    let n = BOOLE_START as f64 + a;
    // ln h(n+t) = γ ln(n+t) − μ ln(scale (n+t)^α + shift)
    let mut inner = pow_shift_series(n, alpha, len);
    for c in inner.iter_mut() {
        *c *= scale;
    }
    inner[0] += shift;
    let ln_inner = series_ln(&inner);
    let ln_v = ln_shift_series(n, len);
    let ln_h: Vec<f64> = ln_v.iter().zip(&ln_inner).map(|(l, m)| gamma * l - mu * m).collect();
    let taylor = series_exp(&ln_h);

    let target = prec.abs_tol / 8.0;
    let mut tail = NeumaierSum::new();
    tail.add(0.5 * taylor[0]);
    let mut prev = f64::INFINITY;
    let mut trunc = f64::INFINITY;
    let mut used = 1;
    // only odd n contribute beyond n = 0
    let mut j = 1;
    while j + 1 < len {
        let euler = -((2f64).powi(j as i32 + 1) - 1.0) * bern.values()[j + 1] / (j + 1) as f64;
        let term = euler * taylor[j];
        if term.abs() > prev {
            break;
        }
        if term.abs() <= target {
            trunc = 2.0 * term.abs();
            break;
        }
        tail.add(term);
        prev = term.abs();
        used = j + 1;
        j += 2;
    }

    let sign = if BOOLE_START % 2 == 1 { -1.0 } else { 1.0 };
    acc.add(sign * tail.value());
    let result = EvalResult {
        value: acc.value(),
        abs_error_bound: trunc + acc.rounding_allowance() + tail.rounding_allowance(),
        terms_used: BOOLE_START + used,
    };
    if trunc.is_finite() {
        Ok(result)
    } else {
        Err(SeriesError::BudgetExceeded(result))
    }
}

/// Direct partial sum with the integral majorant (plain) or first omitted
/// term (alternating) as the bound; used when the term budget binds.
fn rational_partial(scale: f64, shift: f64, p: &MathieuParams, alternating: bool, n: usize) -> EvalResult {
    let SeriesParams { a, gamma, alpha } = p.base;
    let mu = p.mu;
    let term = |k: usize| {
        let v = k as f64 + a;
        v.powf(gamma) * (scale * v.powf(alpha) + shift).powf(-mu)
    };
    let n = n.max(1);
    let mut acc = NeumaierSum::new();
    for k in 0..n {
        let t = term(k);
        acc.add(if alternating && k % 2 == 1 { -t } else { t });
    }
    let bound = if alternating {
        let v = n as f64 + a;
        let decreasing = scale * v.powf(alpha) * (alpha * mu - gamma) > gamma * shift || gamma <= 0.0;
        if decreasing {
            term(n)
        } else {
            f64::INFINITY
        }
    } else {
        let b = (n - 1) as f64 + a;
        let e = alpha * mu - gamma - 1.0;
        scale.powf(-mu) * b.powf(-e) / e
    };
    EvalResult { value: acc.value(), abs_error_bound: bound + acc.rounding_allowance(), terms_used: n }
}

/// g(x, a, γ, α, μ) = Σ (k+a)^γ / (x(k+a)^α + 1)^μ, x > 0, μ > max{(γ+1)/α, 0}.
pub fn eval_g(x: f64, p: &MathieuParams, prec: Precision) -> Result<EvalResult, SeriesError> {
    check_positive_x(x)?;
    p.check_plain()?;
    eval_rational(x, 1.0, p, false, prec)
}

/// g̃(x, a, γ, α, μ) = Σ (−1)^k (k+a)^γ / (x(k+a)^α + 1)^μ, x > 0, μ > max{γ/α, 0}.
pub fn eval_g_alt(x: f64, p: &MathieuParams, prec: Precision) -> Result<EvalResult, SeriesError> {
    check_positive_x(x)?;
    p.check_alternating()?;
    eval_rational(x, 1.0, p, true, prec)
}

/// S(x, a, γ, α, μ) = Σ (k+a)^γ / ((k+a)^α + x)^μ, x ≥ 0, μ > max{(γ+1)/α, 0}.
#[allow(non_snake_case)]
pub fn eval_S(x: f64, p: &MathieuParams, prec: Precision) -> Result<EvalResult, SeriesError> {
    check_nonnegative_x(x)?;
    p.check_plain()?;
    eval_rational(1.0, x, p, false, prec)
}

/// S̃(x, a, γ, α, μ) = Σ (−1)^k (k+a)^γ / ((k+a)^α + x)^μ, x ≥ 0, μ > max{γ/α, 0}.
#[allow(non_snake_case)]
pub fn eval_S_alt(x: f64, p: &MathieuParams, prec: Precision) -> Result<EvalResult, SeriesError> {
    check_nonnegative_x(x)?;
    p.check_alternating()?;
    eval_rational(1.0, x, p, true, prec)
}

/// Dispatches on [`Family`]; `mu` is ignored for f and f̃.
pub fn eval_family(family: Family, x: f64, p: &MathieuParams, prec: Precision) -> Result<EvalResult, SeriesError> {
    match family {
        Family::F => eval_f(x, &p.base, prec),
        Family::FAlt => eval_f_alt(x, &p.base, prec),
        Family::G => eval_g(x, p, prec),
        Family::GAlt => eval_g_alt(x, p, prec),
        Family::S => eval_S(x, p, prec),
        Family::SAlt => eval_S_alt(x, p, prec),
    }
}
