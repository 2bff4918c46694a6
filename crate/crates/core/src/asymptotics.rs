//! Small-x expansions of f, f̃, g, g̃ and the large-x law of S.
//!
//! With c = (γ+1)/α and r = −c:
//!
//! ```text
//! f(x)  ~ Γ(c)/α · x^(−c)                    + Σ_k (−1)^k ζ(−αk−γ, a)/k! · x^k
//! g(x)  ~ Γ(c)Γ(μ−c)/(αΓ(μ)) · x^(−c)         + Σ_k (−1)^k (μ)_k ζ(−αk−γ, a)/k! · x^k
//! f̃(x) ~ Σ_k (−1)^k ζ̃(−αk−γ, a)/k! · x^k
//! g̃(x) ~ Σ_k (−1)^k (μ)_k ζ̃(−αk−γ, a)/k! · x^k
//! ```
//!
//! When r is a nonnegative integer the head and the k = r term merge into
//!
//! ```text
//! (−1)^r (μ)_r x^r / r! · (−ln x/α + ψ(r+1)/α − ψ(a) [− ψ(μ+r)/α for g])
//! ```
//!
//! ((μ)_r and the ψ(μ+r) term only for g).

use serde::Serialize;

use crate::series::{eval_family, EvalResult, Family, MathieuParams, SeriesError, SeriesParams};
use crate::special::{alt_hurwitz_zeta_estimate, digamma, gamma, hurwitz_zeta, hurwitz_zeta_estimate, Precision};
use crate::sum::NeumaierSum;

/// Tolerance for deciding that −(γ+1)/α is a nonnegative integer.
pub const INT_TOL: f64 = 1e-9;
pub const DEFAULT_ORDER: usize = 20;
pub const MAX_ORDER: usize = 60;

/// coefficient · x^exponent
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularHead {
    pub exponent: f64,
    pub coefficient: f64,
}

/// x^r (c_log ln x + c_const)
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogBlock {
    pub r: usize,
    pub c_log: f64,
    pub c_const: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Validity {
    AsymptoticOnly,
    /// The expansion converges to the function for 0 < x < x_max
    /// (x_max may be +∞).
    ConvergentOn {
        x_max: f64,
    },
}

impl Validity {
    pub fn converges_at(&self, x: f64) -> bool {
        match *self {
            Validity::AsymptoticOnly => false,
            Validity::ConvergentOn { x_max } => x > 0.0 && x < x_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expansion {
    pub head: Option<SingularHead>,
    pub log_block: Option<LogBlock>,
    /// (k, c_k) in increasing k; k = r is absent when a log block is present.
    pub terms: Vec<(usize, f64)>,
    pub validity: Validity,
    pub family: Family,
}

impl Expansion {
    fn head_value(&self, x: f64) -> f64 {
        let mut v = 0.0;
        if let Some(h) = self.head {
            v += h.coefficient * x.powf(h.exponent);
        }
        if let Some(l) = self.log_block {
            v += x.powi(l.r as i32) * (l.c_log * x.ln() + l.c_const);
        }
        v
    }
}

fn check_order(k: usize) -> Result<(), SeriesError> {
    if k > MAX_ORDER {
        return Err(SeriesError::InvalidParams(format!("expansion order {k} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

/// Some(r) when −(γ+1)/α is within [`INT_TOL`] of a nonnegative integer r.
pub fn degenerate_index(p: &SeriesParams) -> Option<usize> {
    let r = -p.singular_order();
    let rounded = r.round();
    if rounded >= 0.0 && (r - rounded).abs() < INT_TOL {
        Some(rounded as usize)
    } else {
        None
    }
}

fn coefficient_precision() -> Precision {
    Precision::with_tol(1e-15)
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// (μ)_k = Γ(μ+k)/Γ(μ)
fn pochhammer(mu: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (mu + j as f64))
}

fn zeta_terms(
    p: &SeriesParams,
    order: usize,
    skip: Option<usize>,
    mu: Option<f64>,
    alternating: bool,
) -> Result<Vec<(usize, f64)>, SeriesError> {
    let prec = coefficient_precision();
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        if Some(k) == skip {
            continue;
        }
        let s = -p.alpha * k as f64 - p.gamma;
        let z =
            if alternating { alt_hurwitz_zeta_estimate(s, p.a, prec)? } else { hurwitz_zeta_estimate(s, p.a, prec)? };
        // values indistinguishable from zero (trivial zeros) are stored as 0
        let z = if z.value.abs() <= z.abs_error { 0.0 } else { z.value };
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        let poch = mu.map_or(1.0, |m| pochhammer(m, k));
        out.push((k, sign * poch * z / factorial(k)));
    }
    Ok(out)
}

fn plain_validity(p: &SeriesParams, alternating: bool) -> Validity {
    if p.alpha < 1.0 {
        Validity::ConvergentOn { x_max: f64::INFINITY }
    } else if p.alpha == 1.0 {
        let x_max = if alternating { std::f64::consts::PI } else { 2.0 * std::f64::consts::PI };
        Validity::ConvergentOn { x_max }
    } else {
        Validity::AsymptoticOnly
    }
}

/// Expansion of f to order `order` (terms k = 0..=order).
pub fn expand_f(p: &SeriesParams, order: usize) -> Result<Expansion, SeriesError> {
    check_order(order)?;
    let c = p.singular_order();
    let (head, log_block, skip) = match degenerate_index(p) {
        Some(r) => {
            let sign = if r % 2 == 1 { -1.0 } else { 1.0 };
            let w = sign / factorial(r);
            let c_const = w * (digamma(r as f64 + 1.0)? / p.alpha - digamma(p.a)?);
            (None, Some(LogBlock { r, c_log: -w / p.alpha, c_const }), Some(r))
        }
        None => {
            let coefficient = gamma(c)? / p.alpha;
            (Some(SingularHead { exponent: -c, coefficient }), None, None)
        }
    };
    Ok(Expansion {
        head,
        log_block,
        terms: zeta_terms(p, order, skip, None, false)?,
        validity: plain_validity(p, false),
        family: Family::F,
    })
}

/// Expansion of f̃; no singular part.
pub fn expand_f_alt(p: &SeriesParams, order: usize) -> Result<Expansion, SeriesError> {
    check_order(order)?;
    Ok(Expansion {
        head: None,
        log_block: None,
        terms: zeta_terms(p, order, None, None, true)?,
        validity: plain_validity(p, true),
        family: Family::FAlt,
    })
}

/// Expansion of g; always asymptotic only.
pub fn expand_g(p: &MathieuParams, order: usize) -> Result<Expansion, SeriesError> {
    check_order(order)?;
    p.check_plain()?;
    let base = &p.base;
    let mu = p.mu;
    let c = base.singular_order();
    let (head, log_block, skip) = match degenerate_index(base) {
        Some(r) => {
            let sign = if r % 2 == 1 { -1.0 } else { 1.0 };
            let w = sign * pochhammer(mu, r) / factorial(r);
            let bracket =
                digamma(r as f64 + 1.0)? / base.alpha - digamma(base.a)? - digamma(mu + r as f64)? / base.alpha;
            (None, Some(LogBlock { r, c_log: -w / base.alpha, c_const: w * bracket }), Some(r))
        }
        None => {
            let coefficient = gamma(c)? * gamma(mu - c)? / (base.alpha * gamma(mu)?);
            (Some(SingularHead { exponent: -c, coefficient }), None, None)
        }
    };
    Ok(Expansion {
        head,
        log_block,
        terms: zeta_terms(base, order, skip, Some(mu), false)?,
        validity: Validity::AsymptoticOnly,
        family: Family::G,
    })
}

/// Expansion of g̃; always asymptotic only.
pub fn expand_g_alt(p: &MathieuParams, order: usize) -> Result<Expansion, SeriesError> {
    check_order(order)?;
    p.check_alternating()?;
    Ok(Expansion {
        head: None,
        log_block: None,
        terms: zeta_terms(&p.base, order, None, Some(p.mu), true)?,
        validity: Validity::AsymptoticOnly,
        family: Family::GAlt,
    })
}

/// Expansion for any of f, f̃, g, g̃.
pub fn expand(family: Family, p: &MathieuParams, order: usize) -> Result<Expansion, SeriesError> {
    match family {
        Family::F => expand_f(&p.base, order),
        Family::FAlt => expand_f_alt(&p.base, order),
        Family::G => expand_g(p, order),
        Family::GAlt => expand_g_alt(p, order),
        Family::S | Family::SAlt => {
            Err(SeriesError::InvalidParams("no small-x expansion object for S; use the large-x law".into()))
        }
    }
}

fn term_value(k: usize, c: f64, x: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * x.powi(k as i32)
    }
}

/// Head, log block and the first `n_terms` power terms at x. `n_terms` is
/// clamped to the number of available terms.
pub fn eval_expansion(e: &Expansion, x: f64, n_terms: usize) -> f64 {
    let n = n_terms.min(e.terms.len());
    let mut acc = NeumaierSum::new();
    // smallest terms first
    for &(k, c) in e.terms[..n].iter().rev() {
        acc.add(term_value(k, c, x));
    }
    acc.add(e.head_value(x));
    acc.value()
}

/// Number of power terms to keep: all terms up to the first local minimum
/// of |c_k x^k| (zero coefficients are skipped), or every term if the
/// magnitudes never turn upward.
pub fn optimal_truncation(e: &Expansion, x: f64) -> usize {
    let mut best: Option<(usize, f64)> = None;
    for (i, &(k, c)) in e.terms.iter().enumerate() {
        let m = term_value(k, c, x).abs();
        if m == 0.0 {
            continue;
        }
        match best {
            Some((_, prev)) if m > prev => return best.map_or(e.terms.len(), |(j, _)| j + 1),
            _ => best = Some((i, m)),
        }
    }
    e.terms.len()
}

/// First nonzero power term beyond the first `n_terms`, evaluated at x.
pub fn first_omitted_term(e: &Expansion, x: f64, n_terms: usize) -> Option<f64> {
    e.terms.iter().skip(n_terms).map(|&(k, c)| term_value(k, c, x)).find(|v| *v != 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InfinityRegime {
    /// γ + 1 > 0
    Power,
    /// γ + 1 = 0
    Logarithmic,
    /// γ + 1 < 0
    Constant,
}

/// Leading behaviour of S(x) as x → ∞: coefficient · x^exponent, times
/// ln x when `logarithmic`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfinityLaw {
    pub regime: InfinityRegime,
    pub coefficient: f64,
    pub exponent: f64,
    pub logarithmic: bool,
}

impl InfinityLaw {
    pub fn eval(&self, x: f64) -> f64 {
        let v = self.coefficient * x.powf(self.exponent);
        if self.logarithmic {
            v * x.ln()
        } else {
            v
        }
    }
}

/// Large-x law of S(x, a, γ, α, μ), read off from the g expansion through
/// S(x) = x^(−μ) g(1/x).
pub fn s_infinity_law(p: &MathieuParams) -> Result<InfinityLaw, SeriesError> {
    p.check_plain()?;
    let base = &p.base;
    let g1 = base.gamma + 1.0;
    let law = if g1.abs() < INT_TOL * base.alpha {
        InfinityLaw {
            regime: InfinityRegime::Logarithmic,
            coefficient: 1.0 / base.alpha,
            exponent: -p.mu,
            logarithmic: true,
        }
    } else if g1 > 0.0 {
        let c = base.singular_order();
        InfinityLaw {
            regime: InfinityRegime::Power,
            coefficient: gamma(c)? * gamma(p.mu - c)? / (base.alpha * gamma(p.mu)?),
            exponent: c - p.mu,
            logarithmic: false,
        }
    } else {
        InfinityLaw {
            regime: InfinityRegime::Constant,
            coefficient: hurwitz_zeta(-base.gamma, base.a, coefficient_precision())?,
            exponent: -p.mu,
            logarithmic: false,
        }
    };
    Ok(law)
}

/// One x of a direct-vs-expansion comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub x: f64,
    pub direct: f64,
    pub direct_bound: f64,
    pub expansion: f64,
    pub terms_used: usize,
    pub abs_diff: f64,
    /// First nonzero term not included, if any.
    pub first_omitted: Option<f64>,
}

/// Evaluates the direct series and the order-`order` expansion on `xs`.
/// Inside a convergence interval every term is used; otherwise the
/// expansion is cut at [`optimal_truncation`].
pub fn compare_expansion_vs_direct(
    family: Family,
    p: &MathieuParams,
    xs: &[f64],
    order: usize,
    prec: Precision,
) -> Result<Vec<CompareRow>, SeriesError> {
    if order < 1 {
        return Err(SeriesError::InvalidParams("comparison needs order >= 1".into()));
    }
    let e = expand(family, p, order)?;
    xs.iter()
        .map(|&x| {
            if !(x > 0.0) {
                return Err(SeriesError::InvalidParams(format!("x must be > 0, got {x}")));
            }
            let EvalResult { value, abs_error_bound, .. } = eval_family(family, x, p, prec)?;
            let n = if e.validity.converges_at(x) { e.terms.len() } else { optimal_truncation(&e, x) };
            let expansion = eval_expansion(&e, x, n);
            Ok(CompareRow {
                x,
                direct: value,
                direct_bound: abs_error_bound,
                expansion,
                terms_used: n,
                abs_diff: (value - expansion).abs(),
                first_omitted: first_omitted_term(&e, x, n),
            })
        })
        .collect()
}
