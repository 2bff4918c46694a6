//! Hurwitz zeta ζ(s, a) and its alternating companion ζ̃(s, a).
//!
//! For s ≥ 0 the value comes from Euler–Maclaurin summation at the offset a
//! itself. For s < 0 the offset is moved into [1, 2) with the shift identity
//! and Hermite's integral
//!
//! ζ(s, b) = b^(−s)/2 + b^(1−s)/(s−1) + 2 ∫₀^∞ sin(s·atan(t/b)) (b²+t²)^(−s/2) / (e^(2πt) − 1) dt
//!
//! is integrated with Gauss–Legendre panels. Euler–Maclaurin with a large
//! direct-sum cutoff loses everything to cancellation once s is a few units
//! below zero, which is exactly where the expansion coefficients live.

use std::f64::consts::{LN_2, PI};

use super::bernoulli::{shared, SHARED_BERNOULLI_MAX};
use super::gamma::ln_gamma;
use super::quadrature::panel;
use super::{Approx, Precision, SpecialError};
use crate::sum::{rounding_allowance, NeumaierSum};

/// |s − 1| below which [`hurwitz_zeta`] reports the pole.
pub const POLE_GUARD: f64 = 1e-6;

const EM_MAX_CORRECTIONS: usize = 25;
const _: () = assert!(2 * EM_MAX_CORRECTIONS <= SHARED_BERNOULLI_MAX);
/// Below this distance from 1, ζ̃ is assembled from regularized pieces.
const ALT_REGULARIZE_RADIUS: f64 = 0.25;

fn check_offset(a: f64) -> Result<(), SpecialError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(SpecialError::Domain(format!("offset a must be finite and > 0, got {a}")));
    }
    Ok(())
}

fn check_arg(s: f64) -> Result<(), SpecialError> {
    if !s.is_finite() {
        return Err(SpecialError::Domain(format!("s must be finite, got {s}")));
    }
    Ok(())
}

/// Euler–Maclaurin at offset `a`, s ≥ 0. With `regularize`, returns
/// ζ(s, a) − 1/(s − 1) (finite at s = 1).
fn euler_maclaurin(s: f64, a: f64, tol: f64, regularize: bool) -> Approx {
    let n = ((s.abs().ceil() + 10.0).max((10.0 - a).ceil()).max(10.0)) as usize;
    let b = n as f64 + a;
    let ln_b = b.ln();

    let mut acc = NeumaierSum::new();
    for k in 0..n {
        acc.add((k as f64 + a).powf(-s));
    }

    let integral = if regularize {
        if s == 1.0 {
            -ln_b
        } else {
            ((1.0 - s) * ln_b).exp_m1() / (s - 1.0)
        }
    } else {
        b.powf(1.0 - s) / (s - 1.0)
    };
    acc.add(integral);
    let b_pow_s = b.powf(-s);
    acc.add(0.5 * b_pow_s);

    let bern = shared();
    // j = 1: (s)_1 = s, b^(−s−1), (2j)! = 2
    let mut poch = s;
    let mut b_pow = b_pow_s / b;
    let mut fact = 2.0;
    let mut last = 0.0;
    for j in 1..=EM_MAX_CORRECTIONS {
        let term = bern.values()[2 * j] / fact * poch * b_pow;
        acc.add(term);
        last = term.abs();
        if last < 0.25 * tol {
            break;
        }
        let (j2, jf) = (2 * j, j as f64);
        poch *= (s + 2.0 * jf - 1.0) * (s + 2.0 * jf);
        b_pow /= b * b;
        fact *= ((j2 + 1) * (j2 + 2)) as f64;
    }
    Approx { value: acc.value(), abs_error: last + acc.rounding_allowance() }
}

/// Hermite's integral at b ∈ [1, 2).
fn hermite(s: f64, b: f64) -> Approx {
    let b2 = b * b;
    let integrand = |t: f64| -> f64 {
        let phase = (s * (t / b).atan()).sin();
        let mag = (-0.5 * s * (b2 + t * t).ln() - 2.0 * PI * t).exp();
        phase * mag / -(-2.0 * PI * t).exp_m1()
    };
    let log_envelope = |t: f64| -0.5 * s * (b2 + t * t).ln() - 2.0 * PI * t;
    let peak = (-s / (2.0 * PI)).max(0.0);

    let integrate = |width: f64| -> (f64, f64, usize) {
        let mut acc = NeumaierSum::new();
        let mut abs = 0.0;
        let mut lo = 0.0;
        let mut log_max = log_envelope(0.0);
        let mut panels = 0;
        loop {
            let hi = lo + width;
            let (v, va) = panel(&integrand, lo, hi);
            acc.add(v);
            abs += va;
            panels += 1;
            let le = log_envelope(hi);
            log_max = log_max.max(le);
            lo = hi;
            if lo > peak && le < log_max - 52.0 {
                break;
            }
        }
        (acc.value(), abs, panels)
    };
    let (fine, abs, panels) = integrate(0.5);
    let (coarse, _, _) = integrate(1.0);

    let head = 0.5 * b.powf(-s) + b.powf(1.0 - s) / (s - 1.0);
    let value = head + 2.0 * fine;
    let quad_err = 2.0 * (fine - coarse).abs();
    let round = rounding_allowance(2.0 * abs + head.abs(), panels * 20);
    Approx { value, abs_error: quad_err + round }
}

fn zeta_negative(s: f64, a: f64) -> Approx {
    let mut extra = NeumaierSum::new();
    let mut b = a;
    if a < 1.0 {
        while b < 1.0 {
            extra.add(b.powf(-s));
            b += 1.0;
        }
    } else if a >= 2.0 {
        let p = a.floor() - 1.0;
        b = a - p;
        for k in 0..p as usize {
            extra.add(-(b + k as f64).powf(-s));
        }
    }
    let core = hermite(s, b);
    Approx { value: extra.value() + core.value, abs_error: core.abs_error + extra.rounding_allowance() }
}

/// ζ(s, a) with an absolute error estimate.
pub fn hurwitz_zeta_estimate(s: f64, a: f64, prec: Precision) -> Result<Approx, SpecialError> {
    check_arg(s)?;
    check_offset(a)?;
    if (s - 1.0).abs() < POLE_GUARD {
        return Err(SpecialError::ZetaPole { s });
    }
    if s >= 0.0 {
        Ok(euler_maclaurin(s, a, prec.abs_tol, false))
    } else {
        Ok(zeta_negative(s, a))
    }
}

/// Hurwitz zeta ζ(s, a) = Σ_{k≥0} (k + a)^(−s), analytically continued to
/// every real s ≠ 1.
///
/// Within [`POLE_GUARD`] of s = 1 this returns [`SpecialError::ZetaPole`];
/// use [`hurwitz_zeta_near_pole`] there.
pub fn hurwitz_zeta(s: f64, a: f64, prec: Precision) -> Result<f64, SpecialError> {
    hurwitz_zeta_estimate(s, a, prec).map(|r| r.value)
}

/// Regularized value ζ(s, a) − 1/(s − 1); equals −ψ(a) at s = 1.
pub fn hurwitz_zeta_near_pole(s: f64, a: f64) -> Result<f64, SpecialError> {
    check_arg(s)?;
    check_offset(a)?;
    let tol = 1e-15;
    if s >= 0.0 {
        Ok(euler_maclaurin(s, a, tol, true).value)
    } else {
        Ok(zeta_negative(s, a).value - 1.0 / (s - 1.0))
    }
}

/// ζ̃(s, a) with an absolute error estimate.
pub fn alt_hurwitz_zeta_estimate(s: f64, a: f64, prec: Precision) -> Result<Approx, SpecialError> {
    check_arg(s)?;
    check_offset(a)?;
    let half = 0.5 * (a + 1.0);
    let scale = (2.0f64).powf(1.0 - s);
    let tol = 0.25 * prec.abs_tol;
    if (s - 1.0).abs() < ALT_REGULARIZE_RADIUS {
        let ra = euler_maclaurin(s, a, tol, true);
        let rh = euler_maclaurin(s, half, tol / scale, true);
        // (1 − 2^(1−s))/(s − 1) → ln 2 at s = 1
        let pole_part = if s == 1.0 { LN_2 } else { -((1.0 - s) * LN_2).exp_m1() / (s - 1.0) };
        return Ok(Approx {
            value: ra.value - scale * rh.value + pole_part,
            abs_error: ra.abs_error + scale * rh.abs_error + 4.0 * f64::EPSILON,
        });
    }
    let za = hurwitz_zeta_estimate(s, a, Precision { abs_tol: tol, ..prec })?;
    let zh = hurwitz_zeta_estimate(s, half, Precision { abs_tol: tol / scale, ..prec })?;
    Ok(Approx { value: za.value - scale * zh.value, abs_error: za.abs_error + scale * zh.abs_error })
}

/// Alternating Hurwitz zeta ζ̃(s, a) = Σ_{k≥0} (−1)^k (k + a)^(−s), entire in s.
///
/// Uses ζ̃(s, a) = ζ(s, a) − 2^(1−s) ζ(s, (a+1)/2); near s = 1 the pole parts
/// are cancelled analytically, giving ζ̃(1, a) = −ψ(a) + ψ((a+1)/2) + ln 2.
pub fn alt_hurwitz_zeta(s: f64, a: f64, prec: Precision) -> Result<f64, SpecialError> {
    alt_hurwitz_zeta_estimate(s, a, prec).map(|r| r.value)
}

/// Partial sum of Hurwitz's formula
///
/// ζ(s, a) = 2Γ(1−s)/(2π)^(1−s) · Σ_{k≥1} sin(2πak + πs/2) / k^(1−s),  s < 0, 0 < a ≤ 1,
///
/// with `terms` summands. The error estimate bounds the omitted tail by
/// absolute values. Intended as an independent cross-check.
pub fn hurwitz_formula_oracle(s: f64, a: f64, terms: usize) -> Result<Approx, SpecialError> {
    check_arg(s)?;
    if !(s < 0.0) {
        return Err(SpecialError::Domain(format!("Hurwitz formula needs s < 0, got {s}")));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(SpecialError::Domain(format!("Hurwitz formula needs 0 < a <= 1, got {a}")));
    }
    if terms == 0 {
        return Err(SpecialError::Domain("Hurwitz formula needs at least one term".into()));
    }
    let prefactor = 2.0 * (ln_gamma(1.0 - s)? - (1.0 - s) * (2.0 * PI).ln()).exp();
    let mut acc = NeumaierSum::new();
    for k in 1..=terms {
        let kf = k as f64;
        let turn = (a * kf).fract();
        let phase = 2.0 * PI * turn + 0.5 * PI * s;
        acc.add(phase.sin() * (-(1.0 - s) * kf.ln()).exp());
    }
    let tail = (terms as f64).powf(s) / -s;
    Ok(Approx { value: prefactor * acc.value(), abs_error: prefactor * (tail + acc.rounding_allowance()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{digamma, EULER_GAMMA};

    fn prec() -> Precision {
        Precision::with_tol(1e-13)
    }

    // direct summation with an integral tail bracket, for s > 1
    fn direct_zeta(s: f64, a: f64) -> f64 {
        let n = 200_000;
        let head: f64 = (0..n).rev().map(|k| (k as f64 + a).powf(-s)).sum();
        let b = n as f64 + a;
        // Σ_{k≥n} ≈ ∫_b^∞ + b^(−s)/2 + s b^(−s−1)/12
        head + b.powf(1.0 - s) / (s - 1.0) + 0.5 * b.powf(-s) + s * b.powf(-s - 1.0) / 12.0
    }

    #[test]
    fn zeta_two_is_basel() {
        let v = hurwitz_zeta(2.0, 1.0, prec()).unwrap();
        assert!((v - PI * PI / 6.0).abs() < 1e-13);
        assert!((v - direct_zeta(2.0, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn zeta_at_zero_and_minus_one() {
        assert!((hurwitz_zeta(0.0, 0.25, prec()).unwrap() - 0.25).abs() < 1e-14);
        assert!((hurwitz_zeta(-1.0, 1.0, prec()).unwrap() + 1.0 / 12.0).abs() < 1e-13);
        // ζ(−1, a) = −B_2(a)/2 = −(a² − a + 1/6)/2
        for &a in &[0.01, 0.3, 1.0, 1.5, 2.5, 7.25] {
            let expected = -(a * a - a + 1.0 / 6.0) / 2.0;
            let got = hurwitz_zeta(-1.0, a, prec()).unwrap();
            assert!((got - expected).abs() < 1e-12 * (1.0 + expected.abs()), "a={a}");
        }
    }

    #[test]
    fn pole_is_reported() {
        assert!(matches!(hurwitz_zeta(1.0, 1.0, prec()), Err(SpecialError::ZetaPole { .. })));
        assert!(matches!(hurwitz_zeta(1.0 + 5e-7, 2.0, prec()), Err(SpecialError::ZetaPole { .. })));
        assert!(hurwitz_zeta(1.0 + 2e-6, 2.0, prec()).is_ok());
    }

    #[test]
    fn bad_offset_is_domain_error() {
        assert!(matches!(hurwitz_zeta(2.0, 0.0, prec()), Err(SpecialError::Domain(_))));
        assert!(matches!(alt_hurwitz_zeta(2.0, -1.0, prec()), Err(SpecialError::Domain(_))));
    }

    #[test]
    fn near_pole_regularized() {
        assert!((hurwitz_zeta_near_pole(1.0, 1.0).unwrap() - EULER_GAMMA).abs() < 1e-14);
        assert!((hurwitz_zeta_near_pole(1.0, 2.0).unwrap() - (EULER_GAMMA - 1.0)).abs() < 1e-14);
        assert!((hurwitz_zeta_near_pole(1.0 + 1e-9, 1.0).unwrap() - EULER_GAMMA).abs() < 1e-6);
        for &a in &[0.1, 0.5, 3.7, 40.0] {
            let r = hurwitz_zeta_near_pole(1.0, a).unwrap();
            assert!((r + digamma(a).unwrap()).abs() < 1e-12, "a={a}");
        }
        // continuity across the guard
        let inside = hurwitz_zeta_near_pole(1.0 + 9e-7, 0.7).unwrap();
        let s = 1.0 + 1.1e-6;
        let outside = hurwitz_zeta(s, 0.7, prec()).unwrap() - 1.0 / (s - 1.0);
        assert!((inside - outside).abs() < 1e-6);
    }

    #[test]
    fn alternating_special_values() {
        let ln2 = alt_hurwitz_zeta(1.0, 1.0, prec()).unwrap();
        assert!((ln2 - LN_2).abs() < 1e-14);
        let eta2 = alt_hurwitz_zeta(2.0, 1.0, prec()).unwrap();
        assert!((eta2 - PI * PI / 12.0).abs() < 1e-13);
        // η(0) = 1/2, η(−1) = 1/4
        assert!((alt_hurwitz_zeta(0.0, 1.0, prec()).unwrap() - 0.5).abs() < 1e-13);
        assert!((alt_hurwitz_zeta(-1.0, 1.0, prec()).unwrap() - 0.25).abs() < 1e-13);
        let lhs = alt_hurwitz_zeta(3.0, 0.5, prec()).unwrap();
        let rhs = hurwitz_zeta(3.0, 0.5, prec()).unwrap() - 0.25 * hurwitz_zeta(3.0, 0.75, prec()).unwrap();
        assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn alternating_matches_digamma_form_at_one() {
        for &a in &[0.2, 1.0, 2.5, 9.0] {
            let expected = -digamma(a).unwrap() + digamma(0.5 * (a + 1.0)).unwrap() + LN_2;
            assert!((alt_hurwitz_zeta(1.0, a, prec()).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn alternating_continuous_through_regularized_band() {
        for &a in &[0.3, 1.0, 4.0] {
            let lo = alt_hurwitz_zeta(1.0 - ALT_REGULARIZE_RADIUS - 1e-9, a, prec()).unwrap();
            let hi = alt_hurwitz_zeta(1.0 - ALT_REGULARIZE_RADIUS + 1e-9, a, prec()).unwrap();
            assert!((lo - hi).abs() < 1e-8);
        }
    }

    #[test]
    fn hurwitz_oracle_domain() {
        assert!(hurwitz_formula_oracle(0.5, 0.5, 10).is_err());
        assert!(hurwitz_formula_oracle(-1.0, 1.5, 10).is_err());
        let r = hurwitz_formula_oracle(-2.0, 1.0, 100_000).unwrap();
        assert!(r.value.abs() < 1e-10);
    }

    #[test]
    fn large_negative_arguments() {
        // ζ(−n) = −B_{n+1}/(n+1); B_{n+1} from the exact table
        let bern = shared();
        for n in [11usize, 21, 31, 41, 59] {
            let expected = -bern.values()[n + 1] / (n + 1) as f64;
            let got = hurwitz_zeta(-(n as f64), 1.0, prec()).unwrap();
            assert!(((got - expected) / expected).abs() < 1e-12, "n={n}: {got} vs {expected}");
        }
    }
}
