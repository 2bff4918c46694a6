use std::f64::consts::PI;

use super::SpecialError;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// sin(πx), exact at integers and half-integers.
pub fn sin_pi(x: f64) -> f64 {
    let n = (2.0 * x).round();
    let r = x - 0.5 * n;
    match (n as i64).rem_euclid(4) {
        0 => (PI * r).sin(),
        1 => (PI * r).cos(),
        2 => -(PI * r).sin(),
        _ => -(PI * r).cos(),
    }
}

fn lanczos_sum(z: f64) -> f64 {
    let mut acc = LANCZOS_COEFF[0];
    for (i, &c) in LANCZOS_COEFF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Γ(s) for real s off the nonpositive integers.
///
/// Integer arguments up to 171 are returned as exact products; everything
/// else goes through Lanczos with reflection Γ(s)Γ(1−s) = π / sin(πs) for
/// s < 1/2.
pub fn gamma(s: f64) -> Result<f64, SpecialError> {
    if s.is_nan() {
        return Err(SpecialError::Domain("gamma of NaN".into()));
    }
    if s <= 0.0 && s == s.floor() {
        return Err(SpecialError::GammaPole(s));
    }
    if s == s.floor() && s <= 171.0 {
        let mut p = 1.0;
        let mut k = 2.0;
        while k < s {
            p *= k;
            k += 1.0;
        }
        return Ok(p);
    }
    if s < 0.5 {
        return Ok(PI / (sin_pi(s) * gamma(1.0 - s)?));
    }
    let z = s - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so t^(z+1/2) does not overflow before e^(-t) is applied
    let half = t.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(z))
}

/// ln Γ(s) for s > 0.
pub fn ln_gamma(s: f64) -> Result<f64, SpecialError> {
    if !(s > 0.0) {
        return Err(SpecialError::Domain(format!("ln_gamma requires s > 0, got {s}")));
    }
    if s < 0.5 {
        // Γ(s) = Γ(s+1)/s
        return Ok(ln_gamma(s + 1.0)? - s.ln());
    }
    let z = s - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

// B_{2k}/(2k), k = 1..8
const DIGAMMA_ASYMP: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3_617.0 / 8_160.0,
];

/// Digamma ψ(s) = Γ'(s)/Γ(s) for s > 0.
///
/// Recurrence ψ(s) = ψ(s+1) − 1/s up to s ≥ 12, then the Stirling-type
/// expansion ψ(s) ~ ln s − 1/(2s) − Σ B_{2k}/(2k s^{2k}).
pub fn digamma(s: f64) -> Result<f64, SpecialError> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(SpecialError::Domain(format!("digamma requires finite s > 0, got {s}")));
    }
    let mut shift = 0.0;
    let mut x = s;
    while x < 12.0 {
        shift += 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut series = 0.0;
    let mut pow = inv2;
    for &c in &DIGAMMA_ASYMP {
        series += c * pow;
        pow *= inv2;
    }
    Ok(x.ln() - 0.5 / x - series - shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_small_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-15);
        // Γ(−1/2) = −2√π
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gamma_poles_are_errors() {
        assert!(matches!(gamma(0.0), Err(SpecialError::GammaPole(_))));
        assert!(matches!(gamma(-3.0), Err(SpecialError::GammaPole(_))));
    }

    #[test]
    fn gamma_reflection_and_recurrence() {
        for &s in &[0.1, 0.3, 0.77, 1.4, 2.5, 7.3, 19.9, 33.3, 49.5] {
            let g = gamma(s).unwrap();
            let g1 = gamma(s + 1.0).unwrap();
            assert!(((g1 / (s * g)) - 1.0).abs() < 1e-13, "recurrence at {s}");
            if s < 1.0 {
                let refl = g * gamma(1.0 - s).unwrap() * sin_pi(s) / PI;
                assert!((refl - 1.0).abs() < 1e-13, "reflection at {s}");
            }
        }
    }

    #[test]
    fn gamma_large_matches_factorial_ratio() {
        // Γ(50.5)/Γ(49.5) = 49.5
        let r = gamma(50.5).unwrap() / gamma(49.5).unwrap();
        assert!((r / 49.5 - 1.0).abs() < 1e-13);
        let lg = ln_gamma(50.5).unwrap();
        assert!((lg.exp() / gamma(50.5).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ln_gamma_tiny_argument() {
        let s = 1e-6;
        assert!((ln_gamma(s).unwrap() - gamma(s).unwrap().ln()).abs() < 1e-12);
    }

    #[test]
    fn sin_pi_exact_points() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-2.0), 0.0);
        assert_eq!(sin_pi(0.5), 1.0);
        assert_eq!(sin_pi(1.5), -1.0);
    }

    #[test]
    fn digamma_known_values() {
        // ψ(1) = −γ_E from the harmonic-number limit, evaluated independently
        let n = 1_000_000u32;
        let harmonic: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
        // H_n − ln n − 1/(2n) + 1/(12n²) → γ_E with O(n⁻⁴) error
        let nf = n as f64;
        let euler = harmonic - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf * nf);
        assert!((digamma(1.0).unwrap() + euler).abs() < 1e-12);
        assert!((digamma(2.0).unwrap() - (1.0 - euler)).abs() < 1e-12);
        // duplication formula: ψ(1/2) = −γ_E − 2 ln 2
        let expected = -euler - 2.0 * std::f64::consts::LN_2;
        assert!((digamma(0.5).unwrap() - expected).abs() < 1e-12);
        assert!((expected + 1.963_510_026_0).abs() < 1e-10);
    }

    #[test]
    fn digamma_rejects_nonpositive() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
    }
}
