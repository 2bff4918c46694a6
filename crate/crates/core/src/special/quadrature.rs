//! Fixed-order Gauss–Legendre panels.

use std::f64::consts::PI;
use std::sync::OnceLock;

pub(crate) const GL_ORDER: usize = 20;

/// Nodes and weights on [−1, 1], by Newton iteration on P_n.
pub(crate) fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

/// ∫ over one panel [lo, hi]; also returns ∫|f| for rounding estimates.
pub(crate) fn panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut sum = 0.0;
    let mut abs = 0.0;
    for &(x, w) in gauss_legendre() {
        let v = f(mid + half * x);
        sum += w * v;
        abs += w * v.abs();
    }
    (half * sum, half * abs)
}
