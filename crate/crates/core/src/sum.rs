//! Compensated summation and the rounding allowance used by the evaluators.

/// Neumaier compensated accumulator that also tracks Σ|x| and the number of
/// terms, from which a rounding allowance is derived.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    abs: f64,
    count: usize,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
        self.abs += v.abs();
        self.count += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// 10 ulp of Σ|x| per started block of 1e4 operations.
    pub fn rounding_allowance(&self) -> f64 {
        rounding_allowance(self.abs, self.count)
    }
}

/// 10 ulp of `scale` per started block of 1e4 operations.
pub fn rounding_allowance(scale: f64, ops: usize) -> f64 {
    let blocks = (ops / 10_000 + 1) as f64;
    10.0 * f64::EPSILON * scale * blocks
}

/// Compensated sum of a slice.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(&v), 2.0);
    }

    #[test]
    fn allowance_grows_with_blocks() {
        assert!(rounding_allowance(1.0, 20_000) > rounding_allowance(1.0, 10));
    }
}
