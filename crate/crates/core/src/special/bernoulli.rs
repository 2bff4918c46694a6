use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Bernoulli numbers B_0..B_N (convention B_1 = −1/2).
///
/// Values are computed exactly in rational arithmetic and rounded once to
/// binary64.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliTable {
    exact: Vec<BigRational>,
    values: Vec<f64>,
}

impl BernoulliTable {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }

    /// Exact rational value of B_n.
    pub fn exact(&self, n: usize) -> Option<&BigRational> {
        self.exact.get(n)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// B_0..B_N from Σ_{j=0}^{m} C(m+1, j) B_j = 0.
pub fn bernoulli_numbers(n: usize) -> BernoulliTable {
    let n = n.max(1);
    let mut exact: Vec<BigRational> = Vec::with_capacity(n + 1);
    exact.push(BigRational::from_integer(BigInt::from(1)));
    for m in 1..=n {
        // binomial C(m+1, j), built incrementally
        let mut binom = BigInt::from(1);
        let mut acc = BigRational::zero();
        for (j, b) in exact.iter().enumerate() {
            if !b.is_zero() {
                acc += b * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        let bm = -acc / BigRational::from_integer(BigInt::from(m + 1));
        exact.push(bm);
    }
    let values = exact.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
    BernoulliTable { exact, values }
}

/// Largest Bernoulli index kept in the shared table.
pub(crate) const SHARED_BERNOULLI_MAX: usize = 64;

/// Shared table with B_0..B_64, built once.
pub(crate) fn shared() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| bernoulli_numbers(SHARED_BERNOULLI_MAX))
}
