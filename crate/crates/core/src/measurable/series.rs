//! Series with a certified tail bound.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::Measurable;
use crate::rational::Rat;

pub type TermFn = Arc<dyn Fn(u64) -> Rat + Send + Sync>;

const MAX_TERMS: u64 = 1 << 40;

/// `Σ_{k ≥ start} term(k)` together with `tail(N) ≥ |S − S_N|`, where `S_N`
/// sums the first `N` terms. `tail` must be nonincreasing and tend to zero.
#[derive(Clone)]
pub struct CertifiedSeries {
    pub start: u64,
    pub term: TermFn,
    pub tail: TermFn,
}

impl CertifiedSeries {
    pub fn new(start: u64, term: TermFn, tail: TermFn) -> CertifiedSeries {
        CertifiedSeries { start, term, tail }
    }

    /// Sum of the first `n` terms, exactly.
    pub fn partial(&self, n: u64) -> Rat {
        (self.start..self.start + n).fold(Rat::zero(), |acc, k| acc + (self.term)(k))
    }

    /// Smallest `N` with `tail(N) ≤ eps`, relying on monotonicity of the tail.
    pub fn terms_needed(&self, eps: &Rat) -> u64 {
        if (self.tail)(0) <= *eps {
            return 0;
        }
        let mut hi = 1u64;
        while (self.tail)(hi) > *eps {
            hi *= 2;
            assert!(hi <= MAX_TERMS, "series tail bound does not reach {eps}");
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if (self.tail)(mid) <= *eps {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Oracle for the sum: `N` terms with tail `≤ 1/(4q)`, each rounded to the grid
    /// `1/(2qN)` (total rounding `≤ 1/(4q)`), then rounded to scale `q`.
    pub fn to_measurable(&self, label: impl Into<String>) -> Measurable {
        let s = self.clone();
        Measurable::from_oracle(label, move |q| {
            let eps = Rat::new(BigInt::one(), q * 4).expect("positive");
            let n = s.terms_needed(&eps);
            if n == 0 {
                return BigInt::from(0);
            }
            let grid: BigInt = q * 2 * n;
            let total: BigInt = (s.start..s.start + n)
                .map(|k| (s.term)(k).mul_int(&grid).round_nearest())
                .sum();
            Rat::new(total, 2 * n).expect("positive").round_nearest()
        })
    }
}
