//! Limits of convergent sequences, and the two-way correspondence between
//! measurable numbers and rational sequences with a Cauchy modulus.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::Measurable;
use crate::rational::Rat;

/// An indexed family `n ↦ T`, indices starting at 1.
pub type Sequence<T> = Arc<dyn Fn(&BigInt) -> T + Send + Sync>;

/// A modulus `k ↦ N`.
pub type IndexMap = Arc<dyn Fn(&BigInt) -> BigInt + Send + Sync>;

/// A rational sequence with an explicit convergence modulus:
/// `|a(n) − a(m)| < 1/k` whenever `n, m ≥ modulus(k)`.
#[derive(Clone)]
pub struct BcSequence {
    terms: Sequence<Rat>,
    modulus: IndexMap,
}

impl BcSequence {
    pub fn new<T, M>(terms: T, modulus: M) -> BcSequence
    where
        T: Fn(&BigInt) -> Rat + Send + Sync + 'static,
        M: Fn(&BigInt) -> BigInt + Send + Sync + 'static,
    {
        BcSequence {
            terms: Arc::new(terms),
            modulus: Arc::new(modulus),
        }
    }

    pub fn term(&self, n: &BigInt) -> Rat {
        (self.terms)(n)
    }

    pub fn modulus(&self, k: &BigInt) -> BigInt {
        (self.modulus)(k)
    }

    /// Checks the modulus invariant at each `k` over indices `modulus(k) + offset`.
    /// Returns the first `(k, n, m)` that breaks it.
    pub fn modulus_violation(&self, ks: &[BigInt], offsets: &[BigInt]) -> Option<(BigInt, BigInt, BigInt)> {
        for k in ks {
            let base = self.modulus(k);
            let idx: Vec<BigInt> = offsets.iter().map(|o| &base + o).collect();
            let vals: Vec<Rat> = idx.iter().map(|n| self.term(n)).collect();
            let bound = Rat::new(1, k.clone()).expect("positive k");
            for i in 0..idx.len() {
                for j in i + 1..idx.len() {
                    if (&vals[i] - &vals[j]).abs() >= bound {
                        return Some((k.clone(), idx[i].clone(), idx[j].clone()));
                    }
                }
            }
        }
        None
    }
}

/// The limit of `x` under the caller's modulus: `|x(n) − x(m)| ≤ 1/k` for `n, m ≥ modulus(k)`.
///
/// Queries `x(modulus(4q))` at scale `4q`; the tail contributes `1/(4q)`, the
/// query `1/(4q)` and the final rounding `1/(2q)`.
pub fn limit(x: Sequence<Measurable>, modulus: IndexMap, label: impl Into<String>) -> Measurable {
    Measurable::from_oracle(label, move |q| {
        let m: BigInt = q * 4;
        let term = x(&modulus(&m));
        Rat::new(term.approx(&m), 4).expect("nonzero").round_nearest()
    })
}

impl Measurable {
    /// Measurable number of a BC-sequence via the parity rule at scale `2q`.
    pub fn from_bc_sequence(s: &BcSequence) -> Measurable {
        let s = s.clone();
        Measurable::from_oracle("bc-limit", move |q| {
            let two_q: BigInt = q * 2;
            let a = s.term(&s.modulus(&two_q));
            let r = a.floor_scaled(&two_q);
            if r.is_even() {
                r / 2
            } else {
                (r + 1) / 2
            }
        })
    }

    /// The sequence `a(n) = p(n)/n` with modulus `k ↦ 2k + 1`.
    pub fn to_bc_sequence(&self) -> BcSequence {
        let a = self.clone();
        BcSequence::new(
            move |n| {
                assert!(n.is_positive(), "sequence indices start at 1");
                a.approx_rat(n)
            },
            |k| k * 2 + 1,
        )
    }
}
