use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::measurable::{CertifiedSeries, Measurable};
use crate::omega::QOmega;
use crate::poly::Poly;
use crate::rational::Rat;

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub value: Measurable,
}

/// Named values the suites draw from.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub entries: Vec<Entry>,
}

fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * j)
}

/// `Σ_{k≥0} 1/k!` with `|e − S_N| ≤ 2/N!` for `N ≥ 1`.
pub fn e_series() -> CertifiedSeries {
    CertifiedSeries::new(
        0,
        Arc::new(|k| Rat::new(BigInt::one(), factorial(k)).expect("positive")),
        Arc::new(|n| {
            if n == 0 {
                Rat::int(3)
            } else {
                Rat::new(BigInt::from(2), factorial(n)).expect("positive")
            }
        }),
    )
}

/// `1/2 − 1/4 + 1/8 − …` summed term by term.
pub fn alternating_third() -> CertifiedSeries {
    CertifiedSeries::new(
        1,
        Arc::new(|k| {
            let t = Rat::new(BigInt::one(), BigInt::one() << k).expect("positive");
            if k % 2 == 1 {
                t
            } else {
                -t
            }
        }),
        Arc::new(|n| Rat::new(BigInt::one(), BigInt::one() << (n + 1)).expect("positive")),
    )
}

fn omega_value(num: &[i64], den: &[i64]) -> Measurable {
    let p = |c: &[i64]| Poly::new(c.iter().map(|&x| Rat::int(x)).collect());
    Measurable::from_qomega(QOmega::new(p(num), p(den)).expect("nonzero")).expect("finite")
}

impl Catalog {
    pub fn standard() -> Catalog {
        let entries = vec![
            ("0", Measurable::zero()),
            ("1", Measurable::one()),
            ("-1", Measurable::from_int(-1)),
            ("1/3", Measurable::from_rational(Rat::frac(1, 3))),
            ("2/3", Measurable::from_rational(Rat::frac(2, 3))),
            ("sqrt(2)", Measurable::from_int(2).sqrt(20).expect("positive")),
            ("e", e_series().to_measurable("e")),
            ("alt-1/3", alternating_third().to_measurable("alt-1/3")),
            ("1 - 1/omega", omega_value(&[-1, 1], &[0, 1])),
            ("1/omega", omega_value(&[1], &[0, 1])),
            ("(3*omega - 2)/(2*omega)", omega_value(&[-2, 3], &[0, 2])),
        ];
        Catalog {
            entries: entries.into_iter().map(|(name, value)| Entry { name, value }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Measurable> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.value)
    }

    /// Names of entries whose answers are mutually inconsistent on `qs`.
    pub fn inconsistent(&self, qs: &[BigInt]) -> Vec<&'static str> {
        self.entries
            .iter()
            .filter(|e| e.value.consistency_violation(qs).is_some())
            .map(|e| e.name)
            .collect()
    }
}
