//! Approximating intervals and rational nets.
//!
//! Floor-convention intervals `[p/q, (p+1)/q)` at two scales are not nested in
//! general, but they are directed downward: a common multiple scale yields an
//! interval inside both. Along a divisor chain `q | Q` the floor intervals nest,
//! which is what [`NetMode::DoublingMultiples`] relies on. Consecutive multiples
//! `kq₀, (k+1)q₀` are not a divisor chain and can fail to nest; see
//! [`naive_multiples_violation`].

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::measurable::{Measurable, SignResult};
use crate::omega::QOmega;
use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `[p/q, (p+1)/q)`, exact values only.
    FloorHalfOpen,
    /// `[(p−1)/q, (p+1)/q]`, any oracle.
    LaugwitzClosed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxInterval {
    pub q: BigInt,
    pub p: BigInt,
    pub convention: Convention,
}

impl ApproxInterval {
    pub fn lo(&self) -> Rat {
        let p = match self.convention {
            Convention::FloorHalfOpen => self.p.clone(),
            Convention::LaugwitzClosed => &self.p - 1,
        };
        Rat::new(p, self.q.clone()).expect("positive scale")
    }

    pub fn hi(&self) -> Rat {
        Rat::new(&self.p + 1, self.q.clone()).expect("positive scale")
    }

    pub fn contains(&self, x: &QOmega) -> bool {
        let lo = QOmega::from_rat(self.lo());
        let hi = QOmega::from_rat(self.hi());
        match self.convention {
            Convention::FloorHalfOpen => lo <= *x && *x < hi,
            Convention::LaugwitzClosed => lo <= *x && *x <= hi,
        }
    }

    /// Inclusion of same-convention intervals by endpoint comparison.
    pub fn is_subset_of(&self, other: &ApproxInterval) -> bool {
        self.convention == other.convention && other.lo() <= self.lo() && self.hi() <= other.hi()
    }

    pub fn closure(&self) -> ClosedInterval {
        ClosedInterval::new(self.lo(), self.hi())
    }
}

/// The approximating interval of `a` at scale `q`.
pub fn bolzano_interval(a: &Measurable, q: &BigInt) -> ApproxInterval {
    let convention = if a.is_exact() {
        Convention::FloorHalfOpen
    } else {
        Convention::LaugwitzClosed
    };
    ApproxInterval {
        q: q.clone(),
        p: a.approx(q),
        convention,
    }
}

/// A scale `q″ > q′` whose interval lies inside the intersection of the intervals
/// at `q` and `q′`: `lcm(q, q′)`, doubled when it coincides with `q′`.
pub fn dually_directed_witness(a: &Measurable, q: &BigInt, q2: &BigInt) -> (BigInt, bool) {
    let mut q3 = q.lcm(q2);
    if &q3 == q2 {
        q3 *= 2;
    }
    let fine = bolzano_interval(a, &q3);
    let certified = fine.is_subset_of(&bolzano_interval(a, q)) && fine.is_subset_of(&bolzano_interval(a, q2));
    (q3, certified)
}

/// The first consecutive pair of multiples `(kq₀, (k+1)q₀)`, `k < count`, whose
/// floor intervals fail to nest.
pub fn naive_multiples_violation(a: &Measurable, q0: &BigInt, count: u64) -> Option<(BigInt, BigInt)> {
    (1..count).find_map(|k| {
        let (qa, qb) = (q0 * k, q0 * (k + 1));
        let nested = bolzano_interval(a, &qb).is_subset_of(&bolzano_interval(a, &qa));
        (!nested).then_some((qa, qb))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl ClosedInterval {
    pub fn new(lo: Rat, hi: Rat) -> ClosedInterval {
        debug_assert!(lo <= hi);
        ClosedInterval { lo, hi }
    }

    pub fn length(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) * Rat::frac(1, 2)
    }

    pub fn is_subset_of(&self, other: &ClosedInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &ClosedInterval) -> Option<ClosedInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| ClosedInterval::new(lo, hi))
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetMode {
    /// Intervals at `q₀, 2q₀, 4q₀, …`; exact values only.
    DoublingMultiples,
    /// `J₁ = I(q₀)`, `Jₙ = Jₙ₋₁ ∩ I(2ⁿ⁻¹q₀)`; any value.
    CumulativeIntersection,
}

/// Nested closed rational intervals indexed from 1, with a length modulus:
/// `length(interval(n)) ≤ 1/k` for `n ≥ length_modulus(k)`.
#[derive(Clone)]
pub struct RationalNet {
    interval: Arc<dyn Fn(u64) -> ClosedInterval + Send + Sync>,
    length_modulus: Arc<dyn Fn(&BigInt) -> u64 + Send + Sync>,
}

/// Smallest `n ≥ 1` with `q₀·2ⁿ⁻¹ ≥ target`.
fn doubling_index(q0: &BigInt, target: &BigInt) -> u64 {
    let mut n = 1u64;
    let mut scale = q0.clone();
    while &scale < target {
        scale *= 2;
        n += 1;
    }
    n
}

impl RationalNet {
    pub fn new<I, M>(interval: I, length_modulus: M) -> RationalNet
    where
        I: Fn(u64) -> ClosedInterval + Send + Sync + 'static,
        M: Fn(&BigInt) -> u64 + Send + Sync + 'static,
    {
        RationalNet {
            interval: Arc::new(interval),
            length_modulus: Arc::new(length_modulus),
        }
    }

    pub fn interval(&self, n: u64) -> ClosedInterval {
        assert!(n >= 1, "net indices start at 1");
        (self.interval)(n)
    }

    pub fn length_modulus(&self, k: &BigInt) -> u64 {
        (self.length_modulus)(k)
    }

    /// First `n ≤ depth` with `interval(n) ⊄ interval(n−1)`.
    pub fn nesting_violation(&self, depth: u64) -> Option<u64> {
        (2..=depth).find(|&n| !self.interval(n).is_subset_of(&self.interval(n - 1)))
    }

    /// First `k` among the samples whose modulus index has an interval longer than `1/k`.
    pub fn length_violation(&self, ks: &[BigInt]) -> Option<BigInt> {
        ks.iter()
            .find(|k| {
                let n = self.length_modulus(k);
                self.interval(n).length() > Rat::new(1, (*k).clone()).expect("positive k")
            })
            .cloned()
    }

    /// One line per index: `n lo_num/lo_den hi_num/hi_den`.
    pub fn dump(&self, depth: u64) -> String {
        let mut out = String::new();
        for n in 1..=depth {
            let iv = self.interval(n);
            writeln!(
                out,
                "{} {}/{} {}/{}",
                n,
                iv.lo.numer(),
                iv.lo.denom(),
                iv.hi.numer(),
                iv.hi.denom()
            )
            .expect("write to string");
        }
        out
    }
}

pub fn net_from_measurable(a: &Measurable, q0: &BigInt, mode: NetMode) -> Result<RationalNet> {
    assert!(q0.is_positive(), "q0 must be positive");
    let q0 = q0.clone();
    match mode {
        NetMode::DoublingMultiples => {
            if !a.is_exact() {
                return Err(Error::ExactValueRequired);
            }
            let a = a.clone();
            let q0m = q0.clone();
            Ok(RationalNet::new(
                move |n| bolzano_interval(&a, &(&q0 << (n - 1))).closure(),
                move |k| doubling_index(&q0m, k),
            ))
        }
        NetMode::CumulativeIntersection => {
            let a = a.clone();
            let q0m = q0.clone();
            Ok(RationalNet::new(
                move |n| {
                    let mut acc = bolzano_interval(&a, &q0).closure();
                    for i in 1..n {
                        let next = bolzano_interval(&a, &(&q0 << i)).closure();
                        acc = acc.intersect(&next).expect("value lies in every interval");
                    }
                    acc
                },
                move |k| doubling_index(&q0m, &(k * 2)),
            ))
        }
    }
}

/// Index-wise inclusion up to `depth`.
pub fn net_finer(n1: &RationalNet, n2: &RationalNet, depth: u64) -> bool {
    (1..=depth).all(|n| n1.interval(n).is_subset_of(&n2.interval(n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetRelation {
    EquivalentUpTo(u64),
    /// Disjoint intervals at this index: the nets denote distinct reals.
    SeparatedAt(u64),
}

pub fn net_equivalent(n1: &RationalNet, n2: &RationalNet, depth: u64) -> NetRelation {
    (1..=depth)
        .find(|&n| n1.interval(n).intersect(&n2.interval(n)).is_none())
        .map_or(NetRelation::EquivalentUpTo(depth), NetRelation::SeparatedAt)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutVerdict {
    /// `r < A`.
    Below,
    /// `r > A`.
    Above,
    /// Exact values only: `A = r`.
    Equal,
    /// `|A − r| ≤ bound`.
    Undetermined(Rat),
}

/// Membership of `r` in the lower cut of `A`.
pub fn net_cut_test(a: &Measurable, r: &Rat, depth: u32) -> CutVerdict {
    let d = a.sub(&Measurable::from_rational(r.clone()));
    match d.sign_search(depth) {
        SignResult::Positive(_) => CutVerdict::Below,
        SignResult::Negative(_) => CutVerdict::Above,
        SignResult::Undetermined(_) if d.is_exact() => CutVerdict::Equal,
        SignResult::Undetermined(b) => CutVerdict::Undetermined(b),
    }
}

/// The number a net denotes: midpoint of the interval at `length_modulus(4q)`.
pub fn net_to_measurable(net: &RationalNet) -> Measurable {
    let net = net.clone();
    Measurable::from_oracle("net-limit", move |q| {
        let n = net.length_modulus(&(q * 4));
        net.interval(n).midpoint().mul_int(q).round_nearest()
    })
}

/// `lo ≤ √c ≤ hi`, decided by comparing integer squares.
pub fn contains_sqrt(iv: &ClosedInterval, c: &BigInt) -> bool {
    let below = |x: &Rat| x.signum() <= 0 || x.numer() * x.numer() <= c * x.denom() * x.denom();
    let above = |x: &Rat| x.signum() >= 0 && x.numer() * x.numer() >= c * x.denom() * x.denom();
    below(&iv.lo) && above(&iv.hi)
}

impl RationalNet {
    /// Constant net `[r, r]`.
    pub fn point(r: Rat) -> RationalNet {
        RationalNet::new(move |_| ClosedInterval::new(r.clone(), r.clone()), |_| 1)
    }
}
