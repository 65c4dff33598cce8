//! Diagnostics under the original (non-oscillating) reading of measurability
//! and eventual positivity of partial computations.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ast::Expr;
use super::eval::{eval, Classification, PartialSide, Tail};
use super::partial::partial;
use crate::error::Result;
use crate::measurable::{Measurable, TermFn};
use crate::rational::Rat;

const EVAL_DEPTH: u32 = 20;
const BAND_ROUNDS: u32 = 20;
const MAX_BAND_TERMS: u64 = 4096;
const MAX_SEARCH: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OriginalCheck {
    /// All sufficiently late partials lie in `[p/q, (p+1)/q)`.
    SatisfiedWith(BigInt),
    /// Late partials fall on both sides of a grid point infinitely often.
    Violated,
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Positivity {
    /// Partials are `≥ 0` for every `n ≥ N`.
    EventuallyNonnegative(u64),
    /// Partials are `< 0` for every `n ≥ N`.
    EventuallyNegative(u64),
    Unknown(String),
}

/// Smallest `n ≥ 1` with `bound(n) < eps` (or `≤` when `strict` is false),
/// searching no further than `cap`.
fn first_index(bound: &TermFn, eps: &Rat, strict: bool, cap: u64) -> Option<u64> {
    let ok = |n: u64| {
        let b = bound(n);
        if strict {
            b < *eps
        } else {
            b <= *eps
        }
    };
    let mut hi = 1u64;
    while !ok(hi) {
        if hi >= cap {
            return None;
        }
        hi = (hi * 2).min(cap);
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return Some(hi);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

fn certified_tail(e: &Expr) -> std::result::Result<(Measurable, Tail), String> {
    match eval(e, EVAL_DEPTH) {
        Classification::MeasurableValue(c) => match c.tail {
            Some(t) => Ok((c.value, t)),
            None => Err("no certified tail modulus".into()),
        },
        Classification::InfinitelyLargeValue(_) => Err("infinitely large".into()),
        Classification::Unknown(reason) => Err(reason),
    }
}

/// Whether one `p` catches all sufficiently late partial computations of `e`
/// in the half-open cell `[p/q, (p+1)/q)`.
pub fn original_measurability_check(e: &Expr, q: &BigInt) -> OriginalCheck {
    match certified_tail(e) {
        Ok((value, tail)) => original_check_with(&value, &tail, &|n| partial(e, n), q),
        Err(reason) => OriginalCheck::Unknown(reason),
    }
}

/// The same check for any certified value with partials `partial(n)`, `n ≥ 1`.
pub fn original_check_with(
    value: &Measurable,
    tail: &Tail,
    partial: &dyn Fn(u64) -> Result<Rat>,
    q: &BigInt,
) -> OriginalCheck {
    if let Some(s) = value.as_exact().and_then(|v| v.as_rat()) {
        let qs = s.mul_int(q);
        if !qs.is_integer() {
            return OriginalCheck::SatisfiedWith(qs.floor());
        }
        let p0 = qs.floor();
        return match tail.side {
            PartialSide::Alternating => OriginalCheck::Violated,
            PartialSide::Below => OriginalCheck::SatisfiedWith(p0 - 1),
            PartialSide::Above | PartialSide::Settled => OriginalCheck::SatisfiedWith(p0),
            PartialSide::Unknown => OriginalCheck::Unknown("side of the grid point not certified".into()),
        };
    }
    // late partials stay within 2τ(n) of the n-th one
    for j in 0..BAND_ROUNDS {
        let eps = Rat::new(BigInt::one(), q * 4 * (BigInt::one() << j)).expect("positive");
        let Some(n) = first_index(&tail.bound, &eps, false, MAX_BAND_TERMS) else {
            break;
        };
        let s = match partial(n) {
            Ok(s) => s,
            Err(err) => return OriginalCheck::Unknown(err.to_string()),
        };
        let spread = (tail.bound)(n) * Rat::int(2);
        let lo = (&s - &spread).mul_int(q);
        let hi = (&s + &spread).mul_int(q);
        let p = lo.floor();
        if hi < Rat::int(&p + 1) {
            return OriginalCheck::SatisfiedWith(p);
        }
    }
    OriginalCheck::Unknown("tail band did not settle into one cell".into())
}

/// Eventual sign of the partial computations from the certified limit sign
/// and the tail bound.
pub fn positivity(e: &Expr, depth: u32) -> Positivity {
    let (value, tail) = match certified_tail(e) {
        Ok(vt) => vt,
        Err(reason) => return Positivity::Unknown(reason),
    };
    // |S| ≥ (|p| − 1)/q at the first probe with |p| ≥ 2
    let probe = (0..=depth).find_map(|k| {
        let q = BigInt::one() << k;
        let p = value.approx(&q);
        (p.abs() >= BigInt::from(2)).then_some((q, p))
    });
    let Some((q, p)) = probe else {
        return Positivity::Unknown(format!("limit sign not certified within depth {depth}"));
    };
    let lower = Rat::new(p.abs() - 1, q).expect("positive");
    let Some(n) = first_index(&tail.bound, &lower, true, MAX_SEARCH) else {
        return Positivity::Unknown("tail bound does not fall below the limit".into());
    };
    if p > BigInt::zero() {
        Positivity::EventuallyNonnegative(n)
    } else {
        Positivity::EventuallyNegative(n)
    }
}
