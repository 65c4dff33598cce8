//! Real numbers as measuring-fraction oracles.
//!
//! A [`Measurable`] answers, for every scale `q ≥ 1`, an integer `p` with
//! `|S − p/q| ≤ 1/q` for the value `S` it represents. Values that are exact
//! elements of the ω-field stay exact through arithmetic and answer with the
//! stricter floor convention `p/q ≤ S < (p+1)/q`. Mixing an exact value with a
//! genuine oracle uses the exact value's floor view, which satisfies the same
//! closed contract.
//!
//! Every oracle-path operation splits its `1/q` budget into at most `1/(2q)`
//! of approximation error and at most `1/(2q)` of rounding error.

mod bc;
mod series;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::omega::{QOmega, Sign};
use crate::rational::{ceil_div, isqrt_rem, Rat};

pub use bc::{limit, BcSequence, IndexMap, Sequence};
pub use series::{CertifiedSeries, TermFn};

const CACHE_LIMIT: usize = 4096;

type OracleFn = dyn Fn(&BigInt) -> BigInt + Send + Sync;

struct OracleCell {
    label: String,
    approx: Box<OracleFn>,
    cache: Mutex<HashMap<BigInt, BigInt>>,
}

impl OracleCell {
    fn query(&self, q: &BigInt) -> BigInt {
        if let Some(p) = self.cache.lock().expect("oracle cache poisoned").get(q) {
            return p.clone();
        }
        let p = (self.approx)(q);
        let mut cache = self.cache.lock().expect("oracle cache poisoned");
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(q.clone(), p.clone());
        p
    }
}

#[derive(Clone)]
enum Repr {
    Exact(Arc<QOmega>),
    Oracle(Arc<OracleCell>),
}

/// A measurable number: exact ω-field value or measuring-fraction oracle.
#[derive(Clone)]
pub struct Measurable {
    repr: Repr,
}

/// How a sign or comparison verdict was certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Decided by exact arithmetic in the ω-field.
    Exact,
    /// The scale `q₀` at which `|p(q₀)| ≥ 2`, certifying `|S| ≥ 1/q₀`.
    Scale(BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignResult {
    Positive(Witness),
    Negative(Witness),
    /// `|S| ≤ bound`.
    Undetermined(Rat),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Less(Witness),
    Greater(Witness),
    /// `|A − B| ≤ bound`.
    EqualWithin(Rat),
}

impl Comparison {
    pub fn is_less(&self) -> bool {
        matches!(self, Comparison::Less(_))
    }

    pub fn is_greater(&self) -> bool {
        matches!(self, Comparison::Greater(_))
    }
}

/// Outcome of the generalised `n`-window measurement at one scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowCheck {
    CertifiedWith(BigInt),
    NoCertificate,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

/// `2/2^depth`, the resolution of a depth-limited probe.
pub fn probe_bound(depth: u32) -> Rat {
    Rat::new(2, pow2(depth)).expect("nonzero")
}

impl Measurable {
    pub fn from_rational(r: Rat) -> Measurable {
        Measurable {
            repr: Repr::Exact(Arc::new(QOmega::from_rat(r))),
        }
    }

    pub fn from_int(n: i64) -> Measurable {
        Measurable::from_rational(Rat::int(n))
    }

    pub fn zero() -> Measurable {
        Measurable::from_int(0)
    }

    pub fn one() -> Measurable {
        Measurable::from_int(1)
    }

    pub fn from_qomega(f: QOmega) -> Result<Measurable> {
        if !f.is_finite() {
            return Err(Error::InfinitelyLargeInput);
        }
        Ok(Measurable {
            repr: Repr::Exact(Arc::new(f)),
        })
    }

    /// Wrap a raw oracle. The caller vouches for the contract `|S − p(q)/q| ≤ 1/q`
    /// and for determinism (same `p` for the same `q`).
    pub fn from_oracle<F>(label: impl Into<String>, approx: F) -> Measurable
    where
        F: Fn(&BigInt) -> BigInt + Send + Sync + 'static,
    {
        Measurable {
            repr: Repr::Oracle(Arc::new(OracleCell {
                label: label.into(),
                approx: Box::new(approx),
                cache: Mutex::new(HashMap::new()),
            })),
        }
    }

    pub fn as_exact(&self) -> Option<&QOmega> {
        match &self.repr {
            Repr::Exact(f) => Some(f),
            Repr::Oracle(_) => None,
        }
    }

    /// The same value behind an opaque oracle, answering with the floor view.
    pub fn to_oracle(&self) -> Measurable {
        match &self.repr {
            Repr::Oracle(_) => self.clone(),
            Repr::Exact(f) => {
                let f = Arc::clone(f);
                Measurable::from_oracle(format!("oracle({f})"), move |q| {
                    f.measuring_fraction(q).expect("exact values are finite")
                })
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        self.as_exact().is_some()
    }

    pub fn label(&self) -> String {
        match &self.repr {
            Repr::Exact(f) => f.to_string(),
            Repr::Oracle(cell) => cell.label.clone(),
        }
    }

    /// Measuring numerator at scale `q ≥ 1`.
    pub fn approx(&self, q: &BigInt) -> BigInt {
        assert!(q.is_positive(), "scale must be positive");
        match &self.repr {
            Repr::Exact(f) => f.measuring_fraction(q).expect("exact values are finite"),
            Repr::Oracle(cell) => cell.query(q),
        }
    }

    pub fn approx_at(&self, q: u64) -> BigInt {
        self.approx(&BigInt::from(q))
    }

    /// `p(q)/q`.
    pub fn approx_rat(&self, q: &BigInt) -> Rat {
        Rat::new(self.approx(q), q.clone()).expect("positive scale")
    }

    fn exact_pair<'a>(&'a self, other: &'a Measurable) -> Option<(&'a QOmega, &'a QOmega)> {
        Some((self.as_exact()?, other.as_exact()?))
    }

    pub fn add(&self, other: &Measurable) -> Measurable {
        if let Some((a, b)) = self.exact_pair(other) {
            return Measurable::exact_unchecked(a.add(b));
        }
        let (a, b) = (self.clone(), other.clone());
        let label = format!("({} + {})", a.label(), b.label());
        Measurable::from_oracle(label, move |q| {
            let m: BigInt = q * 4;
            let sum = a.approx(&m) + b.approx(&m);
            Rat::new(sum, 4).expect("nonzero").round_nearest()
        })
    }

    pub fn neg(&self) -> Measurable {
        if let Some(a) = self.as_exact() {
            return Measurable::exact_unchecked(a.neg());
        }
        let a = self.clone();
        let label = format!("-{}", a.label());
        Measurable::from_oracle(label, move |q| -a.approx(q))
    }

    pub fn sub(&self, other: &Measurable) -> Measurable {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Measurable) -> Measurable {
        if let Some((a, b)) = self.exact_pair(other) {
            return Measurable::exact_unchecked(a.mul(b));
        }
        let (a, b) = (self.clone(), other.clone());
        let bound_a = a.approx_at(1).abs() + 2;
        let bound_b = b.approx_at(1).abs() + 2;
        let factor: BigInt = (bound_a + bound_b + 1) * 2;
        let label = format!("({} * {})", a.label(), b.label());
        Measurable::from_oracle(label, move |q| {
            let m: BigInt = q * &factor;
            let prod = a.approx(&m) * b.approx(&m) * q;
            Rat::new(prod, &m * &m).expect("positive scale").round_nearest()
        })
    }

    /// Multiplication by an exact rational.
    pub fn scale(&self, r: &Rat) -> Measurable {
        if let Some(a) = self.as_exact() {
            return Measurable::exact_unchecked(a.scale(r));
        }
        if r.is_zero() {
            return Measurable::zero();
        }
        let a = self.clone();
        let r = r.clone();
        let factor: BigInt = r.abs().ceil().max(BigInt::one()) * 2;
        let label = format!("({} * {})", r, a.label());
        Measurable::from_oracle(label, move |q| {
            let m: BigInt = q * &factor;
            let x = r.mul_int(&(a.approx(&m) * q));
            x.checked_div(&Rat::int(m)).expect("positive scale").round_nearest()
        })
    }

    /// First scale `q = 2^k ≤ 2^depth` with `|p(q)| ≥ 2`.
    fn apartness_witness(&self, depth: u32) -> Option<(BigInt, BigInt)> {
        (0..=depth).map(pow2).find_map(|q| {
            let p = self.approx(&q);
            (p.abs() >= BigInt::from(2)).then_some((q, p))
        })
    }

    /// Reciprocal of a value certified apart from zero within `depth` doublings.
    pub fn recip(&self, depth: u32) -> Result<Measurable> {
        if let Some(a) = self.as_exact() {
            if a.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let inv = a.recip()?;
            return Measurable::from_qomega(inv).map_err(|_| Error::InfinitelyLargeResult);
        }
        let (q0, p0) = self.apartness_witness(depth).ok_or(Error::NotApartFromZero(depth))?;
        // |A| ≥ lower = (|p0| − 1)/q0 ≥ 1/q0
        let lower = Rat::new(p0.abs() - 1, q0).expect("positive scale");
        let a = self.clone();
        let near = ceil_div(&(lower.denom() * 2), lower.numer());
        let lsq = &lower * &lower;
        let far = ceil_div(lsq.denom(), lsq.numer());
        let label = format!("1/{}", a.label());
        Ok(Measurable::from_oracle(label, move |q| {
            let m = near.clone().max(q * 4 * &far);
            let pm = a.approx(&m);
            Rat::new(q * &m, pm).expect("bounded away from zero").round_nearest()
        }))
    }

    pub fn div(&self, other: &Measurable, depth: u32) -> Result<Measurable> {
        Ok(self.mul(&other.recip(depth)?))
    }

    /// Semi-decision of the sign, probing `q = 1, 2, 4, …, 2^depth`.
    pub fn sign_search(&self, depth: u32) -> SignResult {
        if let Some(a) = self.as_exact() {
            return match a.sign() {
                Sign::Positive => SignResult::Positive(Witness::Exact),
                Sign::Negative => SignResult::Negative(Witness::Exact),
                Sign::Zero => SignResult::Undetermined(Rat::zero()),
            };
        }
        match self.apartness_witness(depth) {
            Some((q, p)) if p.is_positive() => SignResult::Positive(Witness::Scale(q)),
            Some((q, _)) => SignResult::Negative(Witness::Scale(q)),
            None => SignResult::Undetermined(probe_bound(depth)),
        }
    }

    pub fn compare(&self, other: &Measurable, depth: u32) -> Comparison {
        match other.sub(self).sign_search(depth) {
            SignResult::Positive(w) => Comparison::Less(w),
            SignResult::Negative(w) => Comparison::Greater(w),
            SignResult::Undetermined(b) => Comparison::EqualWithin(b),
        }
    }

    /// Difference certified below `2/2^depth`; exact pairs decided exactly.
    pub fn new_equal_within(&self, other: &Measurable, depth: u32) -> bool {
        if let Some((a, b)) = self.exact_pair(other) {
            return a.new_equal(b).expect("exact values are finite");
        }
        let d = self.sub(other);
        (0..=depth).all(|k| d.approx(&pow2(k)).abs() <= BigInt::one())
    }

    pub fn abs(&self) -> Measurable {
        if let Some(a) = self.as_exact() {
            return Measurable::exact_unchecked(a.abs());
        }
        let a = self.clone();
        let label = format!("|{}|", a.label());
        Measurable::from_oracle(label, move |q| a.approx(q).abs())
    }

    pub fn max(&self, other: &Measurable) -> Measurable {
        if let Some((a, b)) = self.exact_pair(other) {
            return Measurable::exact_unchecked(a.clone().max(b.clone()));
        }
        let (a, b) = (self.clone(), other.clone());
        let label = format!("max({}, {})", a.label(), b.label());
        Measurable::from_oracle(label, move |q| a.approx(q).max(b.approx(q)))
    }

    pub fn min(&self, other: &Measurable) -> Measurable {
        if let Some((a, b)) = self.exact_pair(other) {
            return Measurable::exact_unchecked(a.clone().min(b.clone()));
        }
        let (a, b) = (self.clone(), other.clone());
        let label = format!("min({}, {})", a.label(), b.label());
        Measurable::from_oracle(label, move |q| a.approx(q).min(b.approx(q)))
    }

    /// Square root of a value not certified negative.
    pub fn sqrt(&self, depth: u32) -> Result<Measurable> {
        if let SignResult::Negative(_) = self.sign_search(depth) {
            return Err(Error::NegativeInput);
        }
        if let Some(r) = self.as_exact().and_then(QOmega::as_rat) {
            let (sn, rn) = isqrt_rem(r.numer());
            let (sd, rd) = isqrt_rem(r.denom());
            if rn.is_zero() && rd.is_zero() {
                return Ok(Measurable::from_rational(Rat::new(sn, sd)?));
            }
        }
        let a = self.clone();
        let label = format!("sqrt({})", a.label());
        Ok(Measurable::from_oracle(label, move |q| {
            // a = p_A(4q²)/(4q²); nearest integer to q·√a = √(p_A)/2
            let m: BigInt = q * q * 4;
            let pa = a.approx(&m).max(BigInt::zero());
            let (s, _) = isqrt_rem(&pa);
            Integer::div_floor(&(s + 1), &BigInt::from(2))
        }))
    }

    /// `(A + C)/2`.
    pub fn between(&self, other: &Measurable) -> Measurable {
        self.add(other).scale(&Rat::frac(1, 2))
    }

    /// Some `n` with `A/n < B < n·A`, both comparisons certified.
    pub fn archimedean_witness(&self, other: &Measurable, depth: u32) -> Result<BigInt> {
        let no_witness = Error::NoWitnessWithinDepth(depth);
        if let Some((a, b)) = self.exact_pair(other) {
            if a.sign() != Sign::Positive || b.sign() != Sign::Positive {
                return Err(no_witness);
            }
            let ratio = a.div(b)?.max(b.div(a)?);
            let n = ratio.measuring_fraction(&BigInt::one()).map_err(|_| no_witness)? + 1;
            return Ok(n);
        }
        let (la, ua) = self.positive_bounds(depth).ok_or(no_witness.clone())?;
        let (lb, ub) = other.positive_bounds(depth).ok_or(no_witness.clone())?;
        let x = ua.checked_div(&lb)?.max(ub.checked_div(&la)?);
        let mut n: BigInt = x.ceil() + 1;
        for _ in 0..16 {
            let small = self.scale(&Rat::new(1, n.clone())?);
            let large = self.scale(&Rat::int(n.clone()));
            if small.compare(other, depth).is_less() && other.compare(&large, depth).is_less() {
                return Ok(n);
            }
            n *= 2;
        }
        Err(no_witness)
    }

    /// Certified `0 < lower ≤ S ≤ upper`.
    fn positive_bounds(&self, depth: u32) -> Option<(Rat, Rat)> {
        if let Some(a) = self.as_exact() {
            if a.sign() != Sign::Positive {
                return None;
            }
            if let Some(r) = a.as_rat() {
                return Some((r.clone(), r));
            }
            let s = a.std_part().ok()?;
            if !s.is_positive() {
                return None;
            }
            return Some((&s * Rat::frac(1, 2), &s * Rat::int(2)));
        }
        match self.sign_search(depth) {
            SignResult::Positive(Witness::Scale(q0)) => {
                let p0 = self.approx(&q0);
                let lower = Rat::new(p0 - 1, q0).ok()?;
                let upper = Rat::int(self.approx_at(1).abs() + 1);
                Some((lower, upper))
            }
            _ => None,
        }
    }

    /// The generalised measurement `p/q ≤ A ≤ (p+n)/q`, certified from one query at `4q`.
    pub fn check_window(&self, n: u32, qs: &[BigInt]) -> Vec<(BigInt, WindowCheck)> {
        let n = BigInt::from(n);
        qs.iter()
            .map(|q| {
                let m: BigInt = q * 4;
                let a = self.approx_rat(&m);
                let slack = Rat::new(1, m.clone()).expect("positive");
                let hi = &a + &slack;
                let lo = &a - &slack;
                let p = (hi.mul_int(q)).ceil() - &n;
                let ok = Rat::new(p.clone(), q.clone()).expect("positive") <= lo
                    && Rat::new(&p + &n, q.clone()).expect("positive") >= hi;
                let verdict = if ok {
                    WindowCheck::CertifiedWith(p)
                } else {
                    WindowCheck::NoCertificate
                };
                (q.clone(), verdict)
            })
            .collect()
    }

    /// First pair `(q, q′)` with `|p(q)/q − p(q′)/q′| > 1/q + 1/q′`, if any.
    pub fn consistency_violation(&self, qs: &[BigInt]) -> Option<(BigInt, BigInt)> {
        let ps: Vec<BigInt> = qs.iter().map(|q| self.approx(q)).collect();
        for i in 0..qs.len() {
            for j in i + 1..qs.len() {
                let (q, qq) = (&qs[i], &qs[j]);
                let lhs = (&ps[i] * qq - &ps[j] * q).abs();
                if lhs > q + qq {
                    return Some((q.clone(), qq.clone()));
                }
            }
        }
        None
    }

    /// Does `|S − p(q)/q| ≤ 1/q` hold for the given exact `S` (in the ω-order)?
    pub fn contract_holds_for(&self, s: &QOmega, q: &BigInt) -> bool {
        let pq = QOmega::from_rat(self.approx_rat(q));
        let tol = QOmega::from_rat(Rat::new(1, q.clone()).expect("positive"));
        s.sub(&pq).abs() <= tol
    }

    fn exact_unchecked(f: QOmega) -> Measurable {
        debug_assert!(f.is_finite());
        Measurable {
            repr: Repr::Exact(Arc::new(f)),
        }
    }
}

impl fmt::Debug for Measurable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact(v) => write!(f, "Exact({v})"),
            Repr::Oracle(c) => write!(f, "Oracle({})", c.label),
        }
    }
}

impl From<Rat> for Measurable {
    fn from(r: Rat) -> Measurable {
        Measurable::from_rational(r)
    }
}

#[cfg(test)]
mod tests;
