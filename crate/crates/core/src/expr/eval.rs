//! Structural evaluation with certification rules.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive};

use super::ast::Expr;
use super::shape::{shape_of, sign_settles, TermShape};
use crate::error::Error;
use crate::measurable::{CertifiedSeries, Measurable, SignResult, TermFn};
use crate::omega::QOmega;
use crate::poly::Poly;
use crate::rational::Rat;

/// How the partial computations sit relative to the value, eventually.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialSide {
    /// Partials equal the value.
    Settled,
    /// Partials strictly below the value.
    Below,
    /// Partials at or above the value.
    Above,
    /// Partials strictly on alternating sides of the value.
    Alternating,
    Unknown,
}

impl PartialSide {
    fn flip(self) -> PartialSide {
        match self {
            PartialSide::Below => PartialSide::Above,
            PartialSide::Above => PartialSide::Below,
            other => other,
        }
    }
}

/// `bound(n) ≥ |partial(e, n) − value|` for `n ≥ 1`, nonincreasing, tending to 0.
#[derive(Clone)]
pub struct Tail {
    pub bound: TermFn,
    pub side: PartialSide,
}

impl Tail {
    fn zero() -> Tail {
        Tail {
            bound: Arc::new(|_| Rat::zero()),
            side: PartialSide::Settled,
        }
    }
}

/// A measurable value together with the rules that certified it.
#[derive(Clone)]
pub struct Certified {
    pub value: Measurable,
    pub rules: Vec<&'static str>,
    pub tail: Option<Tail>,
}

impl Certified {
    fn settled_rational(&self) -> Option<Rat> {
        match &self.tail {
            Some(t) if t.side == PartialSide::Settled => self.value.as_exact()?.as_rat(),
            _ => None,
        }
    }
}

impl fmt::Debug for Certified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Certified")
            .field("value", &self.value)
            .field("rules", &self.rules)
            .field("tail", &self.tail.as_ref().map(|t| t.side))
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum Classification {
    MeasurableValue(Certified),
    /// Carries the rule that established divergence.
    InfinitelyLargeValue(&'static str),
    Unknown(String),
}

impl Classification {
    pub fn measurable(&self) -> Option<&Measurable> {
        match self {
            Classification::MeasurableValue(c) => Some(&c.value),
            _ => None,
        }
    }
}

const MAX_PREFIX: u64 = 100_000;
const MAX_EXACT_EXPONENT: i64 = 10_000;
const MAX_ORACLE_EXPONENT: i64 = 64;

enum Val {
    Fin(Certified),
    Inf(&'static str),
}

type Eval = std::result::Result<Val, String>;

pub fn eval(e: &Expr, depth: u32) -> Classification {
    match eval_val(e, depth, &e.to_string()) {
        Ok(Val::Fin(c)) => Classification::MeasurableValue(c),
        Ok(Val::Inf(rule)) => Classification::InfinitelyLargeValue(rule),
        Err(reason) => Classification::Unknown(reason),
    }
}

fn exact(e: &Expr) -> std::result::Result<QOmega, String> {
    Ok(match e {
        Expr::Lit(r) => QOmega::from_rat(r.clone()),
        Expr::Omega => QOmega::omega(),
        Expr::Index => return Err("index variable outside a series or product".into()),
        Expr::Add(a, b) => exact(a)?.add(&exact(b)?),
        Expr::Sub(a, b) => exact(a)?.sub(&exact(b)?),
        Expr::Mul(a, b) => exact(a)?.mul(&exact(b)?),
        Expr::Div(a, b) => exact(a)?
            .div(&exact(b)?)
            .map_err(|_| "division by zero".to_string())?,
        Expr::Neg(a) => exact(a)?.neg(),
        Expr::Pow(a, b) => {
            let k = exact_integer(b)?;
            if k.abs() > MAX_EXACT_EXPONENT {
                return Err(format!("exponent {k} too large"));
            }
            exact(a)?.pow(k).map_err(|_| "division by zero".to_string())?
        }
        Expr::Series { .. } | Expr::Product { .. } | Expr::Sqrt(_) => {
            unreachable!("caller checks for finite form")
        }
    })
}

fn exact_integer(e: &Expr) -> std::result::Result<i64, String> {
    if !e.is_finite_form() {
        return Err("exponent must be an integer".into());
    }
    exact(e)?
        .as_rat()
        .filter(Rat::is_integer)
        .and_then(|r| r.numer().to_i64())
        .ok_or_else(|| "exponent must be an integer".to_string())
}

fn fin(value: Measurable, rules: Vec<&'static str>, tail: Option<Tail>) -> Val {
    Val::Fin(Certified { value, rules, tail })
}

fn merge(a: &[&'static str], b: &[&'static str]) -> Vec<&'static str> {
    let mut out = a.to_vec();
    for r in b {
        if !out.contains(r) {
            out.push(r);
        }
    }
    out
}

fn eval_val(e: &Expr, depth: u32, label: &str) -> Eval {
    if e.is_finite_form() {
        let v = exact(e)?;
        if !v.is_finite() {
            return Ok(Val::Inf("omega-field"));
        }
        let tail = (!e.uses_omega()).then(Tail::zero);
        let rule = if e.uses_omega() { "omega-field" } else { "exact rational" };
        return Ok(fin(Measurable::from_qomega(v).expect("finite"), vec![rule], tail));
    }
    match e {
        Expr::Series { term, start } => certify_series(term, *start, label),
        Expr::Product { term, start } => certify_product(term, *start),
        Expr::Sqrt(a) => match eval_val(a, depth, &a.to_string())? {
            Val::Inf(_) => Ok(Val::Inf("square root of an infinitely large value")),
            Val::Fin(c) => match c.value.sqrt(depth) {
                Ok(v) => Ok(fin(v, merge(&c.rules, &["sqrt"]), None)),
                Err(_) => Err("square root of a negative value".into()),
            },
        },
        Expr::Neg(a) => Ok(match eval_val(a, depth, &a.to_string())? {
            Val::Inf(r) => Val::Inf(r),
            Val::Fin(c) => {
                let tail = c.tail.map(|t| Tail {
                    bound: t.bound,
                    side: t.side.flip(),
                });
                fin(c.value.neg(), c.rules, tail)
            }
        }),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let negate = matches!(e, Expr::Sub(..));
            let x = eval_val(a, depth, &a.to_string())?;
            let y = eval_val(b, depth, &b.to_string())?;
            match (x, y) {
                (Val::Fin(x), Val::Fin(y)) => {
                    let value = if negate { x.value.sub(&y.value) } else { x.value.add(&y.value) };
                    let tail = match (&x.tail, &y.tail) {
                        (Some(tx), Some(ty)) => Some(add_tails(tx, ty, negate)),
                        _ => None,
                    };
                    Ok(fin(value, merge(&x.rules, &y.rules), tail))
                }
                (Val::Inf(_), Val::Inf(_)) => Err("sum of two infinitely large values".into()),
                (Val::Inf(r), _) | (_, Val::Inf(r)) => Ok(Val::Inf(r)),
            }
        }
        Expr::Mul(a, b) => {
            let x = eval_val(a, depth, &a.to_string())?;
            let y = eval_val(b, depth, &b.to_string())?;
            match (x, y) {
                (Val::Fin(x), Val::Fin(y)) => Ok(multiply(&x, &y)),
                (Val::Inf(r), Val::Inf(_)) => Ok(Val::Inf(r)),
                (Val::Inf(r), Val::Fin(c)) | (Val::Fin(c), Val::Inf(r)) => {
                    if apart(&c.value, depth) {
                        Ok(Val::Inf(r))
                    } else {
                        Err("infinitely large factor times a value not certified apart from zero".into())
                    }
                }
            }
        }
        Expr::Div(a, b) => {
            let x = eval_val(a, depth, &a.to_string())?;
            let y = eval_val(b, depth, &b.to_string())?;
            match (x, y) {
                (Val::Fin(x), Val::Fin(y)) => match x.value.div(&y.value, depth) {
                    Ok(v) => {
                        let tail = match (&x.tail, y.settled_rational()) {
                            (Some(t), Some(c)) => Some(scale_tail(t, &c.recip().expect("nonzero"))),
                            _ => None,
                        };
                        Ok(fin(v, merge(&x.rules, &y.rules), tail))
                    }
                    Err(Error::InfinitelyLargeResult) => Ok(Val::Inf("division by an infinitesimal")),
                    Err(Error::DivisionByZero) => Err("division by zero".into()),
                    Err(_) => Err(format!("divisor not certified apart from zero within depth {depth}")),
                },
                (Val::Inf(r), Val::Fin(c)) if apart(&c.value, depth) => Ok(Val::Inf(r)),
                (Val::Fin(_), Val::Inf(_)) => {
                    Err("quotient by an infinitely large value is infinitesimal, not certified".into())
                }
                _ => Err("quotient of infinitely large values".into()),
            }
        }
        Expr::Pow(a, b) => {
            let k = exact_integer(b)?;
            if k == 0 {
                return Ok(fin(Measurable::one(), vec!["exact rational"], Some(Tail::zero())));
            }
            if k.abs() > MAX_ORACLE_EXPONENT {
                return Err(format!("exponent {k} too large for an approximated base"));
            }
            match eval_val(a, depth, &a.to_string())? {
                Val::Inf(r) if k > 0 => Ok(Val::Inf(r)),
                Val::Inf(_) => Err("negative power of an infinitely large value".into()),
                Val::Fin(c) => {
                    let base = if k < 0 {
                        let v = c
                            .value
                            .recip(depth)
                            .map_err(|_| format!("base not certified apart from zero within depth {depth}"))?;
                        Certified { value: v, rules: c.rules.clone(), tail: None }
                    } else {
                        c
                    };
                    let mut acc = base.clone();
                    for _ in 1..k.abs() {
                        let Val::Fin(next) = multiply(&acc, &base) else { unreachable!() };
                        acc = next;
                    }
                    Ok(Val::Fin(acc))
                }
            }
        }
        Expr::Lit(_) | Expr::Index | Expr::Omega => unreachable!("finite form"),
    }
}

fn apart(m: &Measurable, depth: u32) -> bool {
    !matches!(m.sign_search(depth), SignResult::Undetermined(_))
}

fn add_tails(x: &Tail, y: &Tail, negate: bool) -> Tail {
    let (bx, by) = (x.bound.clone(), y.bound.clone());
    let ys = if negate { y.side.flip() } else { y.side };
    let side = match (x.side, ys) {
        (PartialSide::Settled, s) | (s, PartialSide::Settled) => s,
        (PartialSide::Below, PartialSide::Below) => PartialSide::Below,
        (PartialSide::Above, PartialSide::Above) => PartialSide::Above,
        _ => PartialSide::Unknown,
    };
    Tail {
        bound: Arc::new(move |n| bx(n) + by(n)),
        side,
    }
}

fn scale_tail(t: &Tail, c: &Rat) -> Tail {
    let b = t.bound.clone();
    let k = c.abs();
    let side = match c.signum() {
        0 => PartialSide::Settled,
        s if s > 0 => t.side,
        _ => t.side.flip(),
    };
    Tail {
        bound: Arc::new(move |n| &k * &b(n)),
        side,
    }
}

fn multiply(x: &Certified, y: &Certified) -> Val {
    let value = x.value.mul(&y.value);
    let rules = merge(&x.rules, &y.rules);
    let tail = match (&x.tail, &y.tail) {
        (Some(tx), Some(ty)) => Some(match (x.settled_rational(), y.settled_rational()) {
            (Some(c), _) => scale_tail(ty, &c),
            (_, Some(c)) => scale_tail(tx, &c),
            _ => {
                // |a_n b_n − AB| ≤ (|A| + τ_A)·τ_B + |B|·τ_A
                let ua = Rat::int(x.value.approx_at(1).abs() + 1);
                let ub = Rat::int(y.value.approx_at(1).abs() + 1);
                let (ba, bb) = (tx.bound.clone(), ty.bound.clone());
                Tail {
                    bound: Arc::new(move |n| {
                        let (ta, tb) = (ba(n), bb(n));
                        (&ua + &ta) * tb + &ub * &ta
                    }),
                    side: PartialSide::Unknown,
                }
            }
        }),
        _ => None,
    };
    fin(value, rules, tail)
}

fn recognised(term: &Expr, start: u64, what: &str) -> std::result::Result<TermShape, String> {
    if term.uses_omega() {
        return Err(format!("{what} term mentions omega"));
    }
    let shape = shape_of(term).ok_or_else(|| format!("{what} term shape not covered by any certification rule"))?;
    let settle = sign_settles(&shape.guard)
        .filter(|s| *s <= MAX_PREFIX)
        .ok_or_else(|| format!("{what} term denominators too large to check"))?;
    for k in start..settle.max(start) {
        if shape.guard.eval(&Rat::int(k)).is_zero() {
            return Err(format!("{what} term undefined at n = {k}"));
        }
    }
    Ok(shape)
}

fn settles(polys: &[&Poly], start: u64) -> std::result::Result<u64, String> {
    let mut n = start;
    for p in polys {
        n = n.max(sign_settles(p).ok_or("term polynomials too large to bound")?);
    }
    if n > MAX_PREFIX {
        return Err("term polynomials too large to bound".into());
    }
    Ok(n)
}

/// `Σ_{k=m}^{n-1} |t(k)| + |t(n)|·w` for `m < n`, else `|t(m)|·w`.
fn prefixed_tail(shape: Arc<TermShape>, start: u64, settle: u64, weight: Rat) -> TermFn {
    Arc::new(move |big_n| {
        let m = start + big_n;
        if m >= settle {
            shape.at(m).abs() * &weight
        } else {
            let head = (m..settle).fold(Rat::zero(), |acc, k| acc + shape.at(k).abs());
            head + shape.at(settle).abs() * &weight
        }
    })
}

fn certify_series(term: &Expr, start: u64, label: &str) -> Eval {
    let shape = recognised(term, start, "series")?;
    if shape.is_zero() {
        return Ok(fin(Measurable::zero(), vec!["zero terms"], Some(Tail::zero())));
    }
    let r = shape.ratio.clone();
    let abs_r = r.abs();
    let one = Rat::one();
    let sigma = shape.num.leading().signum();
    let (dp, dq) = (shape.num.degree().unwrap_or(0), shape.den.degree().unwrap_or(0));

    if let (Some(k), true) = (shape.rational_constant(), abs_r < one) {
        let s = start as i64;
        let value = &k * &r.pow(s).expect("nonzero") * (&one - &r).recip().expect("ratio below one");
        let factor = (&k * (&one - &r).recip().expect("ratio below one")).abs();
        let (rr, f) = (r.clone(), factor);
        let bound: TermFn = Arc::new(move |n| &f * &rr.pow(s + n as i64).expect("nonzero").abs());
        let side = if r.is_negative() {
            PartialSide::Alternating
        } else if k.is_positive() {
            PartialSide::Below
        } else {
            PartialSide::Above
        };
        return Ok(fin(Measurable::from_rational(value), vec!["geometric"], Some(Tail { bound, side })));
    }

    let next = |p: &Poly| p.shift_one();
    let shape = Arc::new(shape);
    let term_fn: TermFn = {
        let s = shape.clone();
        Arc::new(move |k| s.at(k))
    };

    if abs_r < one {
        // |t(n+1)| ≤ c·|t(n)| once σ(c·P(n)Q(n+1) − |R|·P(n+1)Q(n)) ≥ 0
        let c = (&one + &abs_r) * Rat::frac(1, 2);
        let h = shape
            .num
            .mul(&next(&shape.den))
            .scale(&c)
            .sub(&next(&shape.num).mul(&shape.den).scale(&abs_r));
        let settle = settles(&[&shape.num, &shape.den, &h], start)?;
        let weight = (&one - &c).recip().expect("c below one");
        let bound = prefixed_tail(shape.clone(), start, settle, weight);
        let side = if r.is_negative() {
            PartialSide::Alternating
        } else if sigma > 0 {
            PartialSide::Below
        } else {
            PartialSide::Above
        };
        let series = CertifiedSeries::new(start, term_fn, bound.clone());
        return Ok(fin(series.to_measurable(label), vec!["ratio bound"], Some(Tail { bound, side })));
    }

    if r == -one.clone() && dp < dq {
        // |P/Q| strictly decreasing once σ(P(n)Q(n+1) − P(n+1)Q(n)) > 0
        let g = shape.num.mul(&next(&shape.den)).sub(&next(&shape.num).mul(&shape.den));
        let settle = settles(&[&shape.num, &shape.den, &g], start)?;
        let bound = prefixed_tail(shape.clone(), start, settle, one);
        let series = CertifiedSeries::new(start, term_fn, bound.clone());
        let tail = Tail {
            bound,
            side: PartialSide::Alternating,
        };
        return Ok(fin(series.to_measurable(label), vec!["leibniz"], Some(tail)));
    }

    if r.is_positive() {
        if r > one || dp >= dq {
            return Ok(Val::Inf("terms of constant sign bounded away from zero"));
        }
        return Err("terms tend to zero but no certification rule applies".into());
    }
    Err("oscillating terms do not tend to zero".into())
}

fn certify_product(term: &Expr, start: u64) -> Eval {
    let shape = recognised(term, start, "product")?;
    let k = shape
        .rational_constant()
        .ok_or("only geometric-shape products are certified")?;
    let r = shape.ratio;
    let one = Rat::one();
    let (ak, ar) = (k.abs(), r.abs());
    let rule = "geometric product";
    if ar < one || (ar == one && ak < one) {
        return Ok(fin(Measurable::zero(), vec![rule], None));
    }
    if k == one && r == one {
        return Ok(fin(Measurable::one(), vec![rule], Some(Tail::zero())));
    }
    if (ar > one || ak > one) && k.is_positive() && r.is_positive() {
        return Ok(Val::Inf("factors grow without bound"));
    }
    Err("product oscillates".into())
}
