//! Recognised term shapes `t(n) = R^n · P(n) / Q(n)` with `P`, `Q` polynomials
//! over the rationals and `Q` monic.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::ast::Expr;
use crate::poly::Poly;
use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermShape {
    pub ratio: Rat,
    pub num: Poly,
    pub den: Poly,
    /// Product of every divisor met while building the shape. The unreduced
    /// term is undefined exactly where this vanishes.
    pub guard: Poly,
}

const MAX_SHAPE_EXPONENT: i64 = 64;

impl TermShape {
    fn rational(num: Poly, den: Poly, ratio: Rat, guard: Poly) -> TermShape {
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading();
        let scale = lead.recip().expect("nonzero denominator");
        TermShape {
            ratio,
            num: num.scale(&scale),
            den: den.scale(&scale),
            guard,
        }
    }

    fn constant(c: Rat) -> TermShape {
        TermShape {
            ratio: Rat::one(),
            num: Poly::constant(c),
            den: Poly::one(),
            guard: Poly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `P/Q` is a constant.
    pub fn rational_constant(&self) -> Option<Rat> {
        let c = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        c.checked_div(&d).ok()
    }

    pub fn at(&self, k: u64) -> Rat {
        let x = Rat::int(k);
        let base = self.ratio.pow(k as i64).expect("nonzero ratio");
        let q = self.den.eval(&x);
        base * self.num.eval(&x).checked_div(&q).expect("denominator checked nonzero")
    }

    fn add(&self, other: &TermShape, negate: bool) -> Option<TermShape> {
        let other = if negate { other.neg() } else { other.clone() };
        if other.is_zero() {
            return Some(TermShape { guard: self.guard.mul(&other.guard), ..self.clone() });
        }
        if self.is_zero() {
            return Some(TermShape { guard: self.guard.mul(&other.guard), ..other });
        }
        if self.ratio != other.ratio {
            return None;
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Some(TermShape::rational(
            num,
            self.den.mul(&other.den),
            self.ratio.clone(),
            self.guard.mul(&other.guard),
        ))
    }

    fn neg(&self) -> TermShape {
        TermShape {
            num: self.num.neg(),
            ..self.clone()
        }
    }

    fn mul(&self, other: &TermShape) -> TermShape {
        TermShape::rational(
            self.num.mul(&other.num),
            self.den.mul(&other.den),
            &self.ratio * &other.ratio,
            self.guard.mul(&other.guard),
        )
    }

    fn div(&self, other: &TermShape) -> Option<TermShape> {
        if other.is_zero() {
            return None;
        }
        Some(TermShape::rational(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
            self.ratio.checked_div(&other.ratio).ok()?,
            self.guard.mul(&other.guard).mul(&other.num),
        ))
    }

    fn powi(&self, k: i64) -> Option<TermShape> {
        if k.abs() > MAX_SHAPE_EXPONENT {
            return None;
        }
        let e = k.unsigned_abs() as u32;
        let (num, den, guard) = if k >= 0 {
            (self.num.pow(e), self.den.pow(e), self.guard.clone())
        } else {
            if self.is_zero() {
                return None;
            }
            (self.den.pow(e), self.num.pow(e), self.guard.mul(&self.num))
        };
        Some(TermShape::rational(num, den, self.ratio.pow(k).ok()?, guard))
    }
}

/// Shape of a term in the index variable, or `None` when the term falls outside
/// the recognised family.
pub fn shape_of(e: &Expr) -> Option<TermShape> {
    match e {
        Expr::Lit(r) => Some(TermShape::constant(r.clone())),
        Expr::Index => Some(TermShape {
            ratio: Rat::one(),
            num: Poly::x(),
            den: Poly::one(),
            guard: Poly::one(),
        }),
        Expr::Neg(a) => Some(shape_of(a)?.neg()),
        Expr::Add(a, b) => shape_of(a)?.add(&shape_of(b)?, false),
        Expr::Sub(a, b) => shape_of(a)?.add(&shape_of(b)?, true),
        Expr::Mul(a, b) => Some(shape_of(a)?.mul(&shape_of(b)?)),
        Expr::Div(a, b) => shape_of(a)?.div(&shape_of(b)?),
        Expr::Pow(base, exp) => {
            let base = shape_of(base)?;
            let exp = shape_of(exp)?;
            if exp.ratio != Rat::one() || !exp.den.as_constant().is_some_and(|d| d == Rat::one()) {
                return None;
            }
            match exp.num.degree() {
                None => Some(TermShape::constant(Rat::one())),
                Some(0) => base.powi(integer(&exp.num.coeff(0))?),
                Some(1) => {
                    // c^(a n + b) = (c^a)^n · c^b, only for constant nonzero bases
                    let a = integer(&exp.num.coeff(1))?;
                    let b = integer(&exp.num.coeff(0))?;
                    let c = base.rational_constant().filter(|c| !c.is_zero())?;
                    if base.ratio != Rat::one() || a.abs() > MAX_SHAPE_EXPONENT || b.abs() > MAX_SHAPE_EXPONENT {
                        return None;
                    }
                    Some(TermShape {
                        ratio: c.pow(a).ok()?,
                        num: Poly::constant(c.pow(b).ok()?),
                        den: Poly::one(),
                        guard: base.guard,
                    })
                }
                Some(_) => None,
            }
        }
        Expr::Omega | Expr::Series { .. } | Expr::Product { .. } | Expr::Sqrt(_) => None,
    }
}

fn integer(r: &Rat) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// One past the largest positive integer root of `p` (0 when there is none
/// beyond the Cauchy bound); `p(k) ≠ 0` and has the sign of its leading
/// coefficient for all `k` at or above the returned index.
pub fn sign_settles(p: &Poly) -> Option<u64> {
    let b: BigInt = p.root_bound();
    if b.is_zero() {
        Some(0)
    } else {
        (b + BigInt::one()).to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn shape(src: &str) -> TermShape {
        let Expr::Series { term, .. } = parse(&format!("series(n, {src})")).unwrap() else {
            unreachable!()
        };
        shape_of(&term).expect("recognised")
    }

    #[test]
    fn alternating_geometric() {
        let s = shape("(-1)^(n+1) * (1/2)^n");
        assert_eq!(s.ratio, Rat::frac(-1, 2));
        assert_eq!(s.rational_constant(), Some(Rat::int(-1)));
        assert_eq!(s.at(1), Rat::frac(1, 2));
        assert_eq!(s.at(2), Rat::frac(-1, 4));
    }

    #[test]
    fn rational_function_reduces() {
        let s = shape("(n*n - 1)/(2*n + 2)");
        assert_eq!(s.num, Poly::new(vec![Rat::frac(-1, 2), Rat::frac(1, 2)]));
        assert_eq!(s.den, Poly::one());
        assert_eq!(s.guard, Poly::new(vec![Rat::int(2), Rat::int(2)]));
    }

    #[test]
    fn unsupported_shapes() {
        let t = |src: &str| {
            let Expr::Series { term, .. } = parse(&format!("series(n, {src})")).unwrap() else {
                unreachable!()
            };
            shape_of(&term)
        };
        assert!(t("n^n").is_none());
        assert!(t("2^(n*n)").is_none());
        assert!(t("(1/2)^n + (1/3)^n").is_none());
        assert!(t("omega").is_none());
        assert!(t("1/(n-n)").is_none());
    }
}
