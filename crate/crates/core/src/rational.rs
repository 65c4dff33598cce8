//! Exact rationals and the integer rounding primitives used by every oracle.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational number, always stored in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rat> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(num.into(), den)))
    }

    /// Convenience constructor for small literals. Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Rat {
        Rat::new(num, den).expect("zero denominator")
    }

    pub fn int(n: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Rat> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &rhs.0))
    }

    pub fn arith(&self, rhs: &Rat, op: ArithOp) -> Result<Rat> {
        Ok(match op {
            ArithOp::Add => self + rhs,
            ArithOp::Sub => self - rhs,
            ArithOp::Mul => self * rhs,
            ArithOp::Div => self.checked_div(rhs)?,
        })
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Result<Rat> {
        if exp < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e = exp.unsigned_abs();
        let num = num_traits::pow::Pow::pow(self.numer(), e);
        let den = num_traits::pow::Pow::pow(self.denom(), e);
        if exp < 0 {
            Rat::new(den, num)
        } else {
            Rat::new(num, den)
        }
    }

    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.numer()).div_floor(self.denom()))
    }

    /// The measuring numerator at scale `q`: the unique `p` with `p ≤ self·q < p + 1`.
    pub fn floor_scaled(&self, q: &BigInt) -> BigInt {
        debug_assert!(q.is_positive());
        (self.numer() * q).div_floor(self.denom())
    }

    /// Nearest integer, ties away from zero.
    pub fn round_nearest(&self) -> BigInt {
        let two_den: BigInt = self.denom() * 2;
        let twice: BigInt = self.numer().abs() * 2 + self.denom();
        let mag = twice.div_floor(&two_den);
        if self.is_negative() {
            -mag
        } else {
            mag
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Rat {
        Rat(&self.0 * BigRational::from_integer(k.clone()))
    }

    pub fn min(self, other: Rat) -> Rat {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Rat) -> Rat {
        std::cmp::max(self, other)
    }

    /// Lossy conversion, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Integer square root with remainder: `(s, r)` with `s² + r = n`, `0 ≤ r ≤ 2s`.
pub fn isqrt_rem(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_negative(), "isqrt of negative integer");
    let s = n.sqrt();
    let r = n - &s * &s;
    (s, r)
}

/// Smallest integer `≥ a / b` for positive `b`.
pub fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat::int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat($tr::$m(self.0, rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat($tr::$m(self.0, &rhs.0))
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat($tr::$m(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal: {0}")]
pub struct ParseRatError(String);

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> std::result::Result<Rat, ParseRatError> {
        let bad = || ParseRatError(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rat::new(n, d).map_err(|_| bad())
            }
            None => s.parse::<BigInt>().map(Rat::int).map_err(|_| bad()),
        }
    }
}
