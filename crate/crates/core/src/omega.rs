//! Rational functions in ω: an ordered non-Archimedean field containing the
//! infinitely large ω and the infinitely small ε = 1/ω.
//!
//! The order is the one obtained by letting ω exceed every rational: an element
//! is positive iff the leading coefficients of numerator and denominator agree
//! in sign. Two notions of equality live here. `old_equal` asks that two values
//! produce the same measuring fraction at every scale; `new_equal` only asks
//! that their difference be zero or infinitesimal.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Magnitude {
    Zero,
    InfinitelyLarge,
    Infinitesimal,
    FiniteNonInfinitesimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_int(s: i32) -> Sign {
        match s.cmp(&0) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }
}

/// `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QOmega {
    num: Poly,
    den: Poly,
}

impl QOmega {
    pub fn new(num: Poly, den: Poly) -> Result<QOmega> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(QOmega::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().recip()?;
        Ok(QOmega {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn zero() -> QOmega {
        QOmega {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> QOmega {
        QOmega::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> QOmega {
        QOmega {
            num: Poly::constant(r),
            den: Poly::one(),
        }
    }

    /// ω, the infinitely large `1 + 1 + 1 + …`.
    pub fn omega() -> QOmega {
        QOmega {
            num: Poly::x(),
            den: Poly::one(),
        }
    }

    /// ε = 1/ω.
    pub fn epsilon() -> QOmega {
        QOmega {
            num: Poly::one(),
            den: Poly::x(),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(r)` when the value is a plain rational.
    pub fn as_rat(&self) -> Option<Rat> {
        match (self.num.as_constant(), self.den.degree()) {
            (Some(c), Some(0)) => Some(c),
            _ => None,
        }
    }

    pub fn add(&self, g: &QOmega) -> QOmega {
        let num = self.num.mul(&g.den).add(&g.num.mul(&self.den));
        QOmega::new(num, self.den.mul(&g.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, g: &QOmega) -> QOmega {
        self.add(&g.neg())
    }

    pub fn neg(&self) -> QOmega {
        QOmega {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, g: &QOmega) -> QOmega {
        QOmega::new(self.num.mul(&g.num), self.den.mul(&g.den)).expect("nonzero denominators")
    }

    pub fn recip(&self) -> Result<QOmega> {
        QOmega::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, g: &QOmega) -> Result<QOmega> {
        Ok(self.mul(&g.recip()?))
    }

    pub fn scale(&self, r: &Rat) -> QOmega {
        QOmega::new(self.num.scale(r), self.den.clone()).expect("nonzero denominator")
    }

    pub fn pow(&self, e: i64) -> Result<QOmega> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = u32::try_from(e.unsigned_abs()).map_err(|_| Error::InfinitelyLargeResult)?;
        QOmega::new(base.num.pow(e), base.den.pow(e))
    }

    pub fn classify(&self) -> Magnitude {
        let Some(dn) = self.num.degree() else {
            return Magnitude::Zero;
        };
        let dd = self.den.degree().expect("nonzero denominator");
        match dn.cmp(&dd) {
            Ordering::Greater => Magnitude::InfinitelyLarge,
            Ordering::Less => Magnitude::Infinitesimal,
            Ordering::Equal => Magnitude::FiniteNonInfinitesimal,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.classify() != Magnitude::InfinitelyLarge
    }

    pub fn sign(&self) -> Sign {
        // den is monic, so the sign is that of the numerator's leading coefficient.
        Sign::of_int(self.num.leading().signum())
    }

    pub fn abs(&self) -> QOmega {
        if self.sign() == Sign::Negative {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// The rational at infinitesimal distance from a finite value.
    pub fn std_part(&self) -> Result<Rat> {
        match self.classify() {
            Magnitude::InfinitelyLarge => Err(Error::InfinitelyLargeInput),
            Magnitude::Zero | Magnitude::Infinitesimal => Ok(Rat::zero()),
            Magnitude::FiniteNonInfinitesimal => Ok(self.num.leading()),
        }
    }

    /// The `p` with `p ≤ q·f < p + 1` in the ω-order.
    pub fn measuring_fraction(&self, q: &BigInt) -> Result<BigInt> {
        let r = self.std_part()?;
        let qr = r.mul_int(q);
        if !qr.is_integer() {
            return Ok(r.floor_scaled(q));
        }
        let p = qr.floor();
        let rest = self.sub(&QOmega::from_rat(r));
        Ok(if rest.sign() == Sign::Negative {
            p - BigInt::one()
        } else {
            p
        })
    }

    /// Same measuring behaviour at every scale.
    pub fn old_equal(&self, g: &QOmega) -> Result<bool> {
        let (rf, rg) = (self.std_part()?, g.std_part()?);
        if rf != rg {
            return Ok(false);
        }
        let below = |x: &QOmega, r: &Rat| x.sub(&QOmega::from_rat(r.clone())).sign() == Sign::Negative;
        Ok(below(self, &rf) == below(g, &rg))
    }

    /// Difference zero or infinitesimal.
    pub fn new_equal(&self, g: &QOmega) -> Result<bool> {
        Ok(self.std_part()? == g.std_part()?)
    }

    /// Integer-coefficient numerator and denominator for display.
    fn integral_parts(&self) -> (Poly, Poly) {
        let l = num_integer::Integer::lcm(
            &self.num.coeff_denominator_lcm(),
            &self.den.coeff_denominator_lcm(),
        );
        let l = Rat::int(l);
        let (n, d) = (self.num.scale(&l), self.den.scale(&l));
        let g = num_integer::Integer::gcd(&n.integer_content(), &d.integer_content());
        let g = Rat::int(g.abs()).recip().expect("nonzero content");
        (n.scale(&g), d.scale(&g))
    }
}

impl PartialOrd for QOmega {
    fn partial_cmp(&self, other: &QOmega) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QOmega {
    fn cmp(&self, other: &QOmega) -> Ordering {
        match self.sub(other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl From<Rat> for QOmega {
    fn from(r: Rat) -> QOmega {
        QOmega::from_rat(r)
    }
}

/// Prints in the expression language, e.g. `(3*omega - 2)/(2*omega)`.
impl fmt::Display for QOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rat() {
            return write!(f, "{r}");
        }
        let (n, d) = self.integral_parts();
        let ns = n.render("omega");
        let ns = if n.term_count() > 1 { format!("({ns})") } else { ns };
        if d == Poly::one() {
            return write!(f, "{ns}");
        }
        let ds = d.render("omega");
        let bare = d.term_count() == 1 && d.leading() == Rat::one();
        if bare {
            write!(f, "{ns}/{ds}")
        } else {
            write!(f, "{ns}/({ds})")
        }
    }
}

impl fmt::Debug for QOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QOmega({self})")
    }
}
