//! Dense univariate polynomials with rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rat;

/// Coefficients stored lowest degree first, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Poly {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::new(vec![c])
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    /// The indeterminate itself.
    pub fn x() -> Poly {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.degree() {
            None => Some(Rat::zero()),
            Some(0) => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let c = rem[rem.len() - 1].checked_div(&lead).expect("nonzero leading coefficient");
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[shift + j] = &rem[shift + j] - &c * dc;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(Rat::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading().recip().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Monic greatest common divisor; zero only if both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| &acc * x + c)
    }

    /// `p(x + 1)`.
    pub fn shift_one(&self) -> Poly {
        let xp1 = Poly::new(vec![Rat::one(), Rat::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc.mul(&xp1).add(&Poly::constant(c.clone())))
    }

    /// Cauchy bound: every real root has absolute value below the returned integer.
    /// Zero and constant polynomials return 0.
    pub fn root_bound(&self) -> BigInt {
        let Some(d) = self.degree() else {
            return BigInt::zero();
        };
        if d == 0 {
            return BigInt::zero();
        }
        let lead = self.leading().abs();
        let m = self.coeffs[..d]
            .iter()
            .map(|c| c.abs().checked_div(&lead).expect("nonzero lead"))
            .max()
            .unwrap_or_else(Rat::zero);
        (m + Rat::one()).ceil() + BigInt::one()
    }

    /// Common denominator of all coefficients.
    pub fn coeff_denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of numerators, assuming integer coefficients.
    pub fn integer_content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    /// Render in `var`, highest degree first, e.g. `3*omega^2 - omega + 1`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a == Rat::one() {
                out.push_str(&mono);
            } else if a.is_integer() {
                out.push_str(&format!("{a}*{mono}"));
            } else {
                out.push_str(&format!("({a})*{mono}"));
            }
        }
        out
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.render("x"))
    }
}
