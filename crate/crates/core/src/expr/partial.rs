//! Partial computations: every series cut after `n` terms, every product after
//! `n` factors, `omega` read as `n`.

use num_traits::{ToPrimitive, Zero};

use super::ast::Expr;
use crate::error::{Error, Result};
use crate::rational::{isqrt_rem, Rat};

pub fn partial(e: &Expr, n: u64) -> Result<Rat> {
    at(e, n, None)
}

/// Value of `e` with the index bound to `k` (omega is still read as `n`).
pub(crate) fn at(e: &Expr, n: u64, index: Option<&Rat>) -> Result<Rat> {
    Ok(match e {
        Expr::Lit(r) => r.clone(),
        Expr::Index => index.cloned().ok_or(Error::UnboundIndex)?,
        Expr::Omega => Rat::int(n),
        Expr::Add(a, b) => at(a, n, index)? + at(b, n, index)?,
        Expr::Sub(a, b) => at(a, n, index)? - at(b, n, index)?,
        Expr::Mul(a, b) => at(a, n, index)? * at(b, n, index)?,
        Expr::Div(a, b) => at(a, n, index)?.checked_div(&at(b, n, index)?)?,
        Expr::Neg(a) => -at(a, n, index)?,
        Expr::Pow(a, b) => {
            let k = at(b, n, index)?;
            if !k.is_integer() {
                return Err(Error::NonIntegerExponent);
            }
            let k = k.numer().to_i64().ok_or(Error::NonIntegerExponent)?;
            at(a, n, index)?.pow(k)?
        }
        Expr::Series { term, start } => {
            let mut sum = Rat::zero();
            for k in *start..start + n {
                sum = sum + at(term, n, Some(&Rat::int(k)))?;
            }
            sum
        }
        Expr::Product { term, start } => {
            let mut prod = Rat::one();
            for k in *start..start + n {
                prod = prod * at(term, n, Some(&Rat::int(k)))?;
            }
            prod
        }
        Expr::Sqrt(a) => {
            let v = at(a, n, index)?;
            if v.is_negative() {
                return Err(Error::NegativeInput);
            }
            let (sn, rn) = isqrt_rem(v.numer());
            let (sd, rd) = isqrt_rem(v.denom());
            if !rn.is_zero() || !rd.is_zero() {
                return Err(Error::SqrtNotRational);
            }
            Rat::new(sn, sd)?
        }
    })
}
