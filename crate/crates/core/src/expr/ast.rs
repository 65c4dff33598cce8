use std::fmt;

use crate::rational::Rat;

/// An infinite number expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Lit(Rat),
    /// The summation/product index `n` of the innermost enclosing series or product.
    Index,
    /// `1 + 1 + 1 + …`.
    Omega,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Integer power; the exponent is an integer literal or an integer-valued
    /// expression in the index.
    Pow(Box<Expr>, Box<Expr>),
    Series { term: Box<Expr>, start: u64 },
    Product { term: Box<Expr>, start: u64 },
    Sqrt(Box<Expr>),
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn lit(r: Rat) -> Expr {
        Expr::Lit(r)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Lit(Rat::int(n))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        Expr::Pow(Box::new(a), Box::new(b))
    }

    pub fn series(term: Expr) -> Expr {
        Expr::Series {
            term: Box::new(term),
            start: 1,
        }
    }

    pub fn product(term: Expr) -> Expr {
        Expr::Product {
            term: Box::new(term),
            start: 1,
        }
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::Sqrt(Box::new(a))
    }

    /// No series, product or square root anywhere below.
    pub fn is_finite_form(&self) -> bool {
        match self {
            Expr::Lit(_) | Expr::Index | Expr::Omega => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.is_finite_form() && b.is_finite_form()
            }
            Expr::Neg(a) => a.is_finite_form(),
            Expr::Series { .. } | Expr::Product { .. } | Expr::Sqrt(_) => false,
        }
    }

    /// Mentions the index of the enclosing binder (not counting nested binders).
    pub fn uses_index(&self) -> bool {
        match self {
            Expr::Index => true,
            Expr::Lit(_) | Expr::Omega | Expr::Series { .. } | Expr::Product { .. } => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.uses_index() || b.uses_index()
            }
            Expr::Neg(a) | Expr::Sqrt(a) => a.uses_index(),
        }
    }

    pub fn uses_omega(&self) -> bool {
        match self {
            Expr::Omega => true,
            Expr::Lit(_) | Expr::Index => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.uses_omega() || b.uses_omega()
            }
            Expr::Neg(a) | Expr::Sqrt(a) => a.uses_omega(),
            Expr::Series { term, .. } | Expr::Product { term, .. } => term.uses_omega(),
        }
    }
}

fn exponent(e: &Expr) -> String {
    match e {
        Expr::Lit(r) if r.is_integer() && !r.is_negative() => r.to_string(),
        Expr::Index => "n".to_string(),
        other => format!("({other})"),
    }
}

/// Fully parenthesised form; parsing it back yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(r) if r.is_negative() => write!(f, "(-{})", r.abs()),
            Expr::Lit(r) => write!(f, "{r}"),
            Expr::Index => write!(f, "n"),
            Expr::Omega => write!(f, "omega"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            // `1 / 2` would read back as the literal 1/2
            Expr::Div(a, b) if matches!(b.as_ref(), Expr::Lit(_)) => write!(f, "({a} / ({b}))"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, b) => match a.as_ref() {
                Expr::Lit(r) if !r.is_integer() => write!(f, "(({a})^{})", exponent(b)),
                _ => write!(f, "({a}^{})", exponent(b)),
            },
            Expr::Series { term, .. } => write!(f, "series(n, {term})"),
            Expr::Product { term, .. } => write!(f, "product(n, {term})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}
