//! Infinite number expressions: syntax, partial computations and
//! certification of their values.

mod ast;
mod diagnostics;
mod eval;
mod parser;
mod partial;
mod shape;

pub use ast::Expr;
pub use diagnostics::{original_check_with, original_measurability_check, positivity, OriginalCheck, Positivity};
pub use eval::{eval, Certified, Classification, PartialSide, Tail};
pub use parser::{parse, ParseError};
pub use partial::partial;
pub use shape::{shape_of, TermShape};
