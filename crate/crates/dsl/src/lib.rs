//! A small infix language for q-series identities.
//!
//! Source text is lexed and parsed into an [`ast::Expr`], printed back in a
//! canonical form by [`printer::print`], and evaluated to truncated series by
//! [`elaborate::elaborate`]. Suite files of `identity` blocks are read by
//! [`suite::parse_suite`].

pub mod ast;
pub mod elaborate;
pub mod error;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod suite;

pub use ast::{Count, Expr, NamedSum};
pub use elaborate::{elaborate, elaborate_value, Elaborated, Mismatch};
pub use error::{DslError, Result, Span};
pub use parser::parse;
pub use printer::print;
pub use suite::{parse_suite, IdentityCase};
