//! Exact q-series arithmetic over ℚ and ℚ(ω).
//!
//! The kernel is generic over the coefficient [`Field`]; the aliases below fix
//! it to [`CycRat`], which is what the identity registry uses.

pub mod ctengine;
pub mod cyclotomic;
pub mod error;
pub mod ortho;
pub mod field;
pub mod qkernel;
pub mod series;

pub use cyclotomic::CycRat;
pub use error::{Error, Result};
pub use field::{CubeRootField, Field};
pub use series::{Monomial, Series, SeriesContext};

pub type QSeries = Series<CycRat>;
pub type QMonomial = Monomial<CycRat>;
pub type QZSeries = ctengine::ZSeries<CycRat>;
