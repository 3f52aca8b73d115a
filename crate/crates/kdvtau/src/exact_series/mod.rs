//! Exact scalars, polynomial rings and truncated series.

pub mod diffpoly;
pub mod mat2;
pub mod multi;
pub mod poly;
pub mod power;
pub mod ring;
pub mod series;

pub use diffpoly::{dpoly_derive, substitute_jets, u, DiffPoly};
pub use mat2::Mat2;
pub use multi::{expand_inverse_difference, MultiSeries};
pub use poly::{MPoly, Monomial, ParamPoly};
pub use power::PowerSeries;
pub use ring::{int, rat, Arith, Rational, Ring};
pub use series::{series_invert, series_mul, TruncSeries};
