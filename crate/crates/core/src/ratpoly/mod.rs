//! Exact rational numbers, multivariate polynomials over ℚ and exact
//! linear algebra.

mod linalg;
mod poly;
mod rational;

pub(crate) use linalg::primitive;
pub use linalg::{matrix_rank, transpose, RankInfo, RowSpace};
pub use poly::{MultiIndex, MultiPoly};
pub(crate) use rational::factorial;
pub use rational::{format_decimal, format_rational, parse_rational, rat, Rational};
