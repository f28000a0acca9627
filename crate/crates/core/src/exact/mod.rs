//! Exact arithmetic kernel: rationals, polynomials, truncated power series
//! and dense linear solving.

mod linear;
mod poly;
mod rational;
mod series;

pub use linear::solve_linear;
pub use poly::{Polynomial, XiPolynomial};
pub use rational::{factorial, Rational};
pub use series::{default_order, s_series, series_scale_arg, PowerSeries};
