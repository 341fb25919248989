//! Truncated bivariate power series over exact rationals, and the four
//! exponential generating functions built from them.
//!
//! A series is a polynomial in `z` (cut after a fixed order) whose
//! coefficients are polynomials in the marker variable `y`. The `y`-degree
//! of the `z^n` coefficient of every generating function is at most `n - 1`,
//! so keeping `y` exact costs nothing and division by `1 - y` stays exact.

mod gf;
mod poly;
mod truncated;

pub use gf::{build_gf, crossing_base_column, gf_coefficient, GeneratingFunction};
pub use poly::MarkerPolynomial;
pub use truncated::TruncatedSeries;
