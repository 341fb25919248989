//! Exact distributions and moments, limiting densities, the Normal
//! approximation, and finite-`n` convergence data.
//!
//! Everything except [`moments`] works in `f64`.

// `!(a < b)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic;
pub mod convergence;
pub mod moments;
pub mod normal;
pub mod quadrature;

pub use asymptotic::{
    asymptotic_cdf, asymptotic_cdf_numeric, asymptotic_density, asymptotic_eval,
    asymptotic_moment_numeric, AsymptoticEval, DensityValue,
};
pub use convergence::{
    cached_distribution, convergence_table, ibp_moment_identity_check, lattice_index, uniform_grid,
    ConvergenceRow, IbpReport,
};
pub use moments::{
    exact_distribution, excluded_moment_integral, factorial_moment, limiting_moment, mean_sum,
    mean_variance, moment_report, ExactDistribution, MomentReport,
};
pub use normal::{
    normal_approx_density, normal_approx_tail_mass, normal_approx_upper_mass, DEFAULT_TOLERANCE,
};
pub use quadrature::{gauss_kronrod, tanh_sinh, Abscissa, Quadrature};
