//! Finite-`n` Normal-approximation integral `N(x)` for K and C.
//!
//! Both exact distributions are mixtures of binomials. Replacing each
//! binomial by a Normal with the same mean and variance gives
//!
//! ```text
//! K: N(x) = sqrt(n-1)/sqrt(2 pi) int_0^pi dt / sqrt(1+cos^2 t)
//!             exp(-2(n-1)(x - sin^2 t / 2)^2 / (1 - cos^4 t))
//! C: N(x) = sqrt((n-1)/(2 pi)) int_0^1 da 2(1-a) / sqrt(a^2 (1-a^2))
//!             exp(-(n-1)(x - a^2)^2 / (2 a^2 (1-a^2)))
//! ```
//!
//! The mixing weights are `sin t / 2` on `[0, pi]` and `2(1-a)` on `[0, 1]`,
//! so `N` integrates to 1 over the real line, with some mass outside `[0, 1]`.

use std::f64::consts::{PI, SQRT_2};

use super::quadrature::gauss_kronrod;
use crate::{Error, Result, StatKind};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Initial panel count; the integrand is a narrow ridge of width
/// `O(n^-1/2)` that must not fall between nodes.
const PANELS: usize = 64;

fn check(stat: StatKind, n: usize, tol: f64) -> Result<()> {
    if !matches!(stat, StatKind::Crossing | StatKind::Contained) {
        return Err(Error::UnsupportedStat {
            stat,
            operation: "normal approximation",
        });
    }
    if n < 2 {
        return Err(Error::invalid(format!("normal approximation needs n >= 2, got {n}")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn crossing_integrand(n1: f64, x: f64, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let s2 = s * s;
    let c2 = c * c;
    let mean = 0.5 * s2;
    // 1 - cos^4 = sin^2 (1 + cos^2), without cancellation near 0 and pi
    let spread = s2 * (1.0 + c2);
    (-2.0 * n1 * (x - mean).powi(2) / spread).exp() / (1.0 + c2).sqrt()
}

fn contained_integrand(n1: f64, x: f64, a: f64) -> f64 {
    let a2 = a * a;
    let rest = (1.0 - a) * (1.0 + a);
    let spread = a2 * rest;
    let e = (-n1 * (x - a2).powi(2) / (2.0 * spread)).exp();
    if e == 0.0 {
        return 0.0;
    }
    // 2(1-a)/sqrt(1-a^2) = 2 sqrt(1-a)/sqrt(1+a)
    2.0 * ((1.0 - a) / (1.0 + a)).sqrt() / a * e
}

/// `N(x)` for `stat` in {K, C} by adaptive Gauss-Kronrod quadrature to
/// absolute tolerance `tol`. C diverges logarithmically at `x = 0`.
pub fn normal_approx_density(stat: StatKind, n: usize, x: f64, tol: f64) -> Result<f64> {
    check(stat, n, tol)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("x = {x} outside [0, 1]")));
    }
    let n1 = (n - 1) as f64;
    let scale = (n1 / (2.0 * PI)).sqrt();
    let q = match stat {
        StatKind::Crossing => {
            gauss_kronrod(|t| crossing_integrand(n1, x, t), 0.0, PI, tol / scale, PANELS)?
        }
        _ => {
            if x == 0.0 {
                return Err(Error::Divergent { stat, x });
            }
            gauss_kronrod(|a| contained_integrand(n1, x, a), 0.0, 1.0, tol / scale, PANELS)?
        }
    };
    Ok(scale * q.value)
}

/// Standard Normal upper tail `P(Z > t)`.
fn upper_tail(t: f64) -> f64 {
    0.5 * libm::erfc(t / SQRT_2)
}

/// Mixture of Normal tail probabilities: the mass of `N` below 0 when
/// `below`, else above 1, integrated in closed form over `x` first.
fn outside_mass(stat: StatKind, n: usize, tol: f64, below: bool) -> Result<f64> {
    check(stat, n, tol)?;
    let rn = ((n - 1) as f64).sqrt();
    // standardized distance from the component mean to the cut
    let tail = |mean: f64, sd: f64| {
        if below {
            upper_tail(mean / sd)
        } else {
            upper_tail((1.0 - mean) / sd)
        }
    };
    let q = match stat {
        StatKind::Crossing => gauss_kronrod(
            |t| {
                let (s, c) = t.sin_cos();
                let sd = s * (1.0 + c * c).sqrt() / (2.0 * rn);
                0.5 * s * tail(0.5 * s * s, sd)
            },
            0.0,
            PI,
            tol,
            PANELS,
        )?,
        _ => gauss_kronrod(
            |a| {
                let sd = a * ((1.0 - a) * (1.0 + a)).sqrt() / rn;
                2.0 * (1.0 - a) * tail(a * a, sd)
            },
            0.0,
            1.0,
            tol,
            PANELS,
        )?,
    };
    Ok(q.value)
}

/// Mass of `N` on `x < 0`.
pub fn normal_approx_tail_mass(stat: StatKind, n: usize, tol: f64) -> Result<f64> {
    outside_mass(stat, n, tol, true)
}

/// Mass of `N` on `x > 1`.
pub fn normal_approx_upper_mass(stat: StatKind, n: usize, tol: f64) -> Result<f64> {
    outside_mass(stat, n, tol, false)
}
