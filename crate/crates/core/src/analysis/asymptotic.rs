//! Limiting densities of `x = p / (n-1)` and their CDFs.
//!
//! | stat | density on `[0, 1/2)`     | density on `[1/2, 1]`              |
//! |------|---------------------------|------------------------------------|
//! | K    | `1/sqrt(1-2x)`            | `0`                                |
//! | C    | `1/sqrt(x) - 1`           | `1/sqrt(x) - 1`                    |
//! | G    | `2 atanh(sqrt(1-2x))`     | `0` (and `0` at `x = 1/2` itself)  |
//! | X    | `pi/2`                    | `pi/2 - 2 atan(sqrt(2x-1))`        |
//!
//! C and G diverge at `x = 0`; K diverges as `x -> 1/2` from below. The
//! value exactly at `x = 1/2` follows the table above; a single point never
//! changes an integral.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::quadrature::{tanh_sinh, Abscissa};
use crate::{Error, Result, StatKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityValue {
    Finite(f64),
    /// The density is unbounded at this point.
    Divergent,
}

impl DensityValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            DensityValue::Finite(v) => Some(v),
            DensityValue::Divergent => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEval {
    pub stat: StatKind,
    pub x: f64,
    pub density: DensityValue,
    pub cdf: f64,
}

fn check_x(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::invalid(format!("x = {x} outside [0, 1]")))
    }
}

/// `2 atanh(s)` with `s = sqrt(1 - 2x)`, accurate when `s` is near 1.
fn twice_atanh_root(x: f64, s: f64) -> f64 {
    if s < 0.5 {
        2.0 * s.atanh()
    } else {
        // 1 - s = 2x / (1 + s)
        2.0 * s.ln_1p() - (2.0 * x).ln()
    }
}

/// Density at `x`, where `below_half = 1/2 - x` is supplied separately so
/// callers holding an accurate gap to `1/2` keep full precision near the
/// critical point. Returns `inf` where the density is unbounded.
pub(crate) fn density_kernel(stat: StatKind, x: f64, below_half: f64) -> f64 {
    match stat {
        StatKind::Crossing => {
            if below_half > 0.0 {
                1.0 / (2.0 * below_half).sqrt()
            } else {
                0.0
            }
        }
        StatKind::Contained => {
            if x > 0.0 {
                1.0 / x.sqrt() - 1.0
            } else {
                f64::INFINITY
            }
        }
        StatKind::Containing => {
            if below_half < 0.0 {
                0.0
            } else if x > 0.0 {
                twice_atanh_root(x, (2.0 * below_half).sqrt())
            } else {
                f64::INFINITY
            }
        }
        StatKind::Excluded => {
            if below_half > 0.0 {
                FRAC_PI_2
            } else {
                FRAC_PI_2 - 2.0 * (-2.0 * below_half).sqrt().atan()
            }
        }
    }
}

pub fn asymptotic_density(stat: StatKind, x: f64) -> Result<DensityValue> {
    check_x(x)?;
    let v = density_kernel(stat, x, 0.5 - x);
    Ok(if v.is_finite() {
        DensityValue::Finite(v)
    } else {
        DensityValue::Divergent
    })
}

/// Closed-form CDF `int_0^x density`.
pub fn asymptotic_cdf(stat: StatKind, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(match stat {
        StatKind::Crossing => {
            if x < 0.5 {
                1.0 - (1.0 - 2.0 * x).sqrt()
            } else {
                1.0
            }
        }
        StatKind::Contained => 2.0 * x.sqrt() - x,
        StatKind::Containing => {
            if x >= 0.5 {
                1.0
            } else if x == 0.0 {
                0.0
            } else {
                let s = (1.0 - 2.0 * x).sqrt();
                // antiderivative 2x atanh(s) - s, which tends to -1 at 0
                x * twice_atanh_root(x, s) - s + 1.0
            }
        }
        StatKind::Excluded => {
            if x <= 0.5 {
                FRAC_PI_2 * x
            } else {
                let r = (2.0 * x - 1.0).sqrt();
                FRAC_PI_4 + FRAC_PI_2 * (x - 0.5) - 2.0 * x * r.atan() + r
            }
        }
    })
}

pub fn asymptotic_eval(stat: StatKind, x: f64) -> Result<AsymptoticEval> {
    Ok(AsymptoticEval {
        stat,
        x,
        density: asymptotic_density(stat, x)?,
        cdf: asymptotic_cdf(stat, x)?,
    })
}

/// `int_lo^hi x^m density(x) dx` by tanh-sinh quadrature, where `[lo, hi]`
/// lies on one side of `1/2`.
fn moment_piece(stat: StatKind, m: usize, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let upper = hi <= 0.5;
    let q = tanh_sinh(
        |p: Abscissa| {
            let below_half = if upper { (0.5 - hi) + p.from_hi } else { (0.5 - lo) - p.from_lo };
            p.x.powi(m as i32) * density_kernel(stat, p.x, below_half)
        },
        lo,
        hi,
        tol,
    )?;
    Ok(q.value)
}

/// Numerical `m`-th moment of the limiting density over `[0, 1]`.
pub fn asymptotic_moment_numeric(stat: StatKind, m: usize, tol: f64) -> Result<f64> {
    Ok(moment_piece(stat, m, 0.0, 0.5, tol / 2.0)? + moment_piece(stat, m, 0.5, 1.0, tol / 2.0)?)
}

/// Numerical `int_0^x density`, for checking [`asymptotic_cdf`].
pub fn asymptotic_cdf_numeric(stat: StatKind, x: f64, tol: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= 0.5 {
        moment_piece(stat, 0, 0.0, x, tol)
    } else {
        Ok(moment_piece(stat, 0, 0.0, 0.5, tol / 2.0)? + moment_piece(stat, 0, 0.5, x, tol / 2.0)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    use crate::analysis::moments::limiting_moment;

    fn finite(stat: StatKind, x: f64) -> f64 {
        asymptotic_density(stat, x).unwrap().finite().unwrap()
    }

    #[test]
    fn density_examples() {
        assert!((finite(StatKind::Crossing, 0.375) - 2.0).abs() < 1e-15);
        assert!(finite(StatKind::Excluded, 1.0).abs() < 1e-15);
        // 2 atanh(sqrt(0.4)) = ln((1 + sqrt(.4)) / (1 - sqrt(.4)))
        let s = 0.4f64.sqrt();
        let want = ((1.0 + s) / (1.0 - s)).ln();
        assert!((finite(StatKind::Containing, 0.3) - want).abs() < 1e-14);
        assert!((finite(StatKind::Containing, 0.3) - 1.490_996_308_994_808).abs() < 1e-14);
    }

    #[test]
    fn critical_point_conventions() {
        assert_eq!(finite(StatKind::Crossing, 0.5), 0.0);
        assert_eq!(finite(StatKind::Containing, 0.5), 0.0);
        assert_eq!(finite(StatKind::Excluded, 0.5), FRAC_PI_2);
        assert_eq!(asymptotic_density(StatKind::Contained, 0.0).unwrap(), DensityValue::Divergent);
        assert_eq!(asymptotic_density(StatKind::Containing, 0.0).unwrap(), DensityValue::Divergent);
        assert_eq!(finite(StatKind::Crossing, 0.0), 1.0);
        assert!(asymptotic_density(StatKind::Crossing, 1.5).is_err());
        assert!(asymptotic_density(StatKind::Crossing, f64::NAN).is_err());
    }

    #[test]
    fn containing_near_zero_is_accurate() {
        // 2 atanh(sqrt(1-2x)) ~ ln(2/x) for small x
        for x in [1e-8, 1e-12, 1e-200] {
            let v = finite(StatKind::Containing, x);
            assert!((v - (2.0 / x).ln()).abs() < 1e-6, "x = {x}: {v}");
        }
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(asymptotic_cdf(StatKind::Crossing, 0.5).unwrap(), 1.0);
        assert!((asymptotic_cdf(StatKind::Excluded, 0.5).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(asymptotic_cdf(StatKind::Contained, 1.0).unwrap(), 1.0);
        for stat in StatKind::ALL {
            assert!((asymptotic_cdf(stat, 1.0).unwrap() - 1.0).abs() < 1e-10, "{stat}");
            assert_eq!(asymptotic_cdf(stat, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn cdf_monotone_and_matches_quadrature() {
        for stat in StatKind::ALL {
            let mut prev = 0.0;
            for i in 0..=200 {
                let x = i as f64 / 200.0;
                let c = asymptotic_cdf(stat, x).unwrap();
                assert!(c >= prev - 1e-15, "{stat} not monotone at {x}");
                prev = c;
                if i % 10 == 5 {
                    let q = asymptotic_cdf_numeric(stat, x, 1e-12).unwrap();
                    assert!((q - c).abs() < 1e-10, "{stat} x={x}: {q} vs {c}");
                }
            }
        }
    }

    #[test]
    fn normalization_and_moments() {
        for stat in StatKind::ALL {
            for m in 0..=8 {
                let q = asymptotic_moment_numeric(stat, m, 1e-13).unwrap();
                let want = limiting_moment(stat, m).to_f64().unwrap();
                assert!((q - want).abs() < 1e-10, "{stat} m={m}: {q} vs {want}");
            }
        }
    }
}
