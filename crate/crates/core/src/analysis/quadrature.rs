//! Numerical integration.
//!
//! [`tanh_sinh`] is for integrands with endpoint singularities: nodes
//! cluster double-exponentially at both ends, and the integrand receives the
//! distance to each endpoint computed without cancellation, so a factor like
//! `1/sqrt(b - x)` can be evaluated accurately even when `x` rounds to `b`.
//!
//! [`gauss_kronrod`] is a globally adaptive 7/15-point Gauss-Kronrod scheme
//! for smooth but sharply peaked integrands. Neither rule evaluates the
//! integrand at an endpoint.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    pub evaluations: usize,
}

/// A node of [`tanh_sinh`]: the point and its distances to both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_lo: f64,
    pub from_hi: f64,
}

const MAX_LEVEL: u32 = 12;
const T_MAX: f64 = 6.5;

/// Tanh-sinh quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: Fn(Abscissa) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid(format!("bad interval [{a}, {b}]")));
    }
    let half = 0.5 * (b - a);
    let mid = a + half;
    let mut evaluations = 0usize;

    // contribution of the symmetric pair of nodes at +-t, weight included
    let mut pair = |t: f64| -> Result<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u).exp();
        let comp = half * 2.0 * e / (1.0 + e);
        let weight = half * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        if comp == 0.0 || weight == 0.0 {
            return Ok(0.0);
        }
        let far = 2.0 * half - comp;
        let right = Abscissa {
            x: b - comp,
            from_lo: far,
            from_hi: comp,
        };
        let left = Abscissa {
            x: a + comp,
            from_lo: comp,
            from_hi: far,
        };
        evaluations += 2;
        let s = weight * (f(left) + f(right));
        if s.is_finite() {
            Ok(s)
        } else {
            Err(Error::Quadrature {
                estimate: f64::NAN,
                error: f64::INFINITY,
                tolerance: tol,
            })
        }
    };

    let centre = half * FRAC_PI_2 * f(Abscissa {
        x: mid,
        from_lo: half,
        from_hi: half,
    });
    let mut sum = centre;
    let mut k = 1;
    while (k as f64) <= T_MAX {
        sum += pair(k as f64)?;
        k += 1;
    }
    let mut estimate = sum;
    let mut error = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        let h = 0.5f64.powi(level as i32);
        let mut j = 1u64;
        loop {
            let t = j as f64 * h;
            if t > T_MAX {
                break;
            }
            sum += pair(t)?;
            j += 2;
        }
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if level >= 3 && error <= tol {
            return Ok(Quadrature {
                value: estimate,
                error,
                evaluations: evaluations + 1,
            });
        }
    }
    Err(Error::Quadrature {
        estimate,
        error,
        tolerance: tol,
    })
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

const MAX_PANELS: usize = 20_000;

/// Globally adaptive Gauss-Kronrod over `[a, b]`, starting from `panels`
/// equal subintervals and bisecting the worst one until the summed error
/// estimate is below `tol`.
pub fn gauss_kronrod<F>(f: F, a: f64, b: f64, tol: f64, panels: usize) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid(format!("bad interval [{a}, {b}]")));
    }
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut heap: BinaryHeap<Panel> = (0..panels)
        .map(|i| {
            let lo = a + i as f64 * width;
            let hi = if i + 1 == panels { b } else { lo + width };
            kronrod15(&f, lo, hi)
        })
        .collect();
    let mut evaluations = 15 * panels;
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if !value.is_finite() {
            return Err(Error::Quadrature {
                estimate: value,
                error,
                tolerance: tol,
            });
        }
        if error <= tol {
            return Ok(Quadrature {
                value,
                error,
                evaluations,
            });
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::Quadrature {
                estimate: value,
                error,
                tolerance: tol,
            });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            return Err(Error::Quadrature {
                estimate: value,
                error,
                tolerance: tol,
            });
        }
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
        evaluations += 30;
    }
}
