//! Exact scaled distributions against the limiting densities.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;

use super::asymptotic::{asymptotic_density, asymptotic_moment_numeric, DensityValue};
use super::moments::{exact_distribution, limiting_moment, ExactDistribution};
use crate::{Error, Result, StatKind};

type RowCache = Mutex<HashMap<(StatKind, usize), Arc<ExactDistribution>>>;

fn row_cache() -> &'static RowCache {
    static CACHE: OnceLock<RowCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Exact distribution of `stat` at `n`, computed once per process.
pub fn cached_distribution(stat: StatKind, n: usize) -> Result<Arc<ExactDistribution>> {
    if let Some(d) = row_cache().lock().expect("row cache poisoned").get(&(stat, n)) {
        return Ok(Arc::clone(d));
    }
    // computed outside the lock; a concurrent duplicate is harmless
    let d = Arc::new(exact_distribution(stat, n)?);
    let mut cache = row_cache().lock().expect("row cache poisoned");
    Ok(Arc::clone(cache.entry((stat, n)).or_insert(d)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub x: f64,
    pub p: usize,
    /// `(n-1) * probs[p]`.
    pub exact_scaled: f64,
    /// Limiting density at the lattice point `p / (n-1)`.
    pub asymptotic: DensityValue,
    pub abs_error: Option<f64>,
}

/// Lattice index nearest to `x (n-1)`.
pub fn lattice_index(n: usize, x: f64) -> usize {
    ((n - 1) as f64 * x).round() as usize
}

pub fn convergence_table(stat: StatKind, n: usize, grid: &[f64]) -> Result<Vec<ConvergenceRow>> {
    if n < 2 {
        return Err(Error::invalid(format!("convergence table needs n >= 2, got {n}")));
    }
    if let Some(bad) = grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::invalid(format!("grid point {bad} outside [0, 1]")));
    }
    let dist = cached_distribution(stat, n)?;
    let scale = (n - 1) as f64;
    grid.iter()
        .map(|&x| {
            let p = lattice_index(n, x);
            let exact_scaled = scale * dist.probs[p].to_f64().unwrap_or(f64::NAN);
            let asymptotic = asymptotic_density(stat, p as f64 / scale)?;
            Ok(ConvergenceRow {
                x,
                p,
                exact_scaled,
                asymptotic,
                abs_error: asymptotic.finite().map(|a| (exact_scaled - a).abs()),
            })
        })
        .collect()
}

/// Evenly spaced grid `lo, lo + step, ..., hi` built from integer steps.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IbpReport {
    pub m: usize,
    pub crossing_moment: f64,
    pub containing_moment: f64,
    /// `m! / ((m+1)(2m+1)!!)`.
    pub containing_expected: f64,
    pub excluded_moment: f64,
    /// `I_m / (m+1)`.
    pub excluded_expected: f64,
    pub max_deviation: f64,
}

/// Checks by quadrature that the G moments are the K moments divided by
/// `m + 1`, and that the X moments are `I_m / (m + 1)`.
pub fn ibp_moment_identity_check(m: usize, tol: f64) -> Result<IbpReport> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let quad_tol = tol / 10.0;
    let crossing_moment = asymptotic_moment_numeric(StatKind::Crossing, m, quad_tol)?;
    let containing_moment = asymptotic_moment_numeric(StatKind::Containing, m, quad_tol)?;
    let excluded_moment = asymptotic_moment_numeric(StatKind::Excluded, m, quad_tol)?;
    let f = |s| limiting_moment(s, m).to_f64().unwrap_or(f64::NAN);
    let containing_expected = f(StatKind::Containing);
    let excluded_expected = f(StatKind::Excluded);
    let max_deviation = [
        (containing_moment - containing_expected).abs(),
        (containing_moment - crossing_moment / (m + 1) as f64).abs(),
        (excluded_moment - excluded_expected).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if !(max_deviation <= tol) {
        return Err(Error::invariant(format!(
            "moment identity at m = {m} off by {max_deviation:e} (tolerance {tol:e})"
        )));
    }
    Ok(IbpReport {
        m,
        crossing_moment,
        containing_moment,
        containing_expected,
        excluded_moment,
        excluded_expected,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn table_examples() {
        let k = convergence_table(StatKind::Crossing, 100, &[0.0]).unwrap();
        assert!((k[0].exact_scaled - 1.0).abs() < 0.05, "{:?}", k[0]);
        let x = convergence_table(StatKind::Excluded, 100, &[0.25]).unwrap();
        assert_eq!(x[0].asymptotic, DensityValue::Finite(FRAC_PI_2));
        let c = convergence_table(StatKind::Contained, 100, &[1.0]).unwrap();
        assert_eq!(c[0].p, 99);
        assert!(c[0].exact_scaled.abs() < 0.01, "{:?}", c[0]);
        assert_eq!(c[0].asymptotic, DensityValue::Finite(0.0));
        let c0 = convergence_table(StatKind::Contained, 100, &[0.0]).unwrap();
        assert_eq!(c0[0].asymptotic, DensityValue::Divergent);
        assert_eq!(c0[0].abs_error, None);
    }

    #[test]
    fn contained_top_value_is_closed_form() {
        // (n-1) (2n-3)!! / (n (2n-1)!!) = (n-1) / (n (2n-1))
        let n = 100usize;
        let c = convergence_table(StatKind::Contained, n, &[1.0]).unwrap();
        let want = (n - 1) as f64 / (n * (2 * n - 1)) as f64;
        assert!((c[0].exact_scaled - want).abs() < 1e-15);
    }

    #[test]
    fn cache_returns_same_row() {
        let a = cached_distribution(StatKind::Containing, 30).unwrap();
        let b = cached_distribution(StatKind::Containing, 30).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn cache_is_safe_under_concurrency() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || cached_distribution(StatKind::ALL[i % 4], 25).unwrap()))
            .collect();
        for h in handles {
            let d = h.join().unwrap();
            assert_eq!(d.probs.len(), 25);
        }
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(convergence_table(StatKind::Crossing, 10, &[1.5]).is_err());
        assert!(convergence_table(StatKind::Crossing, 1, &[0.5]).is_err());
    }

    #[test]
    fn uniform_grid_endpoints() {
        let g = uniform_grid(0.05, 0.45, 9);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[8], 0.45);
    }

    #[test]
    fn ibp_examples() {
        let r0 = ibp_moment_identity_check(0, 1e-9).unwrap();
        assert!((r0.containing_moment - 1.0).abs() < 1e-9);
        assert!((r0.excluded_moment - 1.0).abs() < 1e-9);
        let r1 = ibp_moment_identity_check(1, 1e-9).unwrap();
        assert!((r1.containing_moment - 1.0 / 6.0).abs() < 1e-9);
        assert!((r1.excluded_moment - 1.0 / 3.0).abs() < 1e-9);
        for m in 2..=8 {
            ibp_moment_identity_check(m, 1e-9).unwrap();
        }
    }

    #[test]
    fn crossing_sharpens_at_half_for_n_400() {
        let n = 400;
        let above = ((n - 1) as f64 * 0.55).ceil();
        let below = ((n - 1) as f64 * 0.45).floor();
        let rows = convergence_table(StatKind::Crossing, n, &[above / 399.0, below / 399.0]).unwrap();
        assert_eq!(rows[0].p, 220);
        assert_eq!(rows[1].p, 179);
        assert!(rows[1].exact_scaled > 1.0, "{:?}", rows[1]);
        assert!(rows[0].exact_scaled < 1e-3, "exact scaled density at p = 220 is {}", rows[0].exact_scaled);
    }
}
