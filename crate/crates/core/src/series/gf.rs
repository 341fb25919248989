use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::TruncatedSeries;
use crate::exact::CountTable;
use crate::numbers::factorial;
use crate::{Error, Result, StatKind};

/// `1 - 2z`
fn one_minus_2z(order: usize) -> TruncatedSeries {
    TruncatedSeries::linear(order, &[1], &[-2])
}

/// `1 - 2yz`
fn one_minus_2yz(order: usize) -> TruncatedSeries {
    TruncatedSeries::linear(order, &[1], &[0, -2])
}

/// `1 - z(1 + y)`
fn one_minus_z_1py(order: usize) -> TruncatedSeries {
    TruncatedSeries::linear(order, &[1], &[-1, -1])
}

fn crossing(order: usize) -> Result<TruncatedSeries> {
    // z / (sqrt(1-2z) (1 - z(1+y)))
    let z = TruncatedSeries::linear(order, &[0], &[1]);
    let inv_root = one_minus_2z(order).sqrt()?.reciprocal()?;
    z.mul(&inv_root)?.mul(&one_minus_z_1py(order).reciprocal()?)
}

fn contained(order: usize) -> Result<TruncatedSeries> {
    // (sqrt(1-2yz) - sqrt(1-2z)) / ((1-2z)(1-y))
    let diff = one_minus_2yz(order).sqrt()?.sub(&one_minus_2z(order).sqrt()?)?;
    diff.divide_by_one_minus_y()?.mul(&one_minus_2z(order).reciprocal()?)
}

fn containing(order: usize) -> Result<TruncatedSeries> {
    // ln((1 - z(1+y)) / (1-2z)) / ((1-y) sqrt(1-2z))
    let log_ratio = one_minus_z_1py(order).log()?.sub(&one_minus_2z(order).log()?)?;
    let inv_root = one_minus_2z(order).sqrt()?.reciprocal()?;
    log_ratio.divide_by_one_minus_y()?.mul(&inv_root)
}

fn excluded(order: usize) -> Result<TruncatedSeries> {
    // atan(w) / ((1-y) sqrt(1-2z)),  w = (1-y) z / sqrt((1-2z)(1-2yz))
    let inv_root = one_minus_2z(order).sqrt()?.reciprocal()?;
    let inv_root_y = one_minus_2yz(order).sqrt()?.reciprocal()?;
    let w = TruncatedSeries::linear(order, &[0], &[1, -1])
        .mul(&inv_root)?
        .mul(&inv_root_y)?;
    w.atan()?.divide_by_one_minus_y()?.mul(&inv_root)
}

/// The exponential generating function `sum_{n,p} count * y^p z^n / n!`
/// of `stat`, truncated after `z^order`.
pub fn build_gf(stat: StatKind, order: usize) -> Result<TruncatedSeries> {
    if order == 0 {
        return Err(Error::invalid("generating functions need order >= 1"));
    }
    let series = match stat {
        StatKind::Crossing => crossing(order)?,
        StatKind::Contained => contained(order)?,
        StatKind::Containing => containing(order)?,
        StatKind::Excluded => excluded(order)?,
    };
    for (n, poly) in series.coeffs().iter().enumerate() {
        let ok = match (n, poly.degree()) {
            (_, None) => true,
            (0, Some(_)) => false,
            (n, Some(deg)) => deg < n,
        };
        if !ok {
            return Err(Error::invariant(format!(
                "{stat} generating function: z^{n} coefficient {poly} has y-degree above n - 1"
            )));
        }
    }
    Ok(series)
}

/// A built generating function together with the statistic it counts.
#[derive(Debug, Clone)]
pub struct GeneratingFunction {
    stat: StatKind,
    series: TruncatedSeries,
}

impl GeneratingFunction {
    pub fn new(stat: StatKind, order: usize) -> Result<Self> {
        Ok(GeneratingFunction {
            stat,
            series: build_gf(stat, order)?,
        })
    }

    pub fn stat(&self) -> StatKind {
        self.stat
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    /// `n! [y^p z^n]`, checked to be a non-negative integer.
    pub fn coefficient(&self, n: usize, p: usize) -> Result<BigInt> {
        if n == 0 || p >= n {
            return Err(Error::invalid(format!("need 0 <= p < n, got n = {n}, p = {p}")));
        }
        let poly = self.series.coefficient(n)?;
        let value = poly.coeff(p) * BigRational::from_integer(factorial(n));
        if !value.is_integer() || value.is_negative() {
            return Err(Error::invariant(format!(
                "{} coefficient n = {n}, p = {p} is {value}, not a non-negative integer",
                self.stat
            )));
        }
        Ok(value.to_integer())
    }

    pub fn row(&self, n: usize) -> Result<CountTable> {
        let counts = (0..n).map(|p| self.coefficient(n, p)).collect::<Result<_>>()?;
        CountTable::new(self.stat, n, counts)
    }
}

/// `n! [y^p z^n]` of the generating function of `stat`, built to order `n`.
pub fn gf_coefficient(stat: StatKind, n: usize, p: usize) -> Result<BigInt> {
    GeneratingFunction::new(stat, n.max(1))?.coefficient(n, p)
}

/// `K_{m,0} = m! [z^m] K(0, z)` for `m = 1..=n`.
pub fn crossing_base_column(n: usize) -> Result<Vec<BigInt>> {
    let k0 = build_gf(StatKind::Crossing, n)?.at_y_zero();
    (1..=n)
        .map(|m| {
            let c = k0.coefficient(m)?.eval_at_zero() * BigRational::from_integer(factorial(m));
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::invariant(format!("K_{{{m},0}} = {c} is not an integer")))
            }
        })
        .collect()
}
