use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{count_row, total_configurations, CountTable};
use crate::numbers::{binomial, dfact, factorial, falling};
use crate::{Error, Result, StatKind};

/// Exact law of a statistic when all `n (2n-1)!!` marked diagrams are
/// equally likely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistribution {
    pub stat: StatKind,
    pub n: usize,
    /// `probs[p] = count_p / (n (2n-1)!!)`.
    pub probs: Vec<BigRational>,
}

impl ExactDistribution {
    pub fn from_table(table: &CountTable) -> Result<Self> {
        let total = total_configurations(table.n())?;
        Ok(ExactDistribution {
            stat: table.stat(),
            n: table.n(),
            probs: table
                .counts()
                .iter()
                .map(|c| BigRational::new(c.clone(), total.clone()))
                .collect(),
        })
    }

    /// `sum_p p!/(p-m)! P(p)` by direct summation.
    pub fn factorial_moment(&self, m: usize) -> BigRational {
        self.probs
            .iter()
            .enumerate()
            .skip(m)
            .map(|(p, pr)| pr * BigRational::from_integer(falling(p, m)))
            .sum()
    }

    pub fn mean(&self) -> BigRational {
        self.factorial_moment(1)
    }

    pub fn variance(&self) -> BigRational {
        let mean = self.mean();
        self.factorial_moment(2) + &mean - &mean * &mean
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

pub fn exact_distribution(stat: StatKind, n: usize) -> Result<ExactDistribution> {
    ExactDistribution::from_table(&count_row(stat, n)?)
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `I_m = int_{1/2}^1 x^m / sqrt(2x-1) dx = 2^-m sum_k C(m,k) / (2k+1)`.
pub fn excluded_moment_integral(m: usize) -> BigRational {
    let sum: BigRational = (0..=m)
        .map(|k| BigRational::new(binomial(m, k), (2 * k + 1).into()))
        .sum();
    sum / int(BigInt::one() << m)
}

/// `m`-th moment of the limiting density of `stat`; the finite-`n` factorial
/// moment is this times `(n-1)!/(n-m-1)!`.
pub fn limiting_moment(stat: StatKind, m: usize) -> BigRational {
    let odd = dfact(2 * m as i64 + 1);
    match stat {
        StatKind::Crossing => BigRational::new(factorial(m), odd),
        StatKind::Contained => BigRational::new(1.into(), ((m + 1) * (2 * m + 1)).into()),
        StatKind::Containing => BigRational::new(factorial(m), odd * (m + 1)),
        StatKind::Excluded => excluded_moment_integral(m) / int(m + 1),
    }
}

/// Closed-form `m`-th factorial moment, for `0 <= m <= n-1`.
pub fn factorial_moment(stat: StatKind, n: usize, m: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if m >= n {
        return Err(Error::invalid(format!("moment order {m} outside [0, {}]", n - 1)));
    }
    Ok(int(falling(n - 1, m)) * limiting_moment(stat, m))
}

/// Mean and variance from their closed forms.
pub fn mean_variance(stat: StatKind, n: usize) -> Result<(BigRational, BigRational)> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let n = n as i64;
    let r = |num: i64, den: i64| BigRational::new(num.into(), den.into());
    Ok(match stat {
        StatKind::Crossing => (r(n - 1, 3), r((n - 1) * (n + 8), 45)),
        StatKind::Contained => (r(n - 1, 6), r((n - 1) * (7 * n + 11), 180)),
        StatKind::Containing => (r(n - 1, 6), r((n - 1) * (3 * n + 19), 180)),
        StatKind::Excluded => (r(n - 1, 3), r(2 * (n - 1) * (n + 3), 45)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub stat: StatKind,
    pub n: usize,
    pub m: usize,
    pub factorial_moment: BigRational,
    pub mean: BigRational,
    pub variance: BigRational,
}

/// Closed-form factorial moment of order `m` plus mean and variance.
///
/// Also sums the exact distribution directly and fails with
/// [`Error::Invariant`] if the two routes disagree.
pub fn moment_report(stat: StatKind, n: usize, m: usize) -> Result<MomentReport> {
    let closed = factorial_moment(stat, n, m)?;
    let (mean, variance) = mean_variance(stat, n)?;
    let dist = exact_distribution(stat, n)?;
    let direct = dist.factorial_moment(m);
    if direct != closed {
        return Err(Error::invariant(format!(
            "{stat} factorial moment n = {n}, m = {m}: closed form {closed}, direct sum {direct}"
        )));
    }
    if dist.mean() != mean || dist.variance() != variance {
        return Err(Error::invariant(format!(
            "{stat} mean/variance at n = {n} disagree with the distribution"
        )));
    }
    Ok(MomentReport {
        stat,
        n,
        m,
        factorial_moment: closed,
        mean,
        variance,
    })
}

/// Sum of the four closed-form means, which must equal `n - 1`.
pub fn mean_sum(n: usize) -> Result<BigRational> {
    StatKind::ALL.iter().try_fold(BigRational::zero(), |acc, &s| {
        Ok(acc + mean_variance(s, n)?.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn distribution_examples() {
        assert_eq!(exact_distribution(StatKind::Crossing, 2).unwrap().probs, vec![rat(2, 3), rat(1, 3)]);
        assert_eq!(
            exact_distribution(StatKind::Contained, 3).unwrap().probs,
            vec![rat(33, 45), rat(9, 45), rat(3, 45)]
        );
        assert_eq!(exact_distribution(StatKind::Containing, 1).unwrap().probs, vec![rat(1, 1)]);
    }

    #[test]
    fn factorial_moment_examples() {
        assert_eq!(factorial_moment(StatKind::Crossing, 3, 1).unwrap(), rat(2, 3));
        assert_eq!(factorial_moment(StatKind::Excluded, 3, 1).unwrap(), rat(2, 3));
        for stat in StatKind::ALL {
            assert!(factorial_moment(stat, 5, 0).unwrap().is_one());
            assert!(factorial_moment(stat, 3, 3).is_err());
        }
        assert_eq!(excluded_moment_integral(1), rat(2, 3));
        assert!(excluded_moment_integral(0).is_one());
    }

    #[test]
    fn mean_variance_examples() {
        assert_eq!(mean_variance(StatKind::Crossing, 3).unwrap(), (rat(2, 3), rat(22, 45)));
        assert_eq!(mean_variance(StatKind::Contained, 100).unwrap().0, rat(33, 2));
        assert_eq!(mean_variance(StatKind::Containing, 1).unwrap(), (rat(0, 1), rat(0, 1)));
        let d = exact_distribution(StatKind::Crossing, 3).unwrap();
        assert_eq!(d.variance(), rat(22, 45));
    }

    #[test]
    fn closed_forms_match_direct_sums() {
        for stat in StatKind::ALL {
            for n in 1..=40 {
                let dist = exact_distribution(stat, n).unwrap();
                for m in 0..n.min(6) {
                    assert_eq!(
                        factorial_moment(stat, n, m).unwrap(),
                        dist.factorial_moment(m),
                        "{stat} n={n} m={m}"
                    );
                }
                let (mean, var) = mean_variance(stat, n).unwrap();
                assert_eq!(mean, dist.mean());
                assert_eq!(var, dist.variance());
            }
        }
    }

    #[test]
    fn means_partition() {
        for n in 1..=40 {
            assert_eq!(mean_sum(n).unwrap(), rat(n as i64 - 1, 1));
        }
    }

    #[test]
    fn report_consistency() {
        let r = moment_report(StatKind::Excluded, 100, 1).unwrap();
        assert_eq!(r.mean, rat(33, 1));
        assert_eq!(r.factorial_moment, rat(33, 1));
        assert!(moment_report(StatKind::Excluded, 3, 5).is_err());
    }
}
