//! Closed-form exact counts for the four statistics.
//!
//! Everything here is big-integer arithmetic. Counts are indexed by `p`, the
//! number of other chords in the requested position, and a row for `n`
//! chords always has `n` entries summing to `n (2n-1)!!`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numbers::{binomial, dfact, factorial, matchings};
use crate::{Error, Result, StatKind};

/// One row of counts for a statistic at fixed `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    stat: StatKind,
    n: usize,
    counts: Vec<BigInt>,
}

impl CountTable {
    /// Checks the length, sign and row-sum invariants.
    pub fn new(stat: StatKind, n: usize, counts: Vec<BigInt>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a count table needs n >= 1"));
        }
        if counts.len() != n {
            return Err(Error::invariant(format!(
                "{stat} row for n = {n} has {} entries",
                counts.len()
            )));
        }
        if let Some(p) = counts.iter().position(|c| c.is_negative()) {
            return Err(Error::invariant(format!("{stat}_{{{n},{p}}} is negative")));
        }
        let total: BigInt = counts.iter().sum();
        let expected = total_configurations(n)?;
        if total != expected {
            return Err(Error::invariant(format!(
                "{stat} row for n = {n} sums to {total}, expected {expected}"
            )));
        }
        Ok(CountTable { stat, n, counts })
    }

    pub fn stat(&self) -> StatKind {
        self.stat
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    pub fn get(&self, p: usize) -> Option<&BigInt> {
        self.counts.get(p)
    }

    pub fn into_counts(self) -> Vec<BigInt> {
        self.counts
    }
}

/// Law of the marked chord's size `d` (vertices strictly inside it).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeDistribution {
    pub n: usize,
    /// Indexed by `d = 0..=2n-2`.
    pub probs: Vec<BigRational>,
}

impl SizeDistribution {
    pub fn mean(&self) -> BigRational {
        self.probs
            .iter()
            .enumerate()
            .map(|(d, pr)| pr * BigRational::from_integer(d.into()))
            .sum()
    }

    pub fn variance(&self) -> BigRational {
        let second: BigRational = self
            .probs
            .iter()
            .enumerate()
            .map(|(d, pr)| pr * BigRational::from_integer((d * d).into()))
            .sum();
        let mean = self.mean();
        second - &mean * &mean
    }
}

fn require_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::invalid("n must be at least 1"))
    } else {
        Ok(())
    }
}

fn require_p(n: usize, p: usize) -> Result<()> {
    require_n(n)?;
    if p >= n {
        Err(Error::invalid(format!("p = {p} outside [0, {}]", n - 1)))
    } else {
        Ok(())
    }
}

/// `n (2n-1)!!`, the number of diagrams with one marked chord.
pub fn total_configurations(n: usize) -> Result<BigInt> {
    require_n(n)?;
    Ok(matchings(n) * n)
}

/// `S_n(d) = (2n-d-1) (2n-3)!! / (n (2n-1)!!) = (1/n) (1 - d/(2n-1))`.
pub fn size_distribution(n: usize) -> Result<SizeDistribution> {
    require_n(n)?;
    let rest = matchings(n - 1);
    let total = total_configurations(n)?;
    let probs = (0..=2 * n - 2)
        .map(|d| BigRational::new(rest.clone() * (2 * n - d - 1), total.clone()))
        .collect();
    Ok(SizeDistribution { n, probs })
}

/// Configurations whose marked chord has size `d` and is crossed by exactly
/// `p` other chords.
///
/// Evaluated as the product
/// `C(d,p) C(2n-d-2,p) p! (d-p-1)!! (2n-d-p-3)!! (2n-d-1)`:
/// choose which `p` inner and `p` outer vertices pair across the marked
/// chord, match the leftovers on each side among themselves, and place the
/// marked chord in one of `2n-d-1` positions. Simplifying gives
/// `2^(p-n+1) d! (2n-d-1)! / (p! (n-1-(d+p)/2)! ((d-p)/2)!)`; note the
/// `(d+p)/2` in the middle factorial, not `(d-p)/2`.
///
/// Parameter combinations that cannot occur (wrong parity, `p` larger than
/// either side, `d > 2n-2`) count zero.
pub fn count_crossings_by_size(n: usize, p: usize, d: usize) -> Result<BigInt> {
    require_n(n)?;
    if d > 2 * n - 2 || p > d || p > 2 * n - 2 - d || !(d - p).is_multiple_of(2) {
        return Ok(BigInt::zero());
    }
    let (n, p, d) = (n as i64, p as i64, d as i64);
    let outside = (2 * n - d - 2) as usize;
    Ok(binomial(d as usize, p as usize)
        * binomial(outside, p as usize)
        * factorial(p as usize)
        * dfact(d - p - 1)
        * dfact(2 * n - d - p - 3)
        * (2 * n - d - 1))
}

fn crossing(n: usize, p: usize) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    let mut d = p;
    while d + p <= 2 * n - 2 {
        acc += count_crossings_by_size(n, p, d)?;
        d += 2;
    }
    Ok(acc)
}

fn contained(n: usize, p: usize) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    for k in 0..n - p {
        acc += count_crossings_by_size(n, k, 2 * p + k)?;
    }
    Ok(acc)
}

/// Divides an exact fraction that is known to be integral.
fn exact_quotient(num: BigInt, den: BigInt, what: impl FnOnce() -> String) -> Result<BigInt> {
    let (q, r) = num.div_rem(&den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::invariant(format!("{} is not an integer", what())))
    }
}

/// `H_{n,q}`: configurations with at least `q` chords containing the marked
/// chord, `n (2n-1)!! C(n-1,q) 2^q (q!)^2 / ((q+1) (2q+1)!)`.
fn containing_at_least_closed(n: usize, q: usize) -> Result<BigInt> {
    let num = total_configurations(n)? * binomial(n - 1, q) * (BigInt::one() << q) * factorial(q)
        * factorial(q);
    let den = factorial(2 * q + 1) * (q + 1);
    exact_quotient(num, den, || format!("H_{{{n},{q}}}"))
}

/// Sum over marked-chord size `d` and left offset `l` of the ways to pick
/// `q` vertices on each side, pair them across, and match the rest.
fn containing_at_least_direct(n: usize, q: usize) -> BigInt {
    let rest = dfact(2 * n as i64 - 2 * q as i64 - 3);
    let inner = factorial(q) * rest;
    let mut acc = BigInt::zero();
    for d in 0..=2 * n - 2 - 2 * q {
        for l in q..=2 * n - d - 2 - q {
            acc += binomial(l, q) * binomial(2 * n - d - l - 2, q);
        }
    }
    acc * inner
}

/// `Y_{n,q,r}`: at least `q` excluded chords left of the marked chord and at
/// least `r` to its right,
/// `n (2n-1)!! / (q+r+1) * (n-1)! / (q! r! (n-1-q-r)!) * (2q)! (2r)! / (2q+2r+1)!`.
fn excluded_at_least_closed(n: usize, q: usize, r: usize) -> Result<BigInt> {
    let s = q + r;
    let num = total_configurations(n)?
        * factorial(n - 1)
        * factorial(2 * q)
        * factorial(2 * r);
    let den = factorial(q) * factorial(r) * factorial(n - 1 - s) * factorial(2 * s + 1) * (s + 1);
    exact_quotient(num, den, || format!("Y_{{{n},{q},{r}}}"))
}

fn excluded_at_least_direct(n: usize, q: usize, r: usize) -> BigInt {
    let (q2, r2) = (2 * q, 2 * r);
    let weight = dfact(q2 as i64 - 1)
        * dfact(r2 as i64 - 1)
        * dfact(2 * n as i64 - q2 as i64 - r2 as i64 - 3);
    let mut acc = BigInt::zero();
    for d in 0..=2 * n - 2 - q2 - r2 {
        for l in q2..=2 * n - d - 2 - r2 {
            acc += binomial(l, q2) * binomial(2 * n - d - l - 2, r2);
        }
    }
    acc * weight
}

/// Recovers "exactly p" counts from "at least s" counts:
/// `exactly[p] = sum_{s >= p} (-1)^(s-p) C(s,p) at_least[s]`.
pub fn exactly_from_at_least(at_least: &[BigInt]) -> Vec<BigInt> {
    (0..at_least.len())
        .map(|p| {
            at_least
                .iter()
                .enumerate()
                .skip(p)
                .fold(BigInt::zero(), |acc, (s, h)| {
                    let term = binomial(s, p) * h;
                    if (s - p) % 2 == 0 {
                        acc + term
                    } else {
                        acc - term
                    }
                })
        })
        .collect()
}

/// `T_{n,s} = sum_{q+r=s} Y_{n,q,r}`.
fn excluded_at_least_total(n: usize, s: usize) -> Result<BigInt> {
    (0..=s).try_fold(BigInt::zero(), |acc, q| {
        Ok(acc + excluded_at_least_closed(n, q, s - q)?)
    })
}

/// Number of configurations with exactly `p` other chords in position
/// `stat`.
pub fn count_stat(stat: StatKind, n: usize, p: usize) -> Result<BigInt> {
    require_p(n, p)?;
    match stat {
        StatKind::Crossing => crossing(n, p),
        StatKind::Contained => contained(n, p),
        StatKind::Containing => {
            let at_least = (0..n)
                .map(|q| {
                    if q < p {
                        Ok(BigInt::zero())
                    } else {
                        containing_at_least_closed(n, q)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(exactly_from_at_least(&at_least).swap_remove(p))
        }
        StatKind::Excluded => {
            let at_least = (0..n)
                .map(|s| {
                    if s < p {
                        Ok(BigInt::zero())
                    } else {
                        excluded_at_least_total(n, s)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(exactly_from_at_least(&at_least).swap_remove(p))
        }
    }
}

/// Full row `p = 0..n-1`, checked against the row-sum invariant.
pub fn count_row(stat: StatKind, n: usize) -> Result<CountTable> {
    require_n(n)?;
    let counts = match stat {
        StatKind::Crossing => (0..n).map(|p| crossing(n, p)).collect::<Result<_>>()?,
        StatKind::Contained => (0..n).map(|p| contained(n, p)).collect::<Result<_>>()?,
        StatKind::Containing => {
            let at_least = (0..n)
                .map(|q| containing_at_least_closed(n, q))
                .collect::<Result<Vec<_>>>()?;
            exactly_from_at_least(&at_least)
        }
        StatKind::Excluded => {
            let at_least = (0..n)
                .map(|s| excluded_at_least_total(n, s))
                .collect::<Result<Vec<_>>>()?;
            exactly_from_at_least(&at_least)
        }
    };
    CountTable::new(stat, n, counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtLeastMethod {
    /// The double sum over marked-chord size and position.
    DirectSum,
    /// The single closed-form product.
    ClosedForm,
}

/// "At least" counts behind the containing and excluded statistics.
///
/// For [`StatKind::Containing`] this is `H_{n,q}` and `r` is ignored; for
/// [`StatKind::Excluded`] it is `Y_{n,q,r}` (at least `q` excluded chords on
/// the left and `r` on the right).
pub fn at_least_count(
    stat: StatKind,
    n: usize,
    q: usize,
    r: usize,
    method: AtLeastMethod,
) -> Result<BigInt> {
    require_n(n)?;
    match stat {
        StatKind::Containing => {
            if q > n - 1 {
                return Err(Error::invalid(format!("q = {q} exceeds n - 1 = {}", n - 1)));
            }
            match method {
                AtLeastMethod::DirectSum => Ok(containing_at_least_direct(n, q)),
                AtLeastMethod::ClosedForm => containing_at_least_closed(n, q),
            }
        }
        StatKind::Excluded => {
            if q + r > n - 1 {
                return Err(Error::invalid(format!(
                    "q + r = {} exceeds n - 1 = {}",
                    q + r,
                    n - 1
                )));
            }
            match method {
                AtLeastMethod::DirectSum => Ok(excluded_at_least_direct(n, q, r)),
                AtLeastMethod::ClosedForm => excluded_at_least_closed(n, q, r),
            }
        }
        other => Err(Error::UnsupportedStat {
            stat: other,
            operation: "at_least_count",
        }),
    }
}

/// Crossing rows `1..=n` from `K_{m,p} = m K_{m-1,p} + m K_{m-1,p-1}`.
///
/// `base_column[m - 1]` must hold `K_{m,0}`; it can come from
/// [`count_stat`] or from the generating function.
pub fn k_recursion_table(n: usize, base_column: &[BigInt]) -> Result<Vec<CountTable>> {
    require_n(n)?;
    if base_column.len() < n {
        return Err(Error::invalid(format!(
            "base column has {} entries, need {n}",
            base_column.len()
        )));
    }
    let mut rows: Vec<CountTable> = Vec::with_capacity(n);
    let mut prev: Vec<BigInt> = Vec::new();
    for m in 1..=n {
        let mut row = Vec::with_capacity(m);
        row.push(base_column[m - 1].clone());
        for p in 1..m {
            let same = prev.get(p).cloned().unwrap_or_default();
            row.push((same + &prev[p - 1]) * m);
        }
        let table = CountTable::new(StatKind::Crossing, m, row).map_err(|e| match e {
            Error::Invariant(msg) => Error::invalid(format!("inconsistent base column: {msg}")),
            other => other,
        })?;
        prev = table.counts.clone();
        rows.push(table);
    }
    Ok(rows)
}

/// Row `n` of the crossing table built by the recursion.
pub fn k_recursion_row(n: usize, base_column: &[BigInt]) -> Result<CountTable> {
    let mut rows = k_recursion_table(n, base_column)?;
    Ok(rows.pop().expect("n >= 1 rows"))
}

/// `K_{m,0}` for `m = 1..=n` from the closed-form sums.
pub fn crossing_base_column(n: usize) -> Result<Vec<BigInt>> {
    (1..=n).map(|m| count_stat(StatKind::Crossing, m, 0)).collect()
}
