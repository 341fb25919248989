//! Ground truth by exhaustive enumeration, and a uniform sampler.
//!
//! The enumerator visits every perfect matching of `2n` points exactly once
//! (always pairing the lowest unmatched vertex) and every choice of marked
//! chord, tallying the four statistics. Chords are identified by ascending
//! left endpoint.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exact::CountTable;
use crate::{Error, Result, StatKind};

/// Largest `n` enumerated without an explicit override.
pub const DEFAULT_CAP: usize = 8;
/// Largest `n` enumerated with the override.
pub const EXTENDED_CAP: usize = 9;

/// Name and version of the generator behind [`sample_uniform`].
pub const RNG_ALGORITHM: &str = "ChaCha8Rng/rand_chacha-0.3/seed_from_u64";

/// A perfect matching of `2n` vertices on a line with one marked chord.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedMatching {
    partner: Vec<usize>,
    marked: usize,
}

impl MarkedMatching {
    /// `partner` must be a fixed-point-free involution on `0..2n`, and
    /// `marked` indexes chords by ascending left endpoint.
    pub fn new(partner: Vec<usize>, marked: usize) -> Result<Self> {
        let len = partner.len();
        if len == 0 || !len.is_multiple_of(2) {
            return Err(Error::invalid(format!("{len} vertices cannot be perfectly matched")));
        }
        for (v, &w) in partner.iter().enumerate() {
            if w >= len || w == v || partner[w] != v {
                return Err(Error::invalid(format!(
                    "partner array is not a fixed-point-free involution at vertex {v}"
                )));
            }
        }
        if marked >= len / 2 {
            return Err(Error::invalid(format!(
                "marked chord {marked} out of range for n = {}",
                len / 2
            )));
        }
        Ok(MarkedMatching { partner, marked })
    }

    pub fn from_chords(chords: &[(usize, usize)], marked: usize) -> Result<Self> {
        let mut partner = vec![usize::MAX; 2 * chords.len()];
        for &(a, b) in chords {
            for v in [a, b] {
                if v >= partner.len() || partner[v] != usize::MAX {
                    return Err(Error::invalid(format!("vertex {v} is reused or out of range")));
                }
            }
            partner[a] = b;
            partner[b] = a;
        }
        Self::new(partner, marked)
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn partner(&self) -> &[usize] {
        &self.partner
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    /// Chords `(left, right)` in ascending order of left endpoint.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(v, &w)| v < w)
            .map(|(v, &w)| (v, w))
            .collect()
    }

    pub fn marked_chord(&self) -> (usize, usize) {
        self.chords()[self.marked]
    }

    /// Number of vertices strictly inside the marked chord.
    pub fn size(&self) -> usize {
        let (i, j) = self.marked_chord();
        j - i - 1
    }
}

/// Per-diagram counts of the other chords in each position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QuadCount {
    pub crossing: usize,
    pub contained: usize,
    pub containing: usize,
    pub excluded: usize,
}

impl QuadCount {
    pub fn new(crossing: usize, contained: usize, containing: usize, excluded: usize) -> Self {
        QuadCount {
            crossing,
            contained,
            containing,
            excluded,
        }
    }

    pub fn get(&self, stat: StatKind) -> usize {
        match stat {
            StatKind::Crossing => self.crossing,
            StatKind::Contained => self.contained,
            StatKind::Containing => self.containing,
            StatKind::Excluded => self.excluded,
        }
    }

    pub fn total(&self) -> usize {
        self.crossing + self.contained + self.containing + self.excluded
    }
}

/// Each test below is evaluated independently, so a chord matching none or
/// several of them shows up as a broken partition rather than being hidden.
#[inline]
fn tally<T: Copy + Into<usize>>(chords: &[(T, T)], mark: usize) -> QuadCount {
    let (i, j) = (chords[mark].0.into(), chords[mark].1.into());
    let mut q = QuadCount::default();
    for (idx, &(a, b)) in chords.iter().enumerate() {
        if idx == mark {
            continue;
        }
        let (a, b) = (a.into(), b.into());
        q.crossing += ((a < i && i < b && b < j) || (i < a && a < j && j < b)) as usize;
        q.contained += (i < a && b < j) as usize;
        q.containing += (a < i && j < b) as usize;
        q.excluded += (b < i || a > j) as usize;
    }
    q
}

/// Positions of every other chord relative to the marked one.
pub fn classify(m: &MarkedMatching) -> QuadCount {
    tally(&m.chords(), m.marked)
}

/// Classifies a raw partner array, validating it first.
pub fn classify_partner(partner: &[usize], marked: usize) -> Result<QuadCount> {
    Ok(classify(&MarkedMatching::new(partner.to_vec(), marked)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Worker threads; 1 runs on the calling thread.
    pub threads: usize,
    /// Raises the cap from [`DEFAULT_CAP`] to [`EXTENDED_CAP`].
    pub allow_extended: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            threads: 1,
            allow_extended: false,
        }
    }
}

/// Result of an exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct OracleTables {
    pub n: usize,
    /// One table per statistic, in [`StatKind::ALL`] order.
    pub tables: Vec<CountTable>,
    /// Number of (matching, marked chord) pairs visited.
    pub visited: u64,
    /// Diagrams whose four counts did not sum to `n - 1`.
    pub partition_violations: u64,
}

impl OracleTables {
    pub fn table(&self, stat: StatKind) -> &CountTable {
        &self.tables[stat.index()]
    }
}

#[derive(Clone)]
struct Tally {
    counts: [Vec<u64>; 4],
    visited: u64,
    violations: u64,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            counts: std::array::from_fn(|_| vec![0; n]),
            visited: 0,
            violations: 0,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (mine, theirs) in self.counts.iter_mut().zip(other.counts) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                *a += b;
            }
        }
        self.visited += other.visited;
        self.violations += other.violations;
        self
    }

    fn record(&mut self, chords: &[(u8, u8)]) {
        let n = chords.len();
        for mark in 0..n {
            let q = tally(chords, mark);
            if q.total() != n - 1 {
                self.violations += 1;
            }
            self.counts[0][q.crossing.min(n - 1)] += 1;
            self.counts[1][q.contained.min(n - 1)] += 1;
            self.counts[2][q.containing.min(n - 1)] += 1;
            self.counts[3][q.excluded.min(n - 1)] += 1;
            self.visited += 1;
        }
    }
}

fn walk(vertices: u32, used: u32, chords: &mut Vec<(u8, u8)>, out: &mut Tally) {
    let full = (1u32 << vertices) - 1;
    if used == full {
        out.record(chords);
        return;
    }
    let v = (!used).trailing_zeros();
    for w in v + 1..vertices {
        if used & (1 << w) == 0 {
            chords.push((v as u8, w as u8));
            walk(vertices, used | (1 << v) | (1 << w), chords, out);
            chords.pop();
        }
    }
}

/// The subtree of matchings in which vertex 0 is paired with `first`.
fn subtree(n: usize, first: usize) -> Tally {
    let mut out = Tally::new(n);
    let mut chords = Vec::with_capacity(n);
    chords.push((0, first as u8));
    walk(2 * n as u32, 1 | (1 << first), &mut chords, &mut out);
    out
}

/// Exhaustively tallies all four statistics over every marked diagram.
pub fn enumerate_counts(n: usize, options: EnumerationOptions) -> Result<OracleTables> {
    let cap = if options.allow_extended { EXTENDED_CAP } else { DEFAULT_CAP };
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if n > cap {
        return Err(Error::ResourceCap { n, cap });
    }
    let firsts = 1..2 * n;
    let tally = if options.threads <= 1 {
        firsts.map(|f| subtree(n, f)).fold(Tally::new(n), Tally::merge)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start thread pool: {e}")))?;
        pool.install(|| {
            firsts
                .into_par_iter()
                .map(|f| subtree(n, f))
                .reduce(|| Tally::new(n), Tally::merge)
        })
    };
    let tables = StatKind::ALL
        .iter()
        .zip(&tally.counts)
        .map(|(&stat, counts)| {
            CountTable::new(stat, n, counts.iter().map(|&c| BigInt::from(c)).collect())
        })
        .collect::<Result<_>>()?;
    Ok(OracleTables {
        n,
        tables,
        visited: tally.visited,
        partition_violations: tally.violations,
    })
}

/// Draws a matching uniformly from all `(2n-1)!!` and a uniform marked chord.
///
/// Only `u32` ranges are drawn so the stream is identical on 32- and 64-bit
/// targets.
pub fn sample_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<MarkedMatching> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let len = 2 * n;
    let mut partner = vec![usize::MAX; len];
    // pool of unmatched vertices with back-pointers for O(1) removal
    let mut pool: Vec<usize> = (0..len).collect();
    let mut pos: Vec<usize> = (0..len).collect();
    let remove = |pool: &mut Vec<usize>, pos: &mut Vec<usize>, v: usize| {
        let at = pos[v];
        let last = *pool.last().expect("non-empty pool");
        pool.swap_remove(at);
        if last != v {
            pos[last] = at;
        }
    };
    for v in 0..len {
        if partner[v] != usize::MAX {
            continue;
        }
        remove(&mut pool, &mut pos, v);
        let w = pool[rng.gen_range(0..pool.len() as u32) as usize];
        remove(&mut pool, &mut pos, w);
        partner[v] = w;
        partner[w] = v;
    }
    let marked = rng.gen_range(0..n as u32) as usize;
    MarkedMatching::new(partner, marked)
}

pub fn sample_uniform(n: usize, seed: u64) -> Result<MarkedMatching> {
    sample_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Seed for stream `index` of a parallel run (SplitMix64 finalizer).
pub fn derive_stream_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
}

/// Empirical law of one statistic over a Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    pub stat: StatKind,
    /// Draw counts indexed by `p`.
    pub counts: Vec<u64>,
    pub reps: u64,
}

impl EmpiricalDistribution {
    pub fn frequency(&self, p: usize) -> f64 {
        self.counts[p] as f64 / self.reps as f64
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|p| self.frequency(p)).collect()
    }

    /// Binomial standard error of the frequency at `p`.
    pub fn std_error(&self, p: usize) -> f64 {
        let f = self.frequency(p);
        (f * (1.0 - f) / self.reps as f64).sqrt()
    }

    pub fn mean(&self) -> f64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(p, &c)| p as f64 * c as f64)
            .sum::<f64>()
            / self.reps as f64
    }

    /// Standard error of [`Self::mean`] from the sample variance.
    pub fn mean_std_error(&self) -> f64 {
        if self.reps < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let ss: f64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(p, &c)| c as f64 * (p as f64 - mean).powi(2))
            .sum();
        (ss / (self.reps - 1) as f64 / self.reps as f64).sqrt()
    }

    /// Pearson statistic against `expected` probabilities; cells with zero
    /// expected mass are skipped.
    pub fn chi_square(&self, expected: &[f64]) -> Result<ChiSquare> {
        if expected.len() != self.counts.len() {
            return Err(Error::invalid(format!(
                "expected distribution has {} cells, observed {}",
                expected.len(),
                self.counts.len()
            )));
        }
        let mut statistic = 0.0;
        let mut cells = 0usize;
        for (&obs, &prob) in self.counts.iter().zip(expected) {
            if prob > 0.0 {
                let e = prob * self.reps as f64;
                statistic += (obs as f64 - e).powi(2) / e;
                cells += 1;
            }
        }
        Ok(ChiSquare {
            statistic,
            degrees_of_freedom: cells.saturating_sub(1),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub n: usize,
    pub reps: u64,
    pub seed: u64,
    pub streams: usize,
    pub rng_algorithm: &'static str,
    /// One per statistic, in [`StatKind::ALL`] order.
    pub distributions: Vec<EmpiricalDistribution>,
    /// Draw counts of the marked chord's size, indexed by `d = 0..=2n-2`.
    pub size_counts: Vec<u64>,
}

impl MonteCarloReport {
    pub fn distribution(&self, stat: StatKind) -> &EmpiricalDistribution {
        &self.distributions[stat.index()]
    }
}

struct Draws {
    counts: [Vec<u64>; 4],
    sizes: Vec<u64>,
}

fn run_stream(n: usize, reps: u64, seed: u64) -> Result<Draws> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Draws {
        counts: std::array::from_fn(|_| vec![0; n]),
        sizes: vec![0; 2 * n - 1],
    };
    for _ in 0..reps {
        let m = sample_with(n, &mut rng)?;
        let q = classify(&m);
        if q.total() != n - 1 {
            return Err(Error::invariant(format!("sampled diagram breaks the partition: {q:?}")));
        }
        for stat in StatKind::ALL {
            draws.counts[stat.index()][q.get(stat)] += 1;
        }
        draws.sizes[m.size()] += 1;
    }
    Ok(draws)
}

fn report(n: usize, reps: u64, seed: u64, streams: usize, draws: Draws) -> MonteCarloReport {
    MonteCarloReport {
        n,
        reps,
        seed,
        streams,
        rng_algorithm: RNG_ALGORITHM,
        distributions: StatKind::ALL
            .iter()
            .zip(draws.counts)
            .map(|(&stat, counts)| EmpiricalDistribution { stat, counts, reps })
            .collect(),
        size_counts: draws.sizes,
    }
}

/// Single-stream Monte Carlo run seeded directly by `seed`.
pub fn monte_carlo(n: usize, reps: u64, seed: u64) -> Result<MonteCarloReport> {
    if reps == 0 {
        return Err(Error::invalid("reps must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    Ok(report(n, reps, seed, 1, run_stream(n, reps, seed)?))
}

/// Parallel run over `streams` independent generators seeded by
/// [`derive_stream_seed`]; reps are split as evenly as possible.
pub fn monte_carlo_streams(n: usize, reps: u64, seed: u64, streams: usize) -> Result<MonteCarloReport> {
    if streams <= 1 {
        return monte_carlo(n, reps, seed);
    }
    if reps == 0 || n == 0 {
        return Err(Error::invalid("n and reps must be at least 1"));
    }
    let k = streams as u64;
    let results = (0..k)
        .into_par_iter()
        .map(|i| run_stream(n, reps / k + u64::from(i < reps % k), derive_stream_seed(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let merged = results
        .into_iter()
        .reduce(|mut acc, d| {
            for (a, b) in acc.counts.iter_mut().zip(d.counts) {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            }
            acc.sizes.iter_mut().zip(d.sizes).for_each(|(x, y)| *x += y);
            acc
        })
        .expect("at least two streams");
    Ok(report(n, reps, seed, streams, merged))
}
