use chordstat::exact::{count_row, size_distribution, total_configurations};
use chordstat::oracle::{classify, enumerate_counts, monte_carlo, sample_with, EnumerationOptions};
use chordstat::series::GeneratingFunction;
use chordstat::StatKind;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[test]
fn enumeration_matches_exact_and_series_up_to_7() {
    let gfs: Vec<_> = StatKind::ALL
        .iter()
        .map(|&s| GeneratingFunction::new(s, 7).unwrap())
        .collect();
    for n in 1..=7 {
        let tables = enumerate_counts(n, EnumerationOptions::default()).unwrap();
        assert_eq!(tables.partition_violations, 0);
        assert_eq!(BigInt::from(tables.visited), total_configurations(n).unwrap());
        for (stat, gf) in StatKind::ALL.iter().zip(&gfs) {
            let exact = count_row(*stat, n).unwrap();
            assert_eq!(tables.table(*stat), &exact, "{stat} n={n}");
            assert_eq!(gf.row(n).unwrap(), exact);
        }
    }
}

#[test]
fn size_marginal_at_5() {
    let reps = 100_000u64;
    let report = monte_carlo(5, reps, 20_240_501).unwrap();
    let exact = size_distribution(5).unwrap();
    for (d, &count) in report.size_counts.iter().enumerate() {
        let prob = exact.probs[d].to_f64().unwrap();
        let se = (prob * (1.0 - prob) / reps as f64).sqrt();
        let freq = count as f64 / reps as f64;
        assert!((freq - prob).abs() <= 3.0 * se, "d={d}: {freq} vs {prob}");
    }
}

#[test]
fn sampler_is_uniform_at_3() {
    let reps = 1_000_000u32;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen: HashMap<Vec<usize>, u32> = HashMap::new();
    for _ in 0..reps {
        let m = sample_with(3, &mut rng).unwrap();
        *seen.entry(m.partner().to_vec()).or_default() += 1;
    }
    assert_eq!(seen.len(), 15);
    let p = 1.0 / 15.0;
    let se = (p * (1.0 - p) / reps as f64).sqrt();
    for (partner, count) in seen {
        let f = count as f64 / reps as f64;
        assert!((f - p).abs() <= 4.0 * se, "{partner:?}: {f}");
    }
}

proptest! {
    #[test]
    fn sampled_diagrams_partition(n in 1usize..60, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = sample_with(n, &mut rng).unwrap();
        prop_assert_eq!(classify(&m).total(), n - 1);
        prop_assert!(m.size() <= 2 * n - 2);
    }
}
