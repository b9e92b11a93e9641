#![allow(dead_code)]

use dyadic_stiffness::experiment::stats::midranks;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two-sided rank-sum p-value by visiting every split of the pooled sample
/// into groups of the original sizes.
pub fn permutation_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    // doubled midranks keep the arithmetic in integers
    let ranks: Vec<i64> = midranks(&pooled).iter().map(|r| (2.0 * r) as i64).collect();
    let n = a.len();
    let total = pooled.len() as i64;
    let twice_mean = n as i64 * (total + 1);
    let observed = (ranks[..n].iter().sum::<i64>() - twice_mean).abs();

    let (mut extreme, mut count) = (0u64, 0u64);
    let mut chosen = Vec::with_capacity(n);
    fn visit(
        start: usize,
        left: usize,
        ranks: &[i64],
        chosen: &mut Vec<i64>,
        f: &mut dyn FnMut(&[i64]),
    ) {
        if left == 0 {
            f(chosen);
            return;
        }
        for i in start..=ranks.len() - left {
            chosen.push(ranks[i]);
            visit(i + 1, left - 1, ranks, chosen, f);
            chosen.pop();
        }
    }
    visit(0, n, &ranks, &mut chosen, &mut |subset| {
        count += 1;
        if (subset.iter().sum::<i64>() - twice_mean).abs() >= observed {
            extreme += 1;
        }
    });
    extreme as f64 / count as f64
}

/// Random sample pair; `ties` draws from a handful of integers so midranks
/// are exercised.
pub fn random_pair(rng: &mut ChaCha8Rng, n: usize, m: usize, ties: bool) -> (Vec<f64>, Vec<f64>) {
    let mut draw = |k: usize| -> Vec<f64> {
        (0..k)
            .map(|_| if ties { rng.random_range(0..6) as f64 } else { rng.random_range(0.0..100.0) })
            .collect()
    };
    let a = draw(n);
    let b = draw(m);
    (a, b)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
