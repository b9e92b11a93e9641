//! Rank-sum test and order statistics.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Combined sample size up to which the rank-sum p-value is computed from the
/// exact permutation distribution.
pub const EXACT_MAX_TOTAL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumResult {
    /// Sum of the (mid)ranks of the first sample in the pooled ordering.
    pub statistic: f64,
    pub p_two_sided: f64,
    pub exact: bool,
}

/// Midranks (1-based, ties share their average rank) of `values`.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Wilcoxon rank-sum (Mann-Whitney) test, two-sided.
///
/// For `a.len() + b.len() <= 20` the p-value is exact: the probability, over
/// all equally likely assignments of the pooled midranks to the first
/// sample, of a rank sum at least as far from its mean as the observed one.
/// Larger samples use the normal approximation with tie-corrected variance.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<RankSumResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let n = a.len();
    let total = pooled.len();
    let statistic: f64 = ranks[..n].iter().sum();

    if total <= EXACT_MAX_TOTAL {
        // Doubled midranks are integers, so the null distribution can be
        // counted exactly.
        let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
        let observed: usize = doubled[..n].iter().sum();
        let twice_mean = n * (total + 1);
        let counts = subset_sum_counts(&doubled, n);
        let observed_dist = observed.abs_diff(twice_mean);
        let mut extreme = 0.0;
        let mut all = 0.0;
        for (sum, &c) in counts.iter().enumerate() {
            all += c;
            if sum.abs_diff(twice_mean) >= observed_dist {
                extreme += c;
            }
        }
        return Ok(RankSumResult {
            statistic,
            p_two_sided: (extreme / all).min(1.0),
            exact: true,
        });
    }

    let (nf, mf, tf) = (n as f64, b.len() as f64, total as f64);
    let mean = nf * (tf + 1.0) / 2.0;
    let tie_term: f64 = tie_group_sizes(&pooled).iter().map(|&t| t * t * t - t).sum();
    let variance = nf * mf / 12.0 * ((tf + 1.0) - tie_term / (tf * (tf - 1.0)));
    let p = if variance <= 0.0 {
        1.0
    } else {
        let z = (statistic - mean).abs() / variance.sqrt();
        let normal = Normal::standard();
        (2.0 * (1.0 - normal.cdf(z))).min(1.0)
    };
    Ok(RankSumResult { statistic, p_two_sided: p, exact: false })
}

fn tie_group_sizes(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut sizes = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
        sizes.push(j as f64);
        i += j;
    }
    sizes
}

/// `counts[s]` = number of `size`-element subsets of `items` summing to `s`.
fn subset_sum_counts(items: &[usize], size: usize) -> Vec<f64> {
    let max_sum: usize = items.iter().sum();
    // table[j][s]: subsets of size j with sum s among the items seen so far
    let mut table = vec![vec![0.0f64; max_sum + 1]; size + 1];
    table[0][0] = 1.0;
    for &item in items {
        for j in (1..=size).rev() {
            let (lower, upper) = table.split_at_mut(j);
            let prev = &lower[j - 1];
            let cur = &mut upper[0];
            for s in (item..=max_sum).rev() {
                cur[s] += prev[s - item];
            }
        }
    }
    table.swap_remove(size)
}

pub fn median(values: &[f64]) -> Option<f64> {
    quantile(values, 0.5)
}

/// Linear-interpolation quantile between closest ranks.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo]))
}

pub fn iqr(values: &[f64]) -> Option<f64> {
    Some(quantile(values, 0.75)? - quantile(values, 0.25)?)
}
