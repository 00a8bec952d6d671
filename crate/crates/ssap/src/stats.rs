//! Small summary-statistics and goodness-of-fit helpers for the experiment
//! harness and its tests.

use crate::distributions::{PoissonPrior, Prior};
use crate::math::regularized_gamma_q;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (ddof = 1); zero for fewer than two samples.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Standard error of the mean: sample stddev / sqrt(n).
pub fn sem(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    sample_std(xs) / (xs.len() as f64).sqrt()
}

/// Survival function of the chi-square distribution: P(X > x) with `df`
/// degrees of freedom.
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    regularized_gamma_q(df / 2.0, x / 2.0)
}

/// Chi-square goodness-of-fit p-value for observed counts against
/// Poisson(lambda). Adjacent bins are pooled until each expected count is
/// at least 5; the upper tail is pooled into the last bin. `lambda` is
/// treated as known, so df = bins - 1.
pub fn poisson_chi_square_pvalue(counts: &[u64], lambda: f64) -> f64 {
    assert!(!counts.is_empty(), "need observations");
    let n = counts.len() as f64;
    let k_max = *counts.iter().max().unwrap() as usize;
    let prior = PoissonPrior::new(lambda).expect("lambda > 0");

    let mut observed = vec![0.0f64; k_max + 1];
    for &c in counts {
        observed[c as usize] += 1.0;
    }
    let mut expected: Vec<f64> = (0..=k_max)
        .map(|k| n * prior.pmf_or_density(k as f64))
        .collect();
    // Everything above k_max lands in the final bin.
    let tail = n * (1.0 - prior.cdf(k_max as f64));
    *expected.last_mut().unwrap() += tail;

    // Pool left-to-right so every cell has expected mass >= 5.
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (o, e) in observed.into_iter().zip(expected) {
        acc.0 += o;
        acc.1 += e;
        if acc.1 >= 5.0 {
            pooled.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => pooled.push(acc),
        }
    }
    if pooled.len() < 2 {
        return 1.0;
    }

    let statistic: f64 = pooled
        .iter()
        .map(|&(o, e)| (o - e) * (o - e) / e)
        .sum();
    chi_square_sf(statistic, pooled.len() as f64 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert!((mean(&xs) - 2.5).abs() < 1e-15);
        // Sample variance of 1..4 is 5/3.
        assert!((sample_std(&xs) - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((sem(&xs) - sample_std(&xs) / 2.0).abs() < 1e-15);
        assert_eq!(sample_std(&[7.0]), 0.0);
    }

    #[test]
    fn chi_square_textbook_values() {
        // 95th and 99th percentiles of chi-square(1).
        assert!((chi_square_sf(3.841_458_820_694_124, 1.0) - 0.05).abs() < 1e-9);
        assert!((chi_square_sf(6.634_896_601_021_213, 1.0) - 0.01).abs() < 1e-9);
        // df = 2 has the closed form e^{-x/2}.
        assert!((chi_square_sf(4.0, 2.0) - (-2.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn gof_accepts_poisson_counts() {
        // Deterministic counts shaped exactly like Poisson(3) expectations.
        let lambda = 3.0;
        let n = 10_000usize;
        let prior = PoissonPrior::new(lambda).unwrap();
        let mut counts = Vec::with_capacity(n);
        for k in 0..30u64 {
            let copies = (n as f64 * prior.pmf_or_density(k as f64)).round() as usize;
            counts.extend(std::iter::repeat_n(k, copies));
        }
        let p = poisson_chi_square_pvalue(&counts, lambda);
        assert!(p > 0.5, "p = {p}");
    }

    #[test]
    fn gof_rejects_wrong_rate() {
        let lambda = 3.0;
        let prior = PoissonPrior::new(6.0).unwrap();
        let mut counts = Vec::new();
        for k in 0..40u64 {
            let copies = (10_000.0_f64 * prior.pmf_or_density(k as f64)).round() as usize;
            counts.extend(std::iter::repeat_n(k, copies));
        }
        let p = poisson_chi_square_pvalue(&counts, lambda);
        assert!(p < 1e-6, "p = {p}");
    }
}
