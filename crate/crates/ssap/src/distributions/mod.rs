//! Prior distributions feeding the threshold recurrence.
//!
//! Every prior exposes the same contract: point mass (or density), CDF,
//! partial expectation over a half-open interval, mean, and an inverse-CDF
//! transform for sampling. Discrete priors precompute prefix tables over a
//! truncated integer support so the recurrence sees O(1) lookups.
//!
//! Interval convention: observation intervals are half-open `(lo, hi]`, so
//! discrete partial expectations sum `x * pmf(x)` for x in
//! `floor(lo)+1 ..= floor(hi)`.

mod cmp;
mod empirical;
mod poisson;
mod table;
mod uniform;

pub use cmp::{cmp_pmf, CmpPrior};
pub use empirical::EmpiricalPrior;
pub use poisson::{poisson_pmf, PoissonPrior};
pub use uniform::UniformPrior;

use crate::bound::Bound;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("normalization series diverges for lambda={lambda}, nu={nu} (nu = 0 requires lambda < 1)")]
    DivergentSeries { lambda: f64, nu: f64 },
    #[error("no feasible (lambda, nu) candidate in the supplied grids")]
    NoFeasibleFit,
    #[error("invalid interval: lo {lo} > hi {hi}")]
    InvalidInterval { lo: Bound, hi: Bound },
    #[error("histogram is empty")]
    EmptyHistogram,
    #[error("histogram csv, line {line}: {msg}")]
    HistogramCsv { line: usize, msg: String },
}

/// Contract every prior distribution satisfies.
///
/// Implementations are immutable after construction and safe to share
/// across threads.
pub trait Prior: Send + Sync + std::fmt::Debug {
    /// Probability mass at `x` (discrete) or density at `x` (continuous).
    fn pmf_or_density(&self, x: f64) -> f64;

    /// P(X <= x).
    fn cdf(&self, x: f64) -> f64;

    /// E[X * 1(lo < X <= hi)].
    ///
    /// Callers must pass `lo <= hi`; use [`partial_expectation`] for the
    /// checked variant. Boundary products follow `-inf * 0 = 0` and
    /// `+inf * 0 = 0`.
    fn partial_expectation(&self, lo: Bound, hi: Bound) -> f64;

    fn mean(&self) -> f64;

    fn is_discrete(&self) -> bool;

    /// Upper bound that covers all but a negligible tail of the support,
    /// where one exists. Useful for series truncation and enumeration.
    fn support_hint(&self) -> Option<f64>;

    /// Inverse-CDF transform of `u` in `[0, 1)`. For discrete priors this
    /// returns the smallest support value whose CDF exceeds `u`.
    fn inverse_cdf(&self, u: f64) -> f64;

    /// CDF extended to sentinel bounds.
    fn cdf_bound(&self, b: Bound) -> f64 {
        match b {
            Bound::NegInf => 0.0,
            Bound::Finite(x) => self.cdf(x),
            Bound::PosInf => 1.0,
        }
    }
}

/// Checked partial expectation: E[X * 1(lo < X <= hi)].
pub fn partial_expectation(prior: &dyn Prior, lo: Bound, hi: Bound) -> Result<f64, DistError> {
    if lo > hi {
        return Err(DistError::InvalidInterval { lo, hi });
    }
    Ok(prior.partial_expectation(lo, hi))
}

/// Grid-search fit of a Conway-Maxwell-Poisson pmf to an empirical
/// histogram, minimizing the sum of squared pmf differences over the union
/// of both supports. Ties break toward smaller lambda, then smaller nu.
///
/// Candidates with a divergent normalization series (nu = 0, lambda >= 1)
/// are skipped; if every candidate diverges the fit fails.
pub fn fit_cmp(
    histogram: &EmpiricalPrior,
    lambda_grid: &[f64],
    nu_grid: &[f64],
) -> Result<(f64, f64), DistError> {
    if lambda_grid.is_empty() || nu_grid.is_empty() {
        return Err(DistError::InvalidParameter("empty parameter grid".into()));
    }
    let mut lambdas = lambda_grid.to_vec();
    let mut nus = nu_grid.to_vec();
    lambdas.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN grid"));
    nus.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN grid"));

    let mut best: Option<(f64, f64, f64)> = None;
    for &lambda in &lambdas {
        for &nu in &nus {
            let cand = match CmpPrior::new(lambda, nu) {
                Ok(c) => c,
                Err(DistError::DivergentSeries { .. }) => continue,
                Err(e) => return Err(e),
            };
            let mse = cmp_fit_error(histogram, &cand);
            // Strict improvement keeps the earliest (smallest lambda, nu).
            if best.is_none_or(|(_, _, b)| mse < b) {
                best = Some((lambda, nu, mse));
            }
        }
    }
    best.map(|(l, n, _)| (l, n)).ok_or(DistError::NoFeasibleFit)
}

/// Sum of squared pmf differences over the union of the histogram support
/// and the truncated CMP support.
fn cmp_fit_error(histogram: &EmpiricalPrior, cand: &CmpPrior) -> f64 {
    let lo = histogram.min_value().min(0);
    let hi = histogram.max_value().max(cand.truncation_len() as i64 - 1);
    let mut err = 0.0;
    for x in lo..=hi {
        let p_emp = histogram.pmf_int(x);
        let p_cmp = if x >= 0 { cand.pmf_int(x as u64) } else { 0.0 };
        let d = p_cmp - p_emp;
        err += d * d;
    }
    err
}
