//! Poisson prior over counts.

use super::table::DiscreteTable;
use super::{DistError, Prior};
use crate::bound::Bound;
use crate::math::ln_factorial;

/// P(X = x) = lambda^x e^{-lambda} / x!, computed in log space so large x
/// and large lambda cannot overflow.
pub fn poisson_pmf(lambda: f64, x: u64) -> Result<f64, DistError> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(DistError::InvalidParameter(format!(
            "poisson lambda must be positive, got {lambda}"
        )));
    }
    Ok((x as f64 * lambda.ln() - lambda - ln_factorial(x)).exp())
}

/// Poisson prior with rate `lambda` (expected feature count per sensing
/// area).
#[derive(Clone, Debug)]
pub struct PoissonPrior {
    lambda: f64,
    table: DiscreteTable,
}

impl PoissonPrior {
    pub fn new(lambda: f64) -> Result<Self, DistError> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(DistError::InvalidParameter(format!(
                "poisson lambda must be positive, got {lambda}"
            )));
        }
        // Retain support until all but ~1e-15 of the mass is covered.
        let cap = (lambda + 12.0 * lambda.sqrt() + 50.0).ceil() as usize;
        let ln_lambda = lambda.ln();
        let mut pmf = Vec::new();
        let mut cumulative = 0.0;
        for k in 0..=cap {
            let p = (k as f64 * ln_lambda - lambda - ln_factorial(k as u64)).exp();
            pmf.push(p);
            cumulative += p;
            if cumulative >= 1.0 - 1e-15 {
                break;
            }
        }
        Ok(PoissonPrior {
            lambda,
            table: DiscreteTable::from_pmf(pmf),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Prior for PoissonPrior {
    fn pmf_or_density(&self, x: f64) -> f64 {
        if x < 0.0 || x.fract() != 0.0 {
            return 0.0;
        }
        self.table
            .pmf_at(x as u64)
            .unwrap_or_else(|| poisson_pmf(self.lambda, x as u64).unwrap_or(0.0))
    }

    fn cdf(&self, x: f64) -> f64 {
        self.table.cdf_at(x)
    }

    fn partial_expectation(&self, lo: Bound, hi: Bound) -> f64 {
        self.table.partial_expectation(lo, hi)
    }

    fn mean(&self) -> f64 {
        self.lambda
    }

    fn is_discrete(&self) -> bool {
        true
    }

    fn support_hint(&self) -> Option<f64> {
        Some(self.table.len() as f64 - 1.0)
    }

    fn inverse_cdf(&self, u: f64) -> f64 {
        self.table.inverse_cdf(u)
    }
}
