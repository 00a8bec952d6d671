//! Continuous uniform prior, mainly for closed-form cross-checks.

use super::{DistError, Prior};
use crate::bound::Bound;

/// Uniform density 1/(hi - lo) on [lo, hi].
#[derive(Clone, Copy, Debug)]
pub struct UniformPrior {
    lo: f64,
    hi: f64,
}

impl UniformPrior {
    pub fn new(lo: f64, hi: f64) -> Result<Self, DistError> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(DistError::InvalidParameter(format!(
                "uniform requires finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(UniformPrior { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

impl Prior for UniformPrior {
    fn pmf_or_density(&self, x: f64) -> f64 {
        if x >= self.lo && x <= self.hi {
            1.0 / (self.hi - self.lo)
        } else {
            0.0
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        ((x - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }

    fn partial_expectation(&self, lo: Bound, hi: Bound) -> f64 {
        // Integral of x/(hi-lo) over the clipped interval; open vs closed
        // endpoints are measure-zero here.
        let a = match lo {
            Bound::NegInf => self.lo,
            Bound::Finite(v) => v.max(self.lo),
            Bound::PosInf => return 0.0,
        };
        let b = match hi {
            Bound::NegInf => return 0.0,
            Bound::Finite(v) => v.min(self.hi),
            Bound::PosInf => self.hi,
        };
        if b <= a {
            return 0.0;
        }
        (b * b - a * a) / (2.0 * (self.hi - self.lo))
    }

    fn mean(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    fn is_discrete(&self) -> bool {
        false
    }

    fn support_hint(&self) -> Option<f64> {
        Some(self.hi)
    }

    fn inverse_cdf(&self, u: f64) -> f64 {
        self.lo + u * (self.hi - self.lo)
    }
}
