//! Observation-axis bounds with explicit infinities.
//!
//! Threshold tables and partial expectations both need interval endpoints
//! that may be unbounded. The recurrence relies on the convention
//! `-inf * 0 = 0` and `+inf * 0 = 0`; keeping the infinities as enum
//! variants instead of IEEE infinities means no arithmetic path can ever
//! produce a NaN from `inf * 0`, and every multiplication against a
//! sentinel is an explicit match arm.

use std::fmt;
use std::str::FromStr;

/// A finite value or an explicit infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    NegInf,
    Finite(f64),
    PosInf,
}

impl Bound {
    /// The finite payload, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    /// Lossy conversion for comparisons and FFI. Never feed the result into
    /// a product that could be `inf * 0`.
    pub fn as_f64(self) -> f64 {
        match self {
            Bound::NegInf => f64::NEG_INFINITY,
            Bound::Finite(v) => v,
            Bound::PosInf => f64::INFINITY,
        }
    }

    /// Classify an IEEE double back into a bound.
    pub fn from_f64(v: f64) -> Bound {
        if v == f64::NEG_INFINITY {
            Bound::NegInf
        } else if v == f64::INFINITY {
            Bound::PosInf
        } else {
            Bound::Finite(v)
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Bound) -> Option<std::cmp::Ordering> {
        self.as_f64().partial_cmp(&other.as_f64())
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => write!(f, "+inf"),
        }
    }
}

impl FromStr for Bound {
    type Err = std::num::ParseFloatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "-inf" => Ok(Bound::NegInf),
            "+inf" | "inf" => Ok(Bound::PosInf),
            other => other.parse::<f64>().map(Bound::Finite),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering() {
        assert!(Bound::NegInf < Bound::Finite(-1e300));
        assert!(Bound::Finite(1e300) < Bound::PosInf);
        assert!(Bound::Finite(1.0) < Bound::Finite(2.0));
        assert!(Bound::NegInf < Bound::PosInf);
        assert!(Bound::NegInf == Bound::NegInf);
    }

    #[test]
    fn display_round_trip() {
        for b in [Bound::NegInf, Bound::Finite(0.5), Bound::PosInf] {
            assert_eq!(b.to_string().parse::<Bound>().unwrap(), b);
        }
        assert_eq!(Bound::NegInf.to_string(), "-inf");
        assert_eq!(Bound::PosInf.to_string(), "+inf");
    }
}
