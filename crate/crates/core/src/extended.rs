//! Extended real numbers, the value set of one-sided derivatives.

use std::fmt;

/// A finite real, `+∞` or `−∞`. NaN is never representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInf,
    NegInf,
}

impl ExtendedReal {
    /// Maps an `f64` into the extended reals. Returns `None` for NaN.
    pub fn new(value: f64) -> Option<Self> {
        if value.is_nan() {
            None
        } else if value == f64::INFINITY {
            Some(ExtendedReal::PosInf)
        } else if value == f64::NEG_INFINITY {
            Some(ExtendedReal::NegInf)
        } else {
            Some(ExtendedReal::Finite(value))
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// Lossless conversion back to `f64`, with infinities mapped to IEEE infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInf => f64::INFINITY,
            ExtendedReal::NegInf => f64::NEG_INFINITY,
        }
    }
}

impl std::ops::Neg for ExtendedReal {
    type Output = ExtendedReal;

    fn neg(self) -> ExtendedReal {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(-v),
            ExtendedReal::PosInf => ExtendedReal::NegInf,
            ExtendedReal::NegInf => ExtendedReal::PosInf,
        }
    }
}

impl From<ExtendedReal> for f64 {
    fn from(x: ExtendedReal) -> f64 {
        x.to_f64()
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInf => f.write_str("+inf"),
            ExtendedReal::NegInf => f.write_str("-inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_is_rejected() {
        assert_eq!(ExtendedReal::new(f64::NAN), None);
        assert_eq!(ExtendedReal::new(f64::INFINITY), Some(ExtendedReal::PosInf));
        assert_eq!(ExtendedReal::new(-2.5), Some(ExtendedReal::Finite(-2.5)));
    }

    #[test]
    fn negation_swaps_infinities() {
        assert_eq!(-ExtendedReal::PosInf, ExtendedReal::NegInf);
        assert_eq!(-ExtendedReal::Finite(3.0), ExtendedReal::Finite(-3.0));
    }

    #[test]
    fn ordering_follows_the_real_line() {
        assert!(ExtendedReal::NegInf < ExtendedReal::Finite(-1e300));
        assert!(ExtendedReal::Finite(1e300) < ExtendedReal::PosInf);
    }
}
