//! Exact rational scalars used for every distance in the metric modules.
//!
//! Values are always written as `p/q` (integers as `p/1`) so that files are
//! byte-stable regardless of how a value was computed.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Exact rational number.
pub type Q = Ratio<i64>;

/// Builds `numer/denom`, panicking on a zero denominator.
pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(numer, denom)
}

/// Builds an integer rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Formatting wrapper producing the canonical `p/q` spelling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frac(pub Q);

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("malformed rational {0:?}")]
pub struct ParseFracError(pub String);

/// Parses `p/q` or a bare integer `p`.
pub fn parse_q(s: &str) -> Result<Q, ParseFracError> {
    let s = s.trim();
    let bad = || ParseFracError(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = i64::from_str(n.trim()).map_err(|_| bad())?;
            let d = i64::from_str(d.trim()).map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => i64::from_str(s).map(Q::from_integer).map_err(|_| bad()),
    }
}

/// Parses a comma-separated list of rationals.
pub fn parse_q_list(s: &str) -> Result<Vec<Q>, ParseFracError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_q).collect()
}

pub(crate) fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

pub(crate) fn abs_diff(a: Q, b: Q) -> Q {
    let d = a - b;
    if d < Q::zero() {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_spelling() {
        assert_eq!(Frac(qi(3)).to_string(), "3/1");
        assert_eq!(Frac(q(2, 4)).to_string(), "1/2");
        assert_eq!(Frac(q(-6, 4)).to_string(), "-3/2");
    }

    #[test]
    fn parse_accepts_both_forms() {
        assert_eq!(parse_q("7"), Ok(qi(7)));
        assert_eq!(parse_q(" 10/4 "), Ok(q(5, 2)));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(parse_q_list("1,1/2, 3").unwrap(), vec![qi(1), q(1, 2), qi(3)]);
    }
}
