//! Exact rational scalars, dense matrices, and truncated power series.
//!
//! Everything in the symbolic pipeline runs on [`Rat`] (arbitrary-precision
//! rationals, always in lowest terms with positive denominator). There are no
//! tolerances here: rank, kernel, and series computations are exact.

mod jet;
mod matrix;
mod series;

pub use jet::{Coeff, Jet};
pub use matrix::RatMatrix;
pub use series::SeriesMatrix;

use num::BigInt;

/// Arbitrary-precision rational scalar.
pub type Rat = num::BigRational;

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for a rational fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an exact rational from a decimal-free string: `"3"`, `"-1/2"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() || s.contains(['.', 'e', 'E']) {
        return None;
    }
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rat::new(n, d))
        }
    }
}

/// Formats a rational as `"p"` or `"p/q"` (lowest terms, positive denominator).
pub fn format_rat(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rational to f64, for the numeric back end.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num::ToPrimitive;
    r.to_f64().expect("rational out of f64 range")
}
