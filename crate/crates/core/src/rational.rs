//! Exact rational scalars and their string form.
//!
//! Every coefficient in the library is a [`Q`]: an arbitrary precision,
//! always-reduced fraction with a positive denominator. On the wire a
//! rational is the string `"p/q"` (or `"p"` when the denominator is one).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

/// Exact rational scalar.
pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parse `"p/q"`, `"p"` or `"-p/q"`; whitespace around the parts is ignored.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Q::new(n, d))
}

/// Canonical string form, reduced, sign on the numerator.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

/// Random small rational `n/d` with `|n| <= num_bound`, `1 <= d <= den_bound`.
pub fn random_q<R: Rng + ?Sized>(rng: &mut R, num_bound: i64, den_bound: i64) -> Q {
    let n = rng.gen_range(-num_bound..=num_bound);
    let d = rng.gen_range(1..=den_bound.max(1));
    qf(n, d)
}

pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Q::from_integer(acc)
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_q("2/4").unwrap(), qf(1, 2));
        assert_eq!(parse_q("-3").unwrap(), q(-3));
        assert_eq!(parse_q(" 6 / -9 ").unwrap(), qf(-2, 3));
        assert_eq!(fmt_q(&qf(6, -9)), "-2/3");
        assert_eq!(fmt_q(&q(5)), "5");
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(matches!(
            parse_q("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(matches!(
            parse_q("x/2"),
            Err(ParseRationalError::Malformed(_))
        ));
        assert!(matches!(parse_q(""), Err(ParseRationalError::Empty)));
    }

    #[test]
    fn product_example() {
        assert_eq!(qf(2, 3) * qf(3, 4), qf(1, 2));
    }
}
