//! Exact rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficient field of every computation in the crate.
///
/// `BigRational` keeps numerator and denominator reduced with a positive
/// denominator after every operation.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses `p` or `p/q` (optionally signed, no decimal point).
pub fn parse(text: &str) -> Option<Scalar> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) {
        return None;
    }
    let n: BigInt = num.trim_start_matches('+').parse().ok()?;
    let d: BigInt = match den {
        Some(d) if valid(d, false) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(Scalar::new(n, d))
}

/// `p` or `p/q`; the inverse of [`parse`].
pub fn format(x: &Scalar) -> String {
    x.to_string()
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3"), Some(int(3)));
        assert_eq!(parse("-1/2"), Some(frac(-1, 2)));
        assert_eq!(parse("4/6"), Some(frac(2, 3)));
        assert_eq!(parse("+7"), Some(int(7)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("1.5"), None);
        assert_eq!(parse("1/-2"), None);
        assert_eq!(parse(""), None);
        assert_eq!(format(&frac(-6, 4)), "-3/2");
        assert_eq!(format(&int(5)), "5");
    }

    #[test]
    fn reduced_with_positive_denominator() {
        let x = Scalar::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
    }
}
