use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyalg::{Jet, Monomial};
use crate::scalar::{factorial, to_f64, Scalar};

/// Weight of `x^alpha` in the metric: `alpha! n! / (|alpha| + n)! * r^{2|alpha|}`.
pub fn hermitian_weight(m: &Monomial, radius: &Scalar) -> Scalar {
    let n = m.nvars() as u32;
    let d = m.degree();
    let alpha_fact = m
        .exponents()
        .iter()
        .fold(BigInt::one(), |acc, &e| acc * factorial(e as u32));
    let ratio = Scalar::new(alpha_fact * factorial(n), factorial(d + n));
    let r2 = radius * radius;
    let mut pow = Scalar::one();
    for _ in 0..d {
        pow *= &r2;
    }
    ratio * pow
}

/// Exact `<f, g>` on real coefficients; distinct monomials are orthogonal.
pub fn hermitian_inner(f: &Jet, g: &Jet, radius: &Scalar) -> Result<Scalar> {
    if !radius.is_positive() {
        return Err(Error::NonPositiveRadius);
    }
    let mut acc = Scalar::zero();
    for (m, a) in f.terms() {
        let b = g.coeff(m);
        if !b.is_zero() {
            acc += hermitian_weight(m, radius) * a * b;
        }
    }
    Ok(acc)
}

/// `sqrt(<f, f>)` in binary64 from the exact squared norm.
pub fn hermitian_norm(f: &Jet, radius: &Scalar) -> Result<f64> {
    Ok(to_f64(&hermitian_inner(f, f, radius)?).sqrt())
}

/// Norm of a tuple of jets, squared norms summed.
pub fn hermitian_norm_many<'a>(
    fs: impl IntoIterator<Item = &'a Jet>,
    radius: &Scalar,
) -> Result<f64> {
    let mut acc = Scalar::zero();
    for f in fs {
        acc += hermitian_inner(f, f, radius)?;
    }
    Ok(to_f64(&acc).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn single_variable_value() {
        for n in 2..=4usize {
            for r in [int(1), frac(1, 2)] {
                let x = Jet::var(n, 3, 0);
                let got = hermitian_inner(&x, &x, &r).unwrap();
                assert_eq!(got, &r * &r / int(n as i64 + 1));
            }
        }
    }

    #[test]
    fn orthogonal_and_rejects_bad_radius() {
        let x = Jet::var(2, 3, 0);
        let y = Jet::var(2, 3, 1);
        assert_eq!(hermitian_inner(&x, &y, &int(1)).unwrap(), int(0));
        assert_eq!(hermitian_norm(&Jet::zero(2, 3), &int(1)).unwrap(), 0.0);
        assert_eq!(hermitian_norm(&x, &int(0)), Err(Error::NonPositiveRadius));
    }
}
