use super::jet::Jet;
use super::poisson::Bivector;
use crate::error::{Error, Result};

/// Polynomial 1-form `sum_i alpha_i dx^i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyOneForm {
    coeffs: Vec<Jet>,
}

impl PolyOneForm {
    pub fn new(coeffs: Vec<Jet>) -> Result<Self> {
        let m = coeffs.len();
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidInput("1-form in zero variables".into()));
        };
        for c in &coeffs {
            if c.nvars() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: c.nvars(),
                });
            }
            if c.order() != first.order() {
                return Err(Error::TruncationMismatch {
                    expected: first.order(),
                    found: c.order(),
                });
            }
        }
        Ok(PolyOneForm { coeffs })
    }

    /// `df`.
    pub fn exact(f: &Jet) -> Self {
        PolyOneForm {
            coeffs: f.gradient(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn order(&self) -> u32 {
        self.coeffs[0].order()
    }

    pub fn coeffs(&self) -> &[Jet] {
        &self.coeffs
    }

    pub fn scale_by(&self, f: &Jet) -> PolyOneForm {
        PolyOneForm {
            coeffs: self.coeffs.iter().map(|a| a * f).collect(),
        }
    }

    pub fn add(&self, other: &PolyOneForm) -> PolyOneForm {
        PolyOneForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &PolyOneForm) -> PolyOneForm {
        PolyOneForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Jet::is_zero)
    }

    pub fn with_order(&self, order: u32) -> PolyOneForm {
        PolyOneForm {
            coeffs: self.coeffs.iter().map(|a| a.with_order(order)).collect(),
        }
    }
}

/// `#alpha`, with components `(#alpha)^j = sum_i alpha_i Pi^{ij}`.
pub fn sharp(alpha: &PolyOneForm, pi: &Bivector) -> Vec<Jet> {
    let n = pi.dim();
    (0..n)
        .map(|j| {
            (0..n).fold(Jet::zero(n, pi.order()), |acc, i| {
                &acc + &(&alpha.coeffs[i] * pi.get(i, j))
            })
        })
        .collect()
}

/// `(L_V beta)_k = V^j d_j beta_k + beta_j d_k V^j`.
pub fn lie_derivative(v: &[Jet], beta: &PolyOneForm) -> PolyOneForm {
    let n = beta.dim();
    let coeffs = (0..n)
        .map(|k| {
            let mut acc = Jet::zero(n, beta.order());
            for j in 0..n {
                acc = &acc + &(&v[j] * &beta.coeffs[k].derivative(j));
                acc = &acc + &(&beta.coeffs[j] * &v[j].derivative(k));
            }
            acc
        })
        .collect();
    PolyOneForm { coeffs }
}

/// `[alpha, beta]_Pi = L_{#alpha} beta - L_{#beta} alpha - d Pi(alpha, beta)`.
///
/// The derivatives in this formula lose one degree of information, so the
/// result is returned at order `N - 1`.
pub fn koszul_bracket(alpha: &PolyOneForm, beta: &PolyOneForm, pi: &Bivector) -> Result<PolyOneForm> {
    for form in [alpha, beta] {
        if form.dim() != pi.dim() {
            return Err(Error::DimensionMismatch {
                expected: pi.dim(),
                found: form.dim(),
            });
        }
        if form.order() != pi.order() {
            return Err(Error::TruncationMismatch {
                expected: pi.order(),
                found: form.order(),
            });
        }
    }
    if pi.order() < 2 {
        return Err(Error::OrderTooLarge {
            requested: 2,
            available: pi.order(),
        });
    }
    let sa = sharp(alpha, pi);
    let sb = sharp(beta, pi);
    let pairing = (0..pi.dim()).fold(Jet::zero(pi.dim(), pi.order()), |acc, j| {
        &acc + &(&sa[j] * &beta.coeffs[j])
    });
    let out = lie_derivative(&sa, beta)
        .sub(&lie_derivative(&sb, alpha))
        .sub(&PolyOneForm::exact(&pairing));
    Ok(out.with_order(pi.order() - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;
    use crate::polyalg::poisson::PoissonJet;
    use crate::scalar::int;

    #[test]
    fn exact_forms_bracket_to_differential() {
        let pi = PoissonJet::linear(&catalog::so3(), 6);
        let x = Jet::var(3, 6, 0);
        let y = Jet::var(3, 6, 1);
        let z = Jet::var(3, 6, 2);
        let f = &x.pow(2) + &(&y * &z);
        let g = &z - &x.pow(3);
        let lhs = koszul_bracket(&PolyOneForm::exact(&f), &PolyOneForm::exact(&g), &pi).unwrap();
        let rhs = PolyOneForm::exact(&pi.bracket(&f, &g)).with_order(5);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_bivector() {
        let pi = Bivector::zero(2, 3);
        let x = Jet::var(2, 3, 0);
        let a = PolyOneForm::new(vec![x.clone(), x.scale(&int(2))]).unwrap();
        assert!(koszul_bracket(&a, &a, &pi).unwrap().is_zero());
    }
}
