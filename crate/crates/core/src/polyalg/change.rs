use num_traits::Zero;

use super::jet::{Jet, Substitution};
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Formal coordinate change `y = phi(x)`, component `i` being `y^i` as a jet in `x`.
///
/// Composition convention: [`compose_change`]`(phi, psi)` is `psi ∘ phi`,
/// i.e. `phi` is applied first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordChange {
    components: Vec<Jet>,
}

impl CoordChange {
    pub fn new(components: Vec<Jet>) -> Result<Self> {
        let m = components.len();
        let Some(first) = components.first() else {
            return Err(Error::InvalidInput("coordinate change in zero variables".into()));
        };
        let order = first.order();
        for c in &components {
            if c.nvars() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: c.nvars(),
                });
            }
            if c.order() != order {
                return Err(Error::TruncationMismatch {
                    expected: order,
                    found: c.order(),
                });
            }
            if !c.vanishes_at_origin() {
                return Err(Error::NotVanishingAtOrigin {
                    what: "coordinate change".into(),
                });
            }
        }
        let change = CoordChange { components };
        if change.linear_part().determinant().is_zero() {
            return Err(Error::SingularLinearPart);
        }
        Ok(change)
    }

    pub fn identity(m: usize, order: u32) -> Self {
        CoordChange {
            components: (0..m).map(|i| Jet::var(m, order, i)).collect(),
        }
    }

    /// The linear change `y = A x`.
    pub fn linear(a: &Matrix, order: u32) -> Result<Self> {
        let m = a.rows();
        if a.cols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: a.cols(),
            });
        }
        let comps = (0..m)
            .map(|i| {
                let mut j = Jet::zero(m, order);
                for k in 0..m {
                    j.add_term(Monomial::var(m, k), a.get(i, k).clone());
                }
                j
            })
            .collect();
        CoordChange::new(comps)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> u32 {
        self.components[0].order()
    }

    pub fn components(&self) -> &[Jet] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Jet {
        &self.components[i]
    }

    pub fn is_identity(&self) -> bool {
        *self == CoordChange::identity(self.dim(), self.order())
    }

    /// Matrix `A` with `A[i][k]` the coefficient of `x^k` in `phi^i`.
    pub fn linear_part(&self) -> Matrix {
        let m = self.dim();
        Matrix::from_fn(m, m, |i, k| self.components[i].coeff(&Monomial::var(m, k)))
    }

    /// `f ∘ phi`: the function `f(y)` written in the `x` coordinates.
    pub fn pull(&self, f: &Jet) -> Jet {
        f.compose(&self.components)
    }

    pub fn pull_many(&self, fs: &[Jet]) -> Vec<Jet> {
        let mut sub = Substitution::new(&self.components);
        fs.iter().map(|f| sub.apply(f)).collect()
    }

    pub fn with_order(&self, order: u32) -> CoordChange {
        CoordChange {
            components: self.components.iter().map(|c| c.with_order(order)).collect(),
        }
    }
}

fn check_pair(a: &CoordChange, b: &CoordChange) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if a.order() != b.order() {
        return Err(Error::TruncationMismatch {
            expected: a.order(),
            found: b.order(),
        });
    }
    Ok(())
}

/// `psi ∘ phi`, truncated at the common order.
pub fn compose_change(phi: &CoordChange, psi: &CoordChange) -> Result<CoordChange> {
    check_pair(phi, psi)?;
    Ok(CoordChange {
        components: phi.pull_many(&psi.components),
    })
}

/// The inverse change, exact through the truncation order.
///
/// Writing `phi = A x + h(x)`, the near-identity map `A^{-1} phi = x + g(x)`
/// is inverted by the iteration `chi <- y - g(chi)`, each pass fixing one
/// more degree; then `phi^{-1}(y) = chi(A^{-1} y)`.
pub fn invert_change(phi: &CoordChange) -> Result<CoordChange> {
    let m = phi.dim();
    let n = phi.order();
    let a_inv = phi.linear_part().inverse().ok_or(Error::SingularLinearPart)?;
    let a_inv_phi: Vec<Jet> = (0..m)
        .map(|i| {
            let mut acc = Jet::zero(m, n);
            for k in 0..m {
                acc.add_scaled(&phi.components[k], a_inv.get(i, k));
            }
            acc
        })
        .collect();
    let g: Vec<Jet> = a_inv_phi.iter().map(|c| c.filter(|mo| mo.degree() >= 2)).collect();
    let id = CoordChange::identity(m, n);
    let mut chi = id.components.clone();
    if g.iter().any(|c| !c.is_zero()) {
        for _ in 1..n {
            let mut sub = Substitution::new(&chi);
            let next: Vec<Jet> = (0..m)
                .map(|i| &id.components[i] - &sub.apply(&g[i]))
                .collect();
            chi = next;
        }
    }
    let lin_inv = CoordChange::linear(&a_inv, n)?;
    Ok(CoordChange {
        components: lin_inv.pull_many(&chi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn one_variable_inverse() {
        let x = Jet::var(1, 5, 0);
        let phi = CoordChange::new(vec![&x + &x.pow(2)]).unwrap();
        let inv = invert_change(&phi).unwrap();
        let expected = [(1, 1), (2, -1), (3, 2), (4, -5), (5, 14)]
            .iter()
            .fold(Jet::zero(1, 5), |acc, &(d, c)| {
                &acc + &x.pow(d).scale(&int(c))
            });
        assert_eq!(inv.component(0), &expected);
        let round = compose_change(&phi, &inv).unwrap();
        assert!(round.is_identity());
    }

    #[test]
    fn rejects_bad_changes() {
        let x = Jet::var(2, 3, 0);
        let y = Jet::var(2, 3, 1);
        assert_eq!(
            CoordChange::new(vec![x.clone(), x.clone()]),
            Err(Error::SingularLinearPart)
        );
        let shifted = &x + &Jet::constant(2, 3, int(1));
        assert!(matches!(
            CoordChange::new(vec![shifted, y]),
            Err(Error::NotVanishingAtOrigin { .. })
        ));
    }

    #[test]
    fn inverse_with_general_linear_part() {
        let x = Jet::var(2, 4, 0);
        let y = Jet::var(2, 4, 1);
        let phi = CoordChange::new(vec![
            &(&x.scale(&int(2)) + &y) + &(&x * &y),
            &(&x + &y) - &x.pow(3),
        ])
        .unwrap();
        let inv = invert_change(&phi).unwrap();
        assert!(compose_change(&phi, &inv).unwrap().is_identity());
        assert!(compose_change(&inv, &phi).unwrap().is_identity());
    }
}
