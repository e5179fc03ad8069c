use super::change::CoordChange;
use super::jet::{Jet, Substitution};
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Polynomial vector field `sum_i V^i d/dx^i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    comps: Vec<Jet>,
}

impl VectorField {
    pub fn new(comps: Vec<Jet>) -> Result<Self> {
        let m = comps.len();
        let Some(first) = comps.first() else {
            return Err(Error::InvalidInput("vector field in zero variables".into()));
        };
        for c in &comps {
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
        Ok(VectorField { comps })
    }

    pub fn zero(m: usize, order: u32) -> Self {
        VectorField {
            comps: vec![Jet::zero(m, order); m],
        }
    }

    /// The linear field `V^i = sum_k A[i][k] x^k`.
    pub fn linear(a: &Matrix, order: u32) -> Self {
        let m = a.rows();
        VectorField {
            comps: (0..m)
                .map(|i| {
                    let mut j = Jet::zero(m, order);
                    for k in 0..m {
                        j.add_term(Monomial::var(m, k), a.get(i, k).clone());
                    }
                    j
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn order(&self) -> u32 {
        self.comps[0].order()
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Jet {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Jet::is_zero)
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.comps.iter().all(Jet::vanishes_at_origin)
    }

    /// Matrix of degree-1 coefficients, `A[i][k]` = coefficient of `x^k` in `V^i`.
    pub fn linear_matrix(&self) -> Matrix {
        let m = self.dim();
        Matrix::from_fn(m, m, |i, k| self.comps[i].coeff(&Monomial::var(m, k)))
    }

    pub fn map(&self, f: impl FnMut(&Jet) -> Jet) -> VectorField {
        VectorField {
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        }
    }

    /// `V(f) = sum_i V^i d_i f`.
    pub fn apply(&self, f: &Jet) -> Jet {
        let mut acc = Jet::zero(f.nvars(), f.order());
        for (i, v) in self.comps.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let d = f.derivative(i);
            if !d.is_zero() {
                acc = &acc + &(v * &d);
            }
        }
        acc
    }

    /// `[V, W]^i = V(W^i) - W(V^i)`, so that `[V, W] f = V(W f) - W(V f)`.
    pub fn lie_bracket(&self, other: &VectorField) -> VectorField {
        VectorField {
            comps: (0..self.dim())
                .map(|i| &self.apply(&other.comps[i]) - &other.apply(&self.comps[i]))
                .collect(),
        }
    }

    /// The field in the coordinates `y = phi(x)`: `(phi_* V)^i = V(phi^i) ∘ phi^{-1}`.
    pub fn pushforward_with_inverse(&self, phi: &CoordChange, inv: &CoordChange) -> VectorField {
        let mut sub = Substitution::new(inv.components());
        VectorField {
            comps: phi
                .components()
                .iter()
                .map(|p| sub.apply(&self.apply(p)))
                .collect(),
        }
    }

    pub fn with_order(&self, order: u32) -> VectorField {
        self.map(|c| c.with_order(order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::change::invert_change;
    use crate::scalar::int;

    #[test]
    fn bracket_of_coordinate_fields() {
        let x = Jet::var(2, 4, 0);
        let y = Jet::var(2, 4, 1);
        let zero = Jet::zero(2, 4);
        // V = x d/dy, W = y d/dx: [V, W] = x d/dx - y d/dy
        let v = VectorField::new(vec![zero.clone(), x.clone()]).unwrap();
        let w = VectorField::new(vec![y.clone(), zero]).unwrap();
        let b = v.lie_bracket(&w);
        assert_eq!(b.comps(), &[x, -&y]);
    }

    #[test]
    fn pushforward_of_euler_field() {
        let x = Jet::var(1, 4, 0);
        let e = VectorField::new(vec![x.clone()]).unwrap();
        let phi = CoordChange::new(vec![&x + &x.pow(2)]).unwrap();
        let inv = invert_change(&phi).unwrap();
        let pushed = e.pushforward_with_inverse(&phi, &inv);
        // in the old coordinates the new component is E(y) = x + 2x^2
        let back = phi.pull(pushed.component(0));
        assert_eq!(back, &x + &x.pow(2).scale(&int(2)));
    }
}
