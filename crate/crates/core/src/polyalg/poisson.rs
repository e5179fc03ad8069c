use std::ops::Deref;

use num_traits::Zero;

use super::change::{invert_change, CoordChange};
use super::jet::{Jet, Substitution};
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::scalar::Scalar;

/// Matrix of jets `Pi^{ij}`, stored in full.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bivector {
    dim: usize,
    order: u32,
    entries: Vec<Jet>,
}

impl Bivector {
    pub fn zero(dim: usize, order: u32) -> Self {
        Bivector {
            dim,
            order,
            entries: vec![Jet::zero(dim, order); dim * dim],
        }
    }

    /// Builds an antisymmetric bivector from entries `(i, j, Pi^{ij})` with `i != j`.
    pub fn from_upper(
        dim: usize,
        order: u32,
        entries: impl IntoIterator<Item = (usize, usize, Jet)>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        let mut b = Bivector::zero(dim, order);
        for (i, j, f) in entries {
            if i >= dim || j >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: i.max(j) + 1,
                });
            }
            if i == j {
                if f.is_zero() {
                    continue;
                }
                return Err(Error::NotAntisymmetric { i, j });
            }
            b.check_jet(&f)?;
            b.set(i, j, f);
        }
        Ok(b)
    }

    /// Full matrix of entries in row-major order, no antisymmetry imposed.
    pub fn from_matrix(dim: usize, order: u32, entries: Vec<Jet>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let b = Bivector {
            dim,
            order,
            entries,
        };
        for e in &b.entries {
            b.check_jet(e)?;
        }
        Ok(b)
    }

    /// The linear bivector `Pi^{ij} = c^{ij}_k x^k` of a Lie algebra.
    pub fn linear(l: &LieAlgebra, order: u32) -> Self {
        let n = l.dim();
        let mut b = Bivector::zero(n, order);
        for i in 0..n {
            for j in i + 1..n {
                let mut f = Jet::zero(n, order);
                for k in 0..n {
                    f.add_term(Monomial::var(n, k), l.constant(i, j, k).clone());
                }
                b.set(i, j, f);
            }
        }
        b
    }

    fn check_jet(&self, f: &Jet) -> Result<()> {
        if f.nvars() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: f.nvars(),
            });
        }
        if f.order() != self.order {
            return Err(Error::TruncationMismatch {
                expected: self.order,
                found: f.order(),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Jet {
        &self.entries[i * self.dim + j]
    }

    /// Sets `Pi^{ij} = f` and `Pi^{ji} = -f`.
    pub fn set(&mut self, i: usize, j: usize, f: Jet) {
        assert_ne!(i, j);
        self.entries[j * self.dim + i] = -&f;
        self.entries[i * self.dim + j] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Jet::is_zero)
    }

    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim {
            for j in i..self.dim {
                if *self.get(i, j) != -self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.entries.iter().all(Jet::vanishes_at_origin)
    }

    /// `{f, g} = sum_{ij} Pi^{ij} d_i f d_j g`.
    pub fn bracket(&self, f: &Jet, g: &Jet) -> Jet {
        let df = f.gradient();
        let dg = g.gradient();
        let mut out = Jet::zero(self.dim, self.order);
        for i in 0..self.dim {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let p = self.get(i, j);
                if p.is_zero() || dg[j].is_zero() {
                    continue;
                }
                out = &out + &(&(p * &df[i]) * &dg[j]);
            }
        }
        out
    }

    /// Jacobiator components `J^{ijk}` for `i < j < k`.
    pub fn jacobiator(&self) -> Vec<((usize, usize, usize), Jet)> {
        let n = self.dim;
        let derivs: Vec<Vec<Jet>> = self.entries.iter().map(Jet::gradient).collect();
        let d = |a: usize, b: usize, l: usize| &derivs[a * n + b][l];
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut acc = Jet::zero(n, self.order);
                    for l in 0..n {
                        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                            let p = self.get(a, l);
                            if !p.is_zero() {
                                acc = &acc + &(p * d(b, c, l));
                            }
                        }
                    }
                    out.push(((i, j, k), acc));
                }
            }
        }
        out
    }

    /// Degree-1 coefficients `c^{ij}_k`, indexed `[(i * n + j) * n + k]`.
    pub fn linear_coefficients(&self) -> Vec<Scalar> {
        let n = self.dim;
        let mut c = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c[(i * n + j) * n + k] = self.get(i, j).coeff(&Monomial::var(n, k));
                }
            }
        }
        c
    }

    /// Keeps only the degree-1 part of every entry.
    pub fn linear_part(&self) -> Bivector {
        self.map(|f| f.homogeneous_part(1))
    }

    pub fn map(&self, f: impl FnMut(&Jet) -> Jet) -> Bivector {
        Bivector {
            dim: self.dim,
            order: self.order,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Lowest degree `>= 2` carrying a nonzero coefficient in some entry.
    pub fn lowest_nonlinear_degree(&self) -> Option<u32> {
        self.entries
            .iter()
            .filter_map(|f| f.terms().map(|(m, _)| m.degree()).find(|&d| d >= 2))
            .min()
    }

    pub fn with_order(&self, order: u32) -> Bivector {
        self.map(|f| f.with_order(order))
    }

    /// Expression in new coordinates `y = phi(x)`.
    pub fn pushforward(&self, phi: &CoordChange) -> Result<Bivector> {
        if phi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: phi.dim(),
            });
        }
        if phi.order() != self.order {
            return Err(Error::TruncationMismatch {
                expected: self.order,
                found: phi.order(),
            });
        }
        let inv = invert_change(phi)?;
        Ok(self.pushforward_with_inverse(phi, &inv))
    }

    /// As [`Bivector::pushforward`] with the inverse already known.
    pub fn pushforward_with_inverse(&self, phi: &CoordChange, inv: &CoordChange) -> Bivector {
        let n = self.dim;
        let grads: Vec<Vec<Jet>> = phi.components().iter().map(Jet::gradient).collect();
        // v[i][b] = sum_a d_a phi^i Pi^{ab}
        let v: Vec<Vec<Jet>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|b| {
                        let mut acc = Jet::zero(n, self.order);
                        for a in 0..n {
                            let p = self.get(a, b);
                            if !p.is_zero() && !grads[i][a].is_zero() {
                                acc = &acc + &(&grads[i][a] * p);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let mut sub = Substitution::new(inv.components());
        let mut out = Bivector::zero(n, self.order);
        for i in 0..n {
            for j in i + 1..n {
                let mut k = Jet::zero(n, self.order);
                for b in 0..n {
                    if !v[i][b].is_zero() && !grads[j][b].is_zero() {
                        k = &k + &(&v[i][b] * &grads[j][b]);
                    }
                }
                out.set(i, j, sub.apply(&k));
            }
        }
        out
    }
}

/// A bivector that is antisymmetric, vanishes at the origin and satisfies
/// the Jacobi identity through its truncation order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoissonJet(Bivector);

impl PoissonJet {
    pub fn new(b: Bivector) -> Result<Self> {
        if let Some((i, j)) = b.first_asymmetry() {
            return Err(Error::NotAntisymmetric { i, j });
        }
        if !b.vanishes_at_origin() {
            return Err(Error::NotVanishingAtOrigin {
                what: "bivector".into(),
            });
        }
        for (component, j) in b.jacobiator() {
            if let Some(degree) = j.lowest_degree() {
                return Err(Error::JacobiFailure {
                    order: b.order,
                    component,
                    degree,
                });
            }
        }
        Ok(PoissonJet(b))
    }

    pub fn linear(l: &LieAlgebra, order: u32) -> Self {
        PoissonJet(Bivector::linear(l, order))
    }

    pub fn zero(dim: usize, order: u32) -> Self {
        PoissonJet(Bivector::zero(dim, order))
    }

    pub fn bivector(&self) -> &Bivector {
        &self.0
    }

    pub fn into_bivector(self) -> Bivector {
        self.0
    }

    pub fn is_linear(&self) -> bool {
        self.0.lowest_nonlinear_degree().is_none()
    }

    /// Wraps a bivector known to be Poisson without re-checking Jacobi.
    pub(crate) fn trusted(b: Bivector) -> Self {
        debug_assert!(b.first_asymmetry().is_none());
        PoissonJet(b)
    }
}

impl Deref for PoissonJet {
    type Target = Bivector;
    fn deref(&self) -> &Bivector {
        &self.0
    }
}

fn check_fn(pi: &Bivector, f: &Jet) -> Result<()> {
    if f.nvars() != pi.dim() {
        return Err(Error::DimensionMismatch {
            expected: pi.dim(),
            found: f.nvars(),
        });
    }
    if f.order() != pi.order() {
        return Err(Error::TruncationMismatch {
            expected: pi.order(),
            found: f.order(),
        });
    }
    Ok(())
}

/// `{f, g}_Pi`, truncated at the common order.
pub fn poisson_bracket(f: &Jet, g: &Jet, pi: &PoissonJet) -> Result<Jet> {
    check_fn(pi, f)?;
    check_fn(pi, g)?;
    Ok(pi.bracket(f, g))
}

pub fn jacobiator(pi: &Bivector) -> Vec<((usize, usize, usize), Jet)> {
    pi.jacobiator()
}

/// `Pi` expressed in the coordinates `y = phi(x)`; the Jacobi identity is preserved.
pub fn pushforward(pi: &PoissonJet, phi: &CoordChange) -> Result<PoissonJet> {
    Ok(PoissonJet(pi.0.pushforward(phi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;
    #[test]
    fn sl2_bracket_sign() {
        let pi = PoissonJet::linear(&catalog::sl2(), 3);
        let x = Jet::var(3, 3, 0);
        let y = Jet::var(3, 3, 1);
        let z = Jet::var(3, 3, 2);
        assert_eq!(poisson_bracket(&x, &y, &pi).unwrap(), -&z);
    }

    #[test]
    fn noncyclic_bivector_fails_jacobi() {
        let n = 4;
        let x = Jet::var(3, n, 0);
        let y = Jet::var(3, n, 1);
        let z = Jet::var(3, n, 2);
        let b = Bivector::from_upper(3, n, [(0, 1, z.clone()), (1, 2, y)]).unwrap();
        let j = b.jacobiator();
        assert_eq!(j.len(), 1);
        assert_eq!(j[0].1, z);
        assert!(matches!(PoissonJet::new(b), Err(Error::JacobiFailure { .. })));
        // the cyclic variant is a Lie algebra, so its Jacobiator vanishes
        let c = Bivector::from_upper(3, n, [(0, 1, z), (1, 2, x), (2, 0, -&Jet::var(3, n, 1))]);
        assert!(c.unwrap().jacobiator().iter().all(|(_, j)| j.is_zero()));
    }
}
