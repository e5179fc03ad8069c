use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use super::algebra::LieAlgebra;
use crate::cohomology::{solve_coboundary, Cochain, CoboundarySolution, GModule};
use crate::error::{Error, Result};
use crate::linalg::{coordinates_in, span_basis, Matrix};
use crate::scalar::Scalar;

/// Reason a proposed pair `(s, r)` is not a Levi split.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeviViolation {
    #[error("s and r do not form a direct sum decomposition")]
    NotDirectSum,
    #[error("s is not closed under the bracket")]
    SNotSubalgebra,
    #[error("s is not semisimple")]
    SNotSemisimple,
    #[error("[g, r] is not contained in r")]
    RNotInvariant,
}

/// A certified decomposition `g = s ⊕ r` with `s` a semisimple subalgebra and
/// `r` an ideal.
#[derive(Clone, PartialEq, Eq)]
pub struct LeviSplit {
    algebra: LieAlgebra,
    s: Vec<Vec<Scalar>>,
    r: Vec<Vec<Scalar>>,
    s_algebra: LieAlgebra,
}

impl LeviSplit {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn s_basis(&self) -> &[Vec<Scalar>] {
        &self.s
    }

    pub fn r_basis(&self) -> &[Vec<Scalar>] {
        &self.r
    }

    /// Structure constants of `s` in the given basis.
    pub fn s_algebra(&self) -> &LieAlgebra {
        &self.s_algebra
    }

    /// Matrix whose rows are the `s` basis followed by the `r` basis.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.s.iter().chain(&self.r).cloned().collect())
    }
}

impl fmt::Debug for LeviSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LeviSplit")
            .field("s", &self.s)
            .field("r", &self.r)
            .finish()
    }
}

/// Checks the split conditions in order: direct sum, closure of `s`,
/// semisimplicity of `s`, invariance of `r`.
pub fn verify_levi_split(
    l: &LieAlgebra,
    s: &[Vec<Scalar>],
    r: &[Vec<Scalar>],
) -> std::result::Result<LeviSplit, LeviViolation> {
    let n = l.dim();
    if s.len() + r.len() != n || s.iter().chain(r).any(|v| v.len() != n) {
        return Err(LeviViolation::NotDirectSum);
    }
    let all: Vec<Vec<Scalar>> = s.iter().chain(r).cloned().collect();
    if span_basis(&all, n).len() != n {
        return Err(LeviViolation::NotDirectSum);
    }
    let s_algebra = if s.is_empty() {
        LieAlgebra::abelian(0)
    } else {
        let sa = l.restrict(s).ok_or(LeviViolation::SNotSubalgebra)?;
        if !sa.is_semisimple() {
            return Err(LeviViolation::SNotSemisimple);
        }
        sa
    };
    for x in 0..n {
        let ex = l.basis_vector(x);
        for v in r {
            let b = l.bracket(&ex, v);
            if b.iter().any(|c| !c.is_zero()) && coordinates_in(r, &b).is_none() {
                return Err(LeviViolation::RNotInvariant);
            }
        }
    }
    Ok(LeviSplit {
        algebra: l.clone(),
        s: s.to_vec(),
        r: r.to_vec(),
        s_algebra,
    })
}

/// Computes a Levi factor by lifting `g / rad` through the derived series of
/// the radical, one 2-coboundary equation per step.
pub fn levi_lift(l: &LieAlgebra) -> Result<LeviSplit> {
    let n = l.dim();
    let rad = l.radical();
    let certify = |s: &[Vec<Scalar>]| {
        verify_levi_split(l, s, &rad)
            .map_err(|v| Error::SolverFailure(format!("Levi lift produced an invalid split: {v}")))
    };
    if rad.is_empty() || rad.len() == n {
        let s: Vec<Vec<Scalar>> = if rad.is_empty() {
            (0..n).map(|i| l.basis_vector(i)).collect()
        } else {
            Vec::new()
        };
        return certify(&s);
    }

    // initial lift: standard basis vectors completing the radical, lowest index first
    let mut u: Vec<Vec<Scalar>> = Vec::new();
    let mut span = rad.clone();
    for i in 0..n {
        let e = l.basis_vector(i);
        let mut trial = span.clone();
        trial.push(e.clone());
        if span_basis(&trial, n).len() > span.len() {
            span = trial;
            u.push(e);
        }
    }
    let q = u.len();

    // structure constants of g / r in the basis u mod r
    let quotient_coords = |v: &[Scalar]| -> Vec<Scalar> {
        let basis: Vec<Vec<Scalar>> = u.iter().chain(&rad).cloned().collect();
        let c = coordinates_in(&basis, v).expect("u and r span g");
        c[..q].to_vec()
    };
    let mut cbar = vec![Scalar::zero(); q * q * q];
    for a in 0..q {
        for b in 0..q {
            let coords = quotient_coords(&l.bracket(&u[a], &u[b]));
            for (k, v) in coords.into_iter().enumerate() {
                cbar[(a * q + b) * q + k] = v;
            }
        }
    }
    let sbar = LieAlgebra::new(q, cbar).map_err(|e| Error::SolverFailure(e.to_string()))?;

    let mut current = rad.clone();
    while !current.is_empty() {
        let next = derived_span(l, &current);
        // complement of `next` inside `current`, in reduced form
        let comp = complement(&next, &current, n);
        let vdim = comp.len();
        let coords_mod_next = |v: &[Scalar]| -> Vec<Scalar> {
            let basis: Vec<Vec<Scalar>> = comp.iter().chain(&next).cloned().collect();
            let c = coordinates_in(&basis, v).expect("vector lies in the current ideal");
            c[..vdim].to_vec()
        };
        let rho: Vec<Matrix> = (0..q)
            .map(|a| {
                let cols: Vec<Vec<Scalar>> =
                    comp.iter().map(|w| coords_mod_next(&l.bracket(&u[a], w))).collect();
                Matrix::from_fn(vdim, vdim, |i, j| cols[j][i].clone())
            })
            .collect();
        let module = GModule::from_dense(sbar.clone(), &rho)
            .map_err(|e| Error::SolverFailure(e.to_string()))?
            .shared();
        // omega(a, b) = [u_a, u_b] - cbar^{ab}_c u_c, which lies in `current`
        let mut values = Vec::with_capacity(q * (q.saturating_sub(1)) / 2 * vdim);
        for a in 0..q {
            for b in a + 1..q {
                let mut w = l.bracket(&u[a], &u[b]);
                for (c, uc) in u.iter().enumerate() {
                    let k = sbar.constant(a, b, c);
                    if !k.is_zero() {
                        for (wi, ui) in w.iter_mut().zip(uc) {
                            *wi -= k * ui;
                        }
                    }
                }
                values.extend(coords_mod_next(&w));
            }
        }
        let omega = Cochain::new(module, 2, values)?;
        // u_a + tau_a closes modulo `next` exactly when d tau = -omega
        let sigma = match solve_coboundary(&omega)? {
            CoboundarySolution::Primitive(s) => s,
            CoboundarySolution::Obstruction(_) => {
                return Err(Error::SolverFailure(
                    "second cohomology of a semisimple quotient is nonzero".into(),
                ))
            }
        };
        for (a, ua) in u.iter_mut().enumerate() {
            for (j, w) in comp.iter().enumerate() {
                let t = sigma.value(&[a], j);
                if !t.is_zero() {
                    for (ui, wi) in ua.iter_mut().zip(w) {
                        *ui -= &t * wi;
                    }
                }
            }
        }
        current = next;
    }
    certify(&u)
}

fn derived_span(l: &LieAlgebra, basis: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut gens = Vec::new();
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            gens.push(l.bracket(&basis[a], &basis[b]));
        }
    }
    span_basis(&gens, l.dim())
}

/// Vectors of `outer` completing `inner` to a basis of `span(outer)`.
fn complement(inner: &[Vec<Scalar>], outer: &[Vec<Scalar>], n: usize) -> Vec<Vec<Scalar>> {
    let mut span = inner.to_vec();
    let mut out = Vec::new();
    for v in outer {
        let mut trial = span.clone();
        trial.push(v.clone());
        if span_basis(&trial, n).len() > span.len() {
            span = trial;
            out.push(v.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;
    use crate::scalar::int;

    fn e(n: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![int(0); n];
        v[i] = int(1);
        v
    }

    #[test]
    fn gl2_splits() {
        let gl2 = catalog::gl2();
        let s: Vec<_> = (0..3).map(|i| e(4, i)).collect();
        assert!(verify_levi_split(&gl2, &s, &[e(4, 3)]).is_ok());
        let tilted = vec![int(1), int(0), int(0), int(1)];
        assert_eq!(
            verify_levi_split(&gl2, &s, &[tilted]),
            Err(LeviViolation::RNotInvariant)
        );
        assert_eq!(
            verify_levi_split(&gl2, &s, &[e(4, 0)]),
            Err(LeviViolation::NotDirectSum)
        );
        let partial = vec![e(4, 0), e(4, 1)];
        assert_eq!(
            verify_levi_split(&gl2, &partial, &[e(4, 2), e(4, 3)]),
            Err(LeviViolation::SNotSubalgebra)
        );
    }

    #[test]
    fn lift_semidirect_in_scrambled_basis() {
        let g = catalog::sl2_semidirect_r2();
        // an upper-triangular change that mixes the radical into the sl(2) part
        let p = Matrix::from_fn(5, 5, |i, j| {
            if i == j {
                int(1)
            } else if j > i {
                int(((i + 2 * j) % 3) as i64 - 1)
            } else {
                int(0)
            }
        });
        let scrambled = g.change_basis(&p).unwrap();
        let split = levi_lift(&scrambled).unwrap();
        assert_eq!(split.s_basis().len(), 3);
        assert_eq!(split.r_basis().len(), 2);
        assert!(verify_levi_split(&scrambled, split.s_basis(), split.r_basis()).is_ok());
    }

    #[test]
    fn lift_trivial_cases() {
        let so3 = levi_lift(&catalog::so3()).unwrap();
        assert_eq!(so3.s_basis().len(), 3);
        assert!(so3.r_basis().is_empty());
        let aff = levi_lift(&catalog::aff1()).unwrap();
        assert!(aff.s_basis().is_empty());
        assert_eq!(aff.r_basis().len(), 2);
    }
}
