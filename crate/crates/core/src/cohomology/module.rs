use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::{Matrix, SparseMatrix};
use crate::polyalg::{default_names, Jet, Monomial};
use crate::scalar::Scalar;

/// Finite-dimensional representation of a Lie algebra by exact matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    algebra: LieAlgebra,
    dim: usize,
    rho: Vec<SparseMatrix>,
    labels: Vec<String>,
    poly: Option<PolyBasis>,
}

impl GModule {
    /// Validates `rho([X_i, X_j]) = [rho(X_i), rho(X_j)]`.
    pub fn new(algebra: LieAlgebra, rho: Vec<SparseMatrix>, labels: Vec<String>) -> Result<Self> {
        let m = GModule::unchecked(algebra, rho, labels)?;
        m.check()?;
        Ok(m)
    }

    pub fn from_dense(algebra: LieAlgebra, rho: &[Matrix]) -> Result<Self> {
        let d = rho.first().map_or(0, Matrix::rows);
        let labels = (0..d).map(|i| format!("v{}", i + 1)).collect();
        GModule::new(algebra, rho.iter().map(SparseMatrix::from_dense).collect(), labels)
    }

    /// The trivial module of dimension `d`.
    pub fn trivial(algebra: LieAlgebra, d: usize) -> Self {
        let n = algebra.dim();
        GModule {
            algebra,
            dim: d,
            rho: vec![SparseMatrix::zeros(d, d); n],
            labels: (0..d).map(|i| format!("v{}", i + 1)).collect(),
            poly: None,
        }
    }

    /// The adjoint module.
    pub fn adjoint(algebra: LieAlgebra) -> Self {
        let n = algebra.dim();
        let rho = (0..n).map(|i| SparseMatrix::from_dense(&algebra.ad(i))).collect();
        GModule {
            algebra,
            dim: n,
            rho,
            labels: (0..n).map(|i| format!("e{}", i + 1)).collect(),
            poly: None,
        }
    }

    fn unchecked(algebra: LieAlgebra, rho: Vec<SparseMatrix>, labels: Vec<String>) -> Result<Self> {
        if rho.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: rho.len(),
            });
        }
        let d = labels.len();
        if rho.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::NotRepresentation(
                "matrix shape differs from the module dimension".into(),
            ));
        }
        Ok(GModule {
            algebra,
            dim: d,
            rho,
            labels,
            poly: None,
        })
    }

    /// Exact check of the homomorphism property on all basis pairs.
    pub fn check(&self) -> Result<()> {
        let n = self.algebra.dim();
        for i in 0..n {
            for j in i + 1..n {
                let mut lhs = SparseMatrix::zeros(self.dim, self.dim);
                for k in 0..n {
                    let c = self.algebra.constant(i, j, k);
                    if !c.is_zero() {
                        lhs = lhs.add_scaled(&self.rho[k], c);
                    }
                }
                let comm = self.rho[i]
                    .mul(&self.rho[j])
                    .add_scaled(&self.rho[j].mul(&self.rho[i]), &-Scalar::from_integer(1.into()));
                if lhs != comm {
                    return Err(Error::NotRepresentation(format!("fails on the pair ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn shared(self) -> Arc<GModule> {
        Arc::new(self)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self, i: usize) -> &SparseMatrix {
        &self.rho[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Basis description when the module consists of polynomial tuples.
    pub fn poly_basis(&self) -> Option<&PolyBasis> {
        self.poly.as_ref()
    }

    pub fn act(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.rho[i].mul_vec(v)
    }
}

/// Basis of `q`-tuples of polynomials supported on a fixed list of monomials.
///
/// Index of `(component c, monomial k)` is `c * monomials.len() + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyBasis {
    nvars: usize,
    components: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl PolyBasis {
    pub fn new(nvars: usize, components: usize, monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        PolyBasis {
            nvars,
            components,
            monomials,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.components * self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn position(&self, component: usize, m: &Monomial) -> Option<usize> {
        self.index.get(m).map(|k| component * self.monomials.len() + k)
    }

    pub fn split(&self, idx: usize) -> (usize, &Monomial) {
        let nm = self.monomials.len();
        (idx / nm, &self.monomials[idx % nm])
    }

    /// Coordinates of a polynomial tuple; `None` if it leaves the basis.
    pub fn to_vector(&self, comps: &[Jet]) -> Option<Vec<Scalar>> {
        assert_eq!(comps.len(), self.components);
        let mut v = vec![Scalar::zero(); self.len()];
        for (c, jet) in comps.iter().enumerate() {
            for (m, coef) in jet.terms() {
                v[self.position(c, m)?] = coef.clone();
            }
        }
        Some(v)
    }

    pub fn from_vector(&self, v: &[Scalar], order: u32) -> Vec<Jet> {
        let nm = self.monomials.len();
        (0..self.components)
            .map(|c| {
                let mut j = Jet::zero(self.nvars, order);
                for (k, m) in self.monomials.iter().enumerate() {
                    j.add_term(m.clone(), v[c * nm + k].clone());
                }
                j
            })
            .collect()
    }
}

/// Module of polynomial tuples: the algebra acts on each polynomial by the
/// linear vector fields `V_i^j = sum_k A_i[j][k] x^k` and mixes components by
/// `twist_i`, so `X_i (f e_c) = V_i(f) e_c + sum_{c'} twist_i[c'][c] f e_{c'}`.
pub fn twisted_polynomial_module(
    algebra: &LieAlgebra,
    fields: &[Matrix],
    monomials: Vec<Monomial>,
    twist: Option<&[Matrix]>,
    names: Option<&[String]>,
) -> Result<GModule> {
    let n = algebra.dim();
    if fields.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: fields.len(),
        });
    }
    let m = monomials
        .first()
        .map(Monomial::nvars)
        .or_else(|| fields.first().map(Matrix::rows))
        .unwrap_or(0);
    let q = twist.and_then(|t| t.first()).map_or(1, Matrix::rows);
    if let Some(t) = twist {
        if t.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.len(),
            });
        }
    }
    let basis = PolyBasis::new(m, q, monomials);
    let nm = basis.monomials.len();
    let mut rho = Vec::with_capacity(n);
    for i in 0..n {
        let a = &fields[i];
        let mut trip = Vec::new();
        for (k, mu) in basis.monomials.iter().enumerate() {
            // V_i(mu) = sum_j mu_j A[j][l] mu / x_j * x_l
            let mut image: Vec<(usize, Scalar)> = Vec::new();
            for j in 0..m {
                let Some(q_mon) = mu.div_var(j) else { continue };
                let e = Scalar::from_integer(mu.exp(j).into());
                for l in 0..m {
                    let coef = a.get(j, l);
                    if coef.is_zero() {
                        continue;
                    }
                    let target = q_mon.mul_var(l);
                    let Some(&t) = basis.index.get(&target) else {
                        return Err(Error::InvalidInput(
                            "monomial basis is not invariant under the action".into(),
                        ));
                    };
                    image.push((t, &e * coef));
                }
            }
            for c in 0..q {
                for (t, v) in &image {
                    trip.push((c * nm + t, c * nm + k, v.clone()));
                }
                if let Some(tw) = twist {
                    for c2 in 0..q {
                        let b = tw[i].get(c2, c);
                        if !b.is_zero() {
                            trip.push((c2 * nm + k, c * nm + k, b.clone()));
                        }
                    }
                }
            }
        }
        rho.push(SparseMatrix::from_triplets(basis.len(), basis.len(), trip));
    }
    let default;
    let names = match names {
        Some(nm) => nm,
        None => {
            default = default_names(m);
            &default
        }
    };
    let mut labels = Vec::with_capacity(basis.len());
    for c in 0..q {
        for mu in &basis.monomials {
            let mut s = String::new();
            mu.write_with(names, &mut s).expect("writing to a String");
            if q > 1 {
                s = format!("{s} [{}]", c + 1);
            }
            labels.push(s);
        }
    }
    let mut module = GModule::unchecked(algebra.clone(), rho, labels)?;
    module.poly = Some(basis);
    Ok(module)
}

/// Homogeneous polynomials of degree `d` in `m` variables, where `rep` is a
/// linear representation on the variables: `X_i x^j = sum_k rep_i[k][j] x^k`.
pub fn induced_polynomial_module(
    algebra: &LieAlgebra,
    m: usize,
    rep: &[Matrix],
    d: u32,
) -> Result<GModule> {
    if rep.iter().any(|r| r.rows() != m || r.cols() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: rep.first().map_or(0, Matrix::rows),
        });
    }
    algebra.check_representation(rep)?;
    let fields: Vec<Matrix> = rep.iter().map(Matrix::transpose).collect();
    twisted_polynomial_module(algebra, &fields, Monomial::all_of_degree(m, d), None, None)
}

/// Linear Hamiltonian fields `V_i = {x^i, .}` of the linear Poisson structure,
/// as matrices `A_i[j][k] = c^{ij}_k`.
pub fn hamiltonian_fields(algebra: &LieAlgebra) -> Vec<Matrix> {
    let n = algebra.dim();
    (0..n)
        .map(|i| Matrix::from_fn(n, n, |j, k| algebra.constant(i, j, k).clone()))
        .collect()
}

/// Degree-`d` polynomials on the dual of the algebra with the coadjoint action
/// `X_i f = {x^i, f}`; the module of Poisson remainders.
pub fn poisson_polynomial_module(algebra: &LieAlgebra, d: u32) -> GModule {
    let n = algebra.dim();
    twisted_polynomial_module(
        algebra,
        &hamiltonian_fields(algebra),
        Monomial::all_of_degree(n, d),
        None,
        None,
    )
    .expect("homogeneous polynomials are invariant under linear fields")
}

/// Vector fields with coefficients on `monomials`, acted on by `X Z = [L_X, Z]`
/// where `L_X` is the linear field with matrix `fields[X]`.
pub fn vector_field_module(
    algebra: &LieAlgebra,
    fields: &[Matrix],
    monomials: Vec<Monomial>,
) -> Result<GModule> {
    let twist: Vec<Matrix> = fields.iter().map(|a| a.scale(&-Scalar::from_integer(1.into()))).collect();
    twisted_polynomial_module(algebra, fields, monomials, Some(&twist), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;

    #[test]
    fn so3_quadratics_have_one_invariant() {
        let so3 = catalog::so3();
        let v = poisson_polynomial_module(&so3, 2);
        assert_eq!(v.dim(), 6);
        v.check().unwrap();
        // brute-force common kernel of the three action matrices
        let stacked = SparseMatrix::from_triplets(
            18,
            6,
            (0..3).flat_map(|i| {
                let r = v.rho(i).clone();
                (0..6).flat_map(move |row| {
                    r.row(row).clone().into_iter().map(move |(c, x)| (i * 6 + row, c, x))
                })
            }),
        );
        let ker = stacked.kernel();
        assert_eq!(ker.len(), 1);
        let x = Jet::var(3, 2, 0);
        let y = Jet::var(3, 2, 1);
        let z = Jet::var(3, 2, 2);
        let casimir = &(&x.pow(2) + &y.pow(2)) + &z.pow(2);
        let cv = v.poly_basis().unwrap().to_vector(&[casimir]).unwrap();
        assert_eq!(cv, ker[0]);
    }

    #[test]
    fn degree_one_recovers_rep() {
        let so3 = catalog::so3();
        let rep: Vec<Matrix> = (0..3).map(|i| so3.ad(i)).collect();
        let v = induced_polynomial_module(&so3, 3, &rep, 1).unwrap();
        for i in 0..3 {
            assert_eq!(v.rho(i).to_dense(), rep[i]);
        }
    }

    #[test]
    fn vector_fields_form_module() {
        let sl2 = catalog::sl2();
        let w = vector_field_module(&sl2, &hamiltonian_fields(&sl2), Monomial::all_of_degree(3, 2))
            .unwrap();
        assert_eq!(w.dim(), 18);
        w.check().unwrap();
        let abelian = catalog::abelian(2);
        let t = induced_polynomial_module(
            &abelian,
            2,
            &[Matrix::zeros(2, 2), Matrix::zeros(2, 2)],
            3,
        )
        .unwrap();
        assert!(t.rho(0).is_zero() && t.rho(1).is_zero());
    }
}
