use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{coordinates_in, span_basis, Matrix};
use crate::polyalg::PoissonJet;
use crate::scalar::Scalar;

/// Lie algebra given by structure constants `[X_i, X_j] = sum_k c^{ij}_k X_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Scalar>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(dim: usize, constants: Vec<Scalar>) -> Result<Self> {
        if constants.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: constants.len(),
            });
        }
        let l = LieAlgebra { dim, c: constants };
        l.validate()?;
        Ok(l)
    }

    /// From entries `(i, j, k, c^{ij}_k)`; the entry for `(j, i)` is implied.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut c = vec![Scalar::zero(); dim * dim * dim];
        for (i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::NotLieAlgebra(format!(
                    "index ({i}, {j}, {k}) out of range for dimension {dim}"
                )));
            }
            if i == j {
                if v.is_zero() {
                    continue;
                }
                return Err(Error::NotLieAlgebra(format!("[X{i}, X{i}] must vanish")));
            }
            c[(i * dim + j) * dim + k] += &v;
            c[(j * dim + i) * dim + k] -= v;
        }
        LieAlgebra::new(dim, c)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            c: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    pub(crate) fn unchecked(dim: usize, c: Vec<Scalar>) -> Self {
        LieAlgebra { dim, c }
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if *self.constant(i, j, k) != -self.constant(j, i, k) {
                        return Err(Error::NotLieAlgebra(format!(
                            "c^({i},{j})_{k} is not antisymmetric"
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut s = Scalar::zero();
                        for m in 0..n {
                            s += self.constant(i, j, m) * self.constant(m, k, l);
                            s += self.constant(j, k, m) * self.constant(m, i, l);
                            s += self.constant(k, i, m) * self.constant(m, j, l);
                        }
                        if !s.is_zero() {
                            return Err(Error::NotLieAlgebra(format!(
                                "Jacobi identity fails on ({i}, {j}, {k})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn constants(&self) -> &[Scalar] {
        &self.c
    }

    /// Nonzero entries `(i, j, k, c^{ij}_k)` with `i < j`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let v = self.constant(i, j, k);
                    if !v.is_zero() {
                        out.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() || i == j {
                    continue;
                }
                let uv = &u[i] * &v[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o += &uv * c;
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::from_integer(1.into());
        v
    }

    /// Matrix of `ad X_i`: entry `(k, j)` is `c^{ij}_k`.
    pub fn ad(&self, i: usize) -> Matrix {
        let n = self.dim;
        Matrix::from_fn(n, n, |k, j| self.constant(i, j, k).clone())
    }

    /// Matrix of `ad u` for an arbitrary element.
    pub fn ad_vec(&self, u: &[Scalar]) -> Matrix {
        let n = self.dim;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.bracket(u, &self.basis_vector(j))).collect();
        Matrix::from_fn(n, n, |k, j| cols[j][k].clone())
    }

    /// Killing form `K_{ij} = tr(ad X_i ad X_j) = sum_{k,l} c^{ik}_l c^{jl}_k`.
    pub fn killing_form(&self) -> Matrix {
        let n = self.dim;
        Matrix::from_fn(n, n, |i, j| {
            let mut s = Scalar::zero();
            for k in 0..n {
                for l in 0..n {
                    let a = self.constant(i, k, l);
                    if !a.is_zero() {
                        s += a * self.constant(j, l, k);
                    }
                }
            }
            s
        })
    }

    /// Cartan's criterion: the Killing form is non-degenerate.
    pub fn is_semisimple(&self) -> bool {
        self.dim > 0 && !self.killing_form().determinant().is_zero()
    }

    /// Negative definite Killing form, decided by the signs of leading minors.
    pub fn is_compact_type(&self) -> bool {
        if self.dim == 0 {
            return false;
        }
        let neg = self.killing_form().scale(&Scalar::from_integer((-1).into()));
        neg.leading_minors().iter().all(Signed::is_positive)
    }

    /// `(positive, negative, zero)` eigenvalue counts of the Killing form.
    pub fn killing_signature(&self) -> (usize, usize, usize) {
        signature(&self.killing_form())
    }

    /// Reduced-echelon basis of `[L, L]`.
    pub fn derived_algebra(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim;
        let mut gens = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                gens.push((0..n).map(|k| self.constant(i, j, k).clone()).collect());
            }
        }
        span_basis(&gens, n)
    }

    /// The radical as the Killing-orthogonal complement of `[L, L]`.
    pub fn radical(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim;
        let k = self.killing_form();
        let derived = self.derived_algebra();
        if derived.is_empty() {
            return (0..n).map(|i| self.basis_vector(i)).collect();
        }
        let rows: Vec<Vec<Scalar>> = derived.iter().map(|d| k.mul_vec(d)).collect();
        let m = Matrix::from_rows(rows);
        let ker = m.kernel();
        span_basis(&ker, n)
    }

    /// Structure constants of the subalgebra spanned by `basis`, if it is closed.
    pub fn restrict(&self, basis: &[Vec<Scalar>]) -> Option<LieAlgebra> {
        let d = basis.len();
        let mut c = vec![Scalar::zero(); d * d * d];
        for a in 0..d {
            for b in a + 1..d {
                let br = self.bracket(&basis[a], &basis[b]);
                let coords = if br.iter().all(Zero::is_zero) {
                    vec![Scalar::zero(); d]
                } else {
                    coordinates_in(basis, &br)?
                };
                for (k, v) in coords.into_iter().enumerate() {
                    c[(b * d + a) * d + k] = -v.clone();
                    c[(a * d + b) * d + k] = v;
                }
            }
        }
        Some(LieAlgebra { dim: d, c })
    }

    /// The same algebra in the basis `Y_a = sum_i P[a][i] X_i` (rows of `P`).
    pub fn change_basis(&self, p: &Matrix) -> Result<LieAlgebra> {
        let rows: Vec<Vec<Scalar>> = (0..p.rows()).map(|r| p.row(r).to_vec()).collect();
        if p.rows() != self.dim || p.cols() != self.dim || p.determinant().is_zero() {
            return Err(Error::SingularLinearPart);
        }
        Ok(self.restrict(&rows).expect("a basis spans the whole algebra"))
    }

    /// Checks `rho([X_i, X_j]) = [rho(X_i), rho(X_j)]` on all basis pairs.
    pub fn check_representation(&self, rho: &[Matrix]) -> Result<()> {
        if rho.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.len(),
            });
        }
        let d = rho.first().map_or(0, Matrix::rows);
        if rho.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::NotRepresentation("matrices of unequal shapes".into()));
        }
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let mut lhs = Matrix::zeros(d, d);
                for k in 0..self.dim {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        lhs = lhs.add(&rho[k].scale(c));
                    }
                }
                if lhs != rho[i].commutator(&rho[j]) {
                    return Err(Error::NotRepresentation(format!(
                        "fails on the pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Sylvester signature of a symmetric rational matrix by congruence diagonalization.
pub fn signature(m: &Matrix) -> (usize, usize, usize) {
    let n = m.rows();
    let mut a: Vec<Vec<Scalar>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // choose a pivot with nonzero diagonal, or create one from an off-diagonal entry
        let diag = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                // replace e_i by e_i + e_j, making a[i][i] = 2 a[i][j] != 0
                for k in 0..n {
                    let t = a[j][k].clone();
                    a[i][k] += t;
                }
                for k in 0..n {
                    let t = a[k][j].clone();
                    a[k][i] += t;
                }
                i
            }
        };
        let piv = a[p][p].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for &i in &active {
            if i == p || a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &piv;
            for k in 0..n {
                let t = &f * &a[p][k];
                a[i][k] -= t;
            }
            for k in 0..n {
                let t = &f * &a[k][p];
                a[k][i] -= t;
            }
        }
        active.retain(|&i| i != p);
    }
    (pos, neg, n - pos - neg)
}

/// Isotropy Lie algebra of a Poisson jet: the constants of its linear part.
pub fn isotropy_from_linear_part(pi: &PoissonJet) -> LieAlgebra {
    // the degree-1 part of the Jacobiator is the Jacobi identity of these constants
    LieAlgebra::unchecked(pi.dim(), pi.linear_coefficients())
}
