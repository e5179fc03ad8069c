use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use super::module::GModule;
use crate::error::{Error, Result};
use crate::linalg::{dot, SparseMatrix};
use crate::scalar::Scalar;

/// Increasing `r`-subsets of `0..n` in lexicographic order, with their ranks.
#[derive(Clone, Debug)]
pub struct Subsets {
    list: Vec<Vec<usize>>,
    rank: HashMap<Vec<usize>, usize>,
}

impl Subsets {
    pub fn new(n: usize, r: usize) -> Self {
        let mut list = Vec::new();
        let mut cur = Vec::with_capacity(r);
        fn rec(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == r {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, r, i + 1, cur, out);
                cur.pop();
            }
        }
        rec(n, r, 0, &mut cur, &mut list);
        let rank = list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Subsets { list, rank }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.list[i]
    }

    pub fn rank(&self, s: &[usize]) -> Option<usize> {
        self.rank.get(s).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.list.iter()
    }
}

/// Sorted insertion of `k` into an increasing list; `None` if `k` is present.
/// The sign is that of the permutation moving `k` from the front into place.
fn insert_sorted(k: usize, rest: &[usize]) -> Option<(Vec<usize>, bool)> {
    let pos = rest.partition_point(|&x| x < k);
    if rest.get(pos) == Some(&k) {
        return None;
    }
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.extend_from_slice(&rest[..pos]);
    v.push(k);
    v.extend_from_slice(&rest[pos..]);
    Some((v, pos % 2 == 1))
}

/// Alternating `r`-cochain with values in a module.
///
/// `values[subset_rank * dim + v]` is the `v`-th module coordinate of
/// `omega(X_{s_1}, ..., X_{s_r})` for the increasing subset `s`.
#[derive(Clone, Debug)]
pub struct Cochain {
    module: Arc<GModule>,
    degree: usize,
    values: Vec<Scalar>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.values == other.values
            && (Arc::ptr_eq(&self.module, &other.module) || self.module == other.module)
    }
}

impl Eq for Cochain {}

/// Dimension of `C^r(g; V)`.
pub fn cochain_dim(module: &GModule, r: usize) -> usize {
    binomial(module.algebra().dim(), r) * module.dim()
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl Cochain {
    pub fn new(module: Arc<GModule>, degree: usize, values: Vec<Scalar>) -> Result<Self> {
        let expected = cochain_dim(&module, degree);
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(Cochain {
            module,
            degree,
            values,
        })
    }

    pub fn zero(module: Arc<GModule>, degree: usize) -> Self {
        let len = cochain_dim(&module, degree);
        Cochain {
            module,
            degree,
            values: vec![Scalar::zero(); len],
        }
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Module coordinate `v` of the value on an increasing subset.
    pub fn value(&self, subset: &[usize], v: usize) -> Scalar {
        let subsets = Subsets::new(self.module.algebra().dim(), self.degree);
        let s = subsets.rank(subset).expect("subset must be increasing and in range");
        self.values[s * self.module.dim() + v].clone()
    }

    /// The full module vector on an increasing subset.
    pub fn value_vector(&self, subset_rank: usize) -> &[Scalar] {
        let d = self.module.dim();
        &self.values[subset_rank * d..(subset_rank + 1) * d]
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree);
        Cochain {
            module: self.module.clone(),
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree);
        Cochain {
            module: self.module.clone(),
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    /// Sparse `(subset, module index, value)` list of nonzero entries.
    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, usize, Scalar)> {
        let subsets = Subsets::new(self.module.algebra().dim(), self.degree);
        let d = self.module.dim();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (subsets.get(i / d).to_vec(), i % d, v.clone()))
            .collect()
    }
}

/// Matrix of `d: C^r -> C^{r+1}` in the cochain bases.
pub fn differential_matrix(module: &GModule, r: usize) -> SparseMatrix {
    let n = module.algebra().dim();
    let d = module.dim();
    let src = Subsets::new(n, r);
    let dst = Subsets::new(n, r + 1);
    let l = module.algebra();
    let mut trip = Vec::new();
    for (srank, s) in dst.iter().enumerate() {
        for i in 0..=r {
            // (-1)^i X_{s_i} . omega(s without s_i)
            let mut rest = s.clone();
            let xi = rest.remove(i);
            let t = src.rank(&rest).unwrap();
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let rho = module.rho(xi);
            for w in 0..d {
                for (v, val) in rho.row(w) {
                    trip.push((srank * d + w, t * d + v, val * Scalar::from_integer(sign.into())));
                }
            }
        }
        for i in 0..=r {
            for j in i + 1..=r {
                // (-1)^{i+j} omega([X_{s_i}, X_{s_j}], rest)
                let rest: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != i && p != j)
                    .map(|(_, &x)| x)
                    .collect();
                for k in 0..n {
                    let c = l.constant(s[i], s[j], k);
                    if c.is_zero() {
                        continue;
                    }
                    let Some((t, odd)) = insert_sorted(k, &rest) else { continue };
                    let t = src.rank(&t).unwrap();
                    let neg = ((i + j) % 2 == 1) ^ odd;
                    let coef = if neg { -c.clone() } else { c.clone() };
                    for v in 0..d {
                        trip.push((srank * d + v, t * d + v, coef.clone()));
                    }
                }
            }
        }
    }
    SparseMatrix::from_triplets(dst.len() * d, src.len() * d, trip)
}

/// `d omega` evaluated directly from the two-sum formula.
pub fn ce_differential(omega: &Cochain) -> Cochain {
    let module = omega.module();
    let l = module.algebra();
    let n = l.dim();
    let d = module.dim();
    let r = omega.degree;
    let src = Subsets::new(n, r);
    let dst = Subsets::new(n, r + 1);
    let mut values = vec![Scalar::zero(); dst.len() * d];
    for (srank, s) in dst.iter().enumerate() {
        let out = &mut values[srank * d..(srank + 1) * d];
        for i in 0..=r {
            let mut rest = s.clone();
            let xi = rest.remove(i);
            let w = module.act(xi, omega.value_vector(src.rank(&rest).unwrap()));
            for (o, x) in out.iter_mut().zip(w) {
                if i % 2 == 0 {
                    *o += x;
                } else {
                    *o -= x;
                }
            }
        }
        for i in 0..=r {
            for j in i + 1..=r {
                let rest: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != i && p != j)
                    .map(|(_, &x)| x)
                    .collect();
                for k in 0..n {
                    let c = l.constant(s[i], s[j], k);
                    if c.is_zero() {
                        continue;
                    }
                    let Some((t, odd)) = insert_sorted(k, &rest) else { continue };
                    let neg = ((i + j) % 2 == 1) ^ odd;
                    let val = omega.value_vector(src.rank(&t).unwrap());
                    for (o, x) in out.iter_mut().zip(val) {
                        if neg {
                            *o -= c * x;
                        } else {
                            *o += c * x;
                        }
                    }
                }
            }
        }
    }
    Cochain {
        module: module.clone(),
        degree: r + 1,
        values,
    }
}

pub fn is_cocycle(omega: &Cochain) -> bool {
    ce_differential(omega).is_zero()
}

/// Proof that a cocycle is not a coboundary: a functional `lambda` on
/// `C^r` vanishing on every coboundary with `lambda(R) != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionClass {
    cocycle: Cochain,
    functional: Vec<Scalar>,
    h_dim: usize,
}

impl ObstructionClass {
    pub fn cocycle(&self) -> &Cochain {
        &self.cocycle
    }

    pub fn functional(&self) -> &[Scalar] {
        &self.functional
    }

    /// `dim H^r` of the module in which the class lives.
    pub fn cohomology_dimension(&self) -> usize {
        self.h_dim
    }

    pub fn degree(&self) -> usize {
        self.cocycle.degree
    }

    /// `lambda(R)`, nonzero for a valid certificate.
    pub fn pairing(&self) -> Scalar {
        dot(&self.functional, &self.cocycle.values)
    }

    /// Re-checks the certificate against freshly built coboundary columns.
    pub fn verify(&self) -> bool {
        let r = self.cocycle.degree;
        if r == 0 || self.pairing().is_zero() || !is_cocycle(&self.cocycle) {
            return false;
        }
        let dmat = differential_matrix(&self.cocycle.module, r - 1);
        dmat.vec_mul(&self.functional).iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoboundarySolution {
    Primitive(Cochain),
    Obstruction(ObstructionClass),
}

/// Solves `d sigma = R` for a cocycle `R` of degree `r >= 1`.
///
/// The primitive is the reduced-echelon solution with free variables zero.
pub fn solve_coboundary(rem: &Cochain) -> Result<CoboundarySolution> {
    if rem.degree == 0 {
        return Err(Error::InvalidInput("0-cochains have no primitive".into()));
    }
    if !is_cocycle(rem) {
        return Err(Error::InputNotCocycle);
    }
    let r = rem.degree;
    if rem.is_zero() {
        return Ok(CoboundarySolution::Primitive(Cochain::zero(rem.module.clone(), r - 1)));
    }
    let dmat = differential_matrix(&rem.module, r - 1);
    if let Some(sigma) = dmat.solve(&rem.values) {
        return Ok(CoboundarySolution::Primitive(Cochain {
            module: rem.module.clone(),
            degree: r - 1,
            values: sigma,
        }));
    }
    let functional = dmat
        .left_kernel()
        .into_iter()
        .find(|l| !dot(l, &rem.values).is_zero())
        .ok_or_else(|| Error::SolverFailure("inconsistent system without a separating functional".into()))?;
    let h_dim = cohomology_dimension(&rem.module, r);
    Ok(CoboundarySolution::Obstruction(ObstructionClass {
        cocycle: rem.clone(),
        functional,
        h_dim,
    }))
}

/// `dim ker d_r - rank d_{r-1}`.
pub fn cohomology_dimension(module: &GModule, r: usize) -> usize {
    let cdim = cochain_dim(module, r);
    let ker = cdim - differential_matrix(module, r).rank();
    let im = if r == 0 {
        0
    } else {
        differential_matrix(module, r - 1).rank()
    };
    ker - im
}
