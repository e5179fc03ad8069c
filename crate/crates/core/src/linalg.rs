//! Exact linear algebra over the rationals.
//!
//! Every kernel, rank and solve goes through the reduced row-echelon form.
//! The RREF of a matrix is unique, so pivot columns are always the
//! lowest-index independent columns and free variables are set to zero in
//! particular solutions. Results are therefore independent of elimination
//! order.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// A sparse row: `(column, value)` pairs sorted by column, no zeros stored.
pub type SparseRow = Vec<(usize, Scalar)>;

/// Row-major sparse matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) out of bounds");
            let e = acc[r].entry(c).or_insert_with(Scalar::zero);
            *e += v;
        }
        let data = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let data = (0..m.rows)
            .map(|r| {
                (0..m.cols)
                    .filter_map(|c| {
                        let v = m.get(r, c);
                        (!v.is_zero()).then(|| (c, v.clone()))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: m.rows,
            cols: m.cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseRow {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                m.set(r, *c, v.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Scalar::zero(), |acc, (c, v)| acc + v * &x[*c])
            })
            .collect()
    }

    /// `y^T A` for a row vector `y`.
    pub fn vec_mul(&self, y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![Scalar::zero(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            if y[r].is_zero() {
                continue;
            }
            for (c, v) in row {
                out[*c] += &y[r] * v;
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        *acc.entry(*c).or_insert_with(Scalar::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &SparseMatrix, s: &Scalar) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let triplets = self
            .data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v.clone())))
            .chain(
                other
                    .data
                    .iter()
                    .enumerate()
                    .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v * s))),
            );
        SparseMatrix::from_triplets(self.rows, self.cols, triplets)
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::new(self.cols, self.data.iter().cloned())
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the right kernel, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.echelon().kernel()
    }

    /// Basis of `{ y : y^T A = 0 }`.
    pub fn left_kernel(&self) -> Vec<Vec<Scalar>> {
        self.transpose().kernel()
    }

    /// Solves `A x = b`, returning the solution with all free variables zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let augmented = self.data.iter().zip(b).map(|(row, bi)| {
            let mut row = row.clone();
            if !bi.is_zero() {
                row.push((self.cols, bi.clone()));
            }
            row
        });
        let ech = Echelon::new(self.cols + 1, augmented);
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if let Some((c, v)) = row.last() {
                if *c == self.cols {
                    x[p] = v.clone();
                }
            }
        }
        Some(x)
    }
}

/// Reduced row-echelon form of a sparse matrix.
#[derive(Debug, Clone)]
pub struct Echelon {
    cols: usize,
    /// Pivot column of each stored row, strictly increasing.
    pivots: Vec<usize>,
    rows: Vec<SparseRow>,
}

impl Echelon {
    fn new(cols: usize, input: impl IntoIterator<Item = SparseRow>) -> Self {
        // pivot column -> fully normalized row with leading 1 at that column
        let mut basis: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for row in input {
            let mut acc: BTreeMap<usize, Scalar> = row.into_iter().collect();
            let leading = loop {
                let Some((&c, _)) = acc.iter().next() else {
                    break None;
                };
                let v = acc.remove(&c).unwrap();
                if v.is_zero() {
                    continue;
                }
                match basis.get(&c) {
                    Some(prow) => {
                        for (pc, pv) in prow.iter().skip(1) {
                            let e = acc.entry(*pc).or_insert_with(Scalar::zero);
                            *e -= &v * pv;
                            if e.is_zero() {
                                acc.remove(pc);
                            }
                        }
                    }
                    None => break Some((c, v)),
                }
            };
            if let Some((c, lead)) = leading {
                let inv = lead.recip();
                let mut new_row: SparseRow = Vec::with_capacity(acc.len() + 1);
                new_row.push((c, Scalar::one()));
                new_row.extend(acc.into_iter().map(|(k, v)| (k, v * &inv)));
                basis.insert(c, new_row);
            }
        }

        // back substitution, from the last pivot upwards
        let pivot_cols: Vec<usize> = basis.keys().copied().collect();
        for &p in pivot_cols.iter().rev() {
            let row = basis.remove(&p).unwrap();
            let mut acc: BTreeMap<usize, Scalar> = row.into_iter().collect();
            let later: Vec<usize> = acc
                .keys()
                .copied()
                .filter(|c| *c != p && basis.contains_key(c))
                .collect();
            for c in later {
                let Some(v) = acc.remove(&c) else { continue };
                let prow = &basis[&c];
                for (pc, pv) in prow.iter().skip(1) {
                    let e = acc.entry(*pc).or_insert_with(Scalar::zero);
                    *e -= &v * pv;
                    if e.is_zero() {
                        acc.remove(pc);
                    }
                }
            }
            basis.insert(p, acc.into_iter().collect());
        }

        let (pivots, rows) = basis.into_iter().unzip();
        Echelon { cols, pivots, rows }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        // column f of the RREF, as (pivot column, value) pairs
        let mut col_entries: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.cols];
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            for (c, v) in row.iter().skip(1) {
                col_entries[*c].push((p, v.clone()));
            }
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (p, val) in &col_entries[f] {
                    v[*p] = -val.clone();
                }
                v
            })
            .collect()
    }
}

/// Small dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).fold(Scalar::zero(), |acc, k| {
                acc + self.get(r, k) * other.get(k, c)
            })
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn rank(&self) -> usize {
        SparseMatrix::from_dense(self).rank()
    }

    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        SparseMatrix::from_dense(self).kernel()
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        SparseMatrix::from_dense(self).solve(b)
    }

    /// Determinant by fraction-carrying Gaussian elimination.
    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                for k in 0..n {
                    a.swap(p * n + k, col * n + k);
                }
                det = -det;
            }
            let pivot = a[col * n + col].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = &a[r * n + col] / &pivot;
                for k in col..n {
                    let t = &f * &a[col * n + k];
                    a[r * n + k] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let rows = (0..n).map(|r| {
            let mut row: SparseRow = (0..n)
                .filter(|&c| !self.get(r, c).is_zero())
                .map(|c| (c, self.get(r, c).clone()))
                .collect();
            row.push((n + r, Scalar::one()));
            row
        });
        let ech = Echelon::new(2 * n, rows);
        if ech.rank() < n || ech.pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            for (c, v) in row {
                if *c >= n {
                    inv.set(p, c - n, v.clone());
                }
            }
        }
        Some(inv)
    }

    /// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<Scalar> {
        (1..=self.rows)
            .map(|k| Matrix::from_fn(k, k, |r, c| self.get(r, c).clone()).determinant())
            .collect()
    }
}

/// Coordinates of `v` in the (independent) `basis`, if `v` lies in its span.
pub fn coordinates_in(basis: &[Vec<Scalar>], v: &[Scalar]) -> Option<Vec<Scalar>> {
    let dim = v.len();
    let m = Matrix::from_fn(dim, basis.len(), |r, c| basis[c][r].clone());
    m.solve(v)
}

/// Reduced-echelon basis of the span of `vectors` (rows of the RREF).
pub fn span_basis(vectors: &[Vec<Scalar>], dim: usize) -> Vec<Vec<Scalar>> {
    let rows = vectors.iter().map(|v| {
        v.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect::<SparseRow>()
    });
    let ech = Echelon::new(dim, rows);
    ech.rows
        .iter()
        .map(|row| {
            let mut v = vec![Scalar::zero(); dim];
            for (c, x) in row {
                v[*c] = x.clone();
            }
            v
        })
        .collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_kernel_uses_lowest_pivots() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ker = a.kernel();
        assert_eq!(ker, vec![vec![int(-1), int(-1), int(1)]]);
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let x = a.solve(&[int(3), int(2)]).unwrap();
        assert_eq!(x, vec![int(3), int(0), int(2)]);
        let inconsistent = m(&[&[1, 1], &[2, 2]]);
        assert!(inconsistent.solve(&[int(1), int(3)]).is_none());
    }

    #[test]
    fn left_kernel_certifies_inconsistency() {
        let a = SparseMatrix::from_dense(&m(&[&[1, 1], &[2, 2]]));
        let lk = a.left_kernel();
        assert_eq!(lk.len(), 1);
        assert!(a.vec_mul(&lk[0]).iter().all(Zero::is_zero));
        assert_ne!(dot(&lk[0], &[int(1), int(3)]), int(0));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.determinant(), int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(inv, m(&[&[4, -1], &[-7, 2]]));
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        let s = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.determinant(), int(0));
        assert!(s.inverse().is_none());
        let h = Matrix::from_rows(vec![vec![frac(1, 2), int(0)], vec![int(3), int(4)]]);
        assert_eq!(h.determinant(), int(2));
    }

    #[test]
    fn span_and_coordinates() {
        let basis = vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]];
        let v = vec![int(2), int(3), int(5)];
        assert_eq!(coordinates_in(&basis, &v), Some(vec![int(2), int(3)]));
        assert_eq!(coordinates_in(&basis, &[int(1), int(0), int(0)]), None);
        let sb = span_basis(&[basis[0].clone(), basis[1].clone(), v], 3);
        assert_eq!(sb.len(), 2);
    }
}
