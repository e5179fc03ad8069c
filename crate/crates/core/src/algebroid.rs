//! Lie algebroids over a neighbourhood of a fixed point, handled through the
//! fiberwise-linear Poisson structure on the dual bundle.
//!
//! Variables are ordered `(x^1..x^n, e_1..e_r)`. The brackets are
//! `{e_i, e_j} = c^k_ij(x) e_k`, `{e_i, x^j} = B^j_i(x)` and `{x^i, x^j} = 0`,
//! where `B_i = sum_j B^j_i d_j` is the anchor of `e_i`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::liealg::{LeviSplit, LieAlgebra};
use crate::linalg::Matrix;
use crate::normalform::{check_order, finish, run_engine, EngineOptions, Outcome};
use crate::polyalg::{Bivector, CoordChange, Jet, Monomial, PoissonJet, VectorField};
use crate::scalar::Scalar;

/// Structure functions truncated at order `N` and anchor coefficients at
/// order `N + 1`, so that the associated Poisson jet is exact through `N + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebroidJet {
    base: usize,
    rank: usize,
    order: u32,
    /// `c[(i * r + j) * r + k] = c^k_ij`.
    structure: Vec<Jet>,
    /// `anchor[i * n + j] = B^j_i`.
    anchor: Vec<Jet>,
}

fn embed(f: &Jet, m: usize, offset: usize) -> Jet {
    let mut out = Jet::zero(m, f.order());
    for (mo, c) in f.terms() {
        let mut exps = vec![0u16; m];
        exps[offset..offset + mo.nvars()].copy_from_slice(mo.exponents());
        out.add_term(Monomial::new(&exps), c.clone());
    }
    out
}

/// Restricts a jet that only involves the first `n` variables.
fn restrict(f: &Jet, n: usize, order: u32) -> Option<Jet> {
    let mut out = Jet::zero(n, order);
    for (mo, c) in f.terms() {
        if mo.exponents()[n..].iter().any(|&e| e != 0) {
            return None;
        }
        out.add_term(Monomial::new(&mo.exponents()[..n]), c.clone());
    }
    Some(out)
}

/// Coefficient jets of `f = sum_k a_k(x) e_k`, or `None` if `f` is not fiber-linear.
fn fiber_coefficients(f: &Jet, n: usize, r: usize, order: u32) -> Option<Vec<Jet>> {
    let mut out = vec![Jet::zero(n, order); r];
    for (mo, c) in f.terms() {
        let e = &mo.exponents()[n..];
        let k = e.iter().position(|&x| x == 1)?;
        if e.iter().map(|&x| x as u32).sum::<u32>() != 1 {
            return None;
        }
        out[k].add_term(Monomial::new(&mo.exponents()[..n]), c.clone());
    }
    Some(out)
}

impl AlgebroidJet {
    /// Builds the algebroid from `structure[i][j][k] = c^k_ij` and
    /// `anchor[i][j] = B^j_i`, checking the Jacobi identity through `N + 1`.
    pub fn new(
        base: usize,
        rank: usize,
        structure: Vec<Vec<Vec<Jet>>>,
        anchor: Vec<Vec<Jet>>,
    ) -> Result<Self> {
        if base == 0 || rank == 0 {
            return Err(Error::InvalidAlgebroid("base and rank must be positive".into()));
        }
        let shape_ok = structure.len() == rank
            && structure.iter().all(|row| row.len() == rank && row.iter().all(|c| c.len() == rank))
            && anchor.len() == rank
            && anchor.iter().all(|row| row.len() == base);
        if !shape_ok {
            return Err(Error::InvalidAlgebroid("array shapes do not match base and rank".into()));
        }
        let order = structure[0][0][0].order();
        let mut c = Vec::with_capacity(rank * rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                for k in 0..rank {
                    let f = &structure[i][j][k];
                    if f.nvars() != base {
                        return Err(Error::DimensionMismatch {
                            expected: base,
                            found: f.nvars(),
                        });
                    }
                    if f.order() != order {
                        return Err(Error::TruncationMismatch {
                            expected: order,
                            found: f.order(),
                        });
                    }
                    if *f != -&structure[j][i][k] {
                        return Err(Error::InvalidAlgebroid(format!(
                            "c^{}_{}{} is not antisymmetric",
                            k + 1,
                            i + 1,
                            j + 1
                        )));
                    }
                    c.push(f.clone());
                }
            }
        }
        let mut b = Vec::with_capacity(rank * base);
        for row in anchor {
            for f in row {
                if f.nvars() != base {
                    return Err(Error::DimensionMismatch {
                        expected: base,
                        found: f.nvars(),
                    });
                }
                if f.order() != order + 1 {
                    return Err(Error::TruncationMismatch {
                        expected: order + 1,
                        found: f.order(),
                    });
                }
                if !f.vanishes_at_origin() {
                    return Err(Error::NotVanishingAtOrigin {
                        what: "anchor".into(),
                    });
                }
                b.push(f);
            }
        }
        let a = AlgebroidJet {
            base,
            rank,
            order,
            structure: c,
            anchor: b,
        };
        match PoissonJet::new(a.bivector()) {
            Ok(_) => Ok(a),
            Err(Error::JacobiFailure { degree, .. }) => Err(Error::InvalidAlgebroid(format!(
                "Jacobi identity fails in total degree {degree}"
            ))),
            Err(e) => Err(e),
        }
    }

    pub fn base_dim(&self) -> usize {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Truncation order `N` of the structure functions.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn structure(&self, i: usize, j: usize, k: usize) -> &Jet {
        &self.structure[(i * self.rank + j) * self.rank + k]
    }

    /// `B^j_i`, the `j`-th component of the anchor of `e_i`.
    pub fn anchor(&self, i: usize, j: usize) -> &Jet {
        &self.anchor[i * self.base + j]
    }

    pub fn anchor_field(&self, i: usize) -> VectorField {
        VectorField::new((0..self.base).map(|j| self.anchor(i, j).clone()).collect())
            .expect("anchor components share one shape")
    }

    /// The isotropy algebra `c^k_ij(0)`.
    pub fn isotropy(&self) -> LieAlgebra {
        let c = self.structure.iter().map(Jet::constant_term).collect();
        LieAlgebra::new(self.rank, c).expect("Jacobi holds in degree zero")
    }

    fn bivector(&self) -> Bivector {
        let (n, r) = (self.base, self.rank);
        let m = n + r;
        let ord = self.order + 1;
        let mut b = Bivector::zero(m, ord);
        for i in 0..r {
            for j in i + 1..r {
                let mut acc = Jet::zero(m, ord);
                for k in 0..r {
                    let c = embed(&self.structure(i, j, k).with_order(ord), m, 0);
                    acc = &acc + &(&c * &Jet::var(m, ord, n + k));
                }
                b.set(n + i, n + j, acc);
            }
            for j in 0..n {
                b.set(n + i, j, embed(self.anchor(i, j), m, 0));
            }
        }
        b
    }

    /// The fiberwise-linear Poisson jet on the dual bundle, of order `N + 1`.
    pub fn to_poisson(&self) -> PoissonJet {
        PoissonJet::trusted(self.bivector())
    }

    /// Reads an algebroid off a fiberwise-linear Poisson jet of order `N + 1`.
    pub fn from_poisson(pi: &PoissonJet, base: usize, rank: usize) -> Result<Self> {
        fiberwise_linearity_check(pi, base, rank)?;
        let (n, r) = (base, rank);
        let ord = pi.order();
        if ord < 2 {
            return Err(Error::InvalidAlgebroid("Poisson jet of order below 2".into()));
        }
        let mut structure = vec![vec![vec![Jet::zero(n, ord - 1); r]; r]; r];
        let mut anchor = vec![vec![Jet::zero(n, ord); n]; r];
        for i in 0..r {
            for j in 0..r {
                let coeffs = fiber_coefficients(pi.get(n + i, n + j), n, r, ord)
                    .expect("checked fiber-linear");
                for (k, c) in coeffs.into_iter().enumerate() {
                    structure[i][j][k] = c.with_order(ord - 1);
                }
            }
            for j in 0..n {
                anchor[i][j] = restrict(pi.get(n + i, j), n, ord).expect("checked");
            }
        }
        AlgebroidJet::new(base, rank, structure, anchor)
    }

    /// Whether the structure functions are constant and the anchor linear.
    pub fn is_linear(&self) -> bool {
        self.structure.iter().all(|c| c.filter(|m| m.degree() >= 1).is_zero())
            && self.anchor.iter().all(|b| b.filter(|m| m.degree() >= 2).is_zero())
    }

    /// The isotropy algebra with the linear parts of the anchors.
    pub fn linear_part(&self) -> LinearAlgebroid {
        let anchors = (0..self.rank).map(|i| self.anchor_field(i).linear_matrix()).collect();
        LinearAlgebroid {
            algebra: self.isotropy(),
            anchors,
        }
    }

    /// The algebroid in new coordinates and frame.
    pub fn pushforward(&self, change: &GradedChange) -> Result<AlgebroidJet> {
        let phi = change.to_change()?;
        let pi = crate::polyalg::pushforward(&self.to_poisson(), &phi)?;
        AlgebroidJet::from_poisson(&pi, self.base, self.rank)
    }

    pub fn with_order(&self, order: u32) -> AlgebroidJet {
        AlgebroidJet {
            base: self.base,
            rank: self.rank,
            order,
            structure: self.structure.iter().map(|c| c.with_order(order)).collect(),
            anchor: self.anchor.iter().map(|b| b.with_order(order + 1)).collect(),
        }
    }
}

/// Checks that `{x, x} = 0`, that `{e, x}` depends on `x` only and that
/// `{e, e}` is linear in the fiber variables.
pub fn fiberwise_linearity_check(pi: &Bivector, base: usize, rank: usize) -> Result<()> {
    let (n, r) = (base, rank);
    if pi.dim() != n + r {
        return Err(Error::DimensionMismatch {
            expected: n + r,
            found: pi.dim(),
        });
    }
    let ord = pi.order();
    for i in 0..n {
        for j in i + 1..n {
            if !pi.get(i, j).is_zero() {
                return Err(Error::InvalidAlgebroid(format!(
                    "base coordinates {} and {} do not commute",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    for i in 0..r {
        for j in 0..n {
            if restrict(pi.get(n + i, j), n, ord).is_none() {
                return Err(Error::InvalidAlgebroid(format!(
                    "bracket of fiber {} with base {} depends on the fiber",
                    i + 1,
                    j + 1
                )));
            }
        }
        for j in i + 1..r {
            if fiber_coefficients(pi.get(n + i, n + j), n, r, ord).is_none() {
                return Err(Error::InvalidAlgebroid(format!(
                    "bracket of fibers {} and {} is not fiber-linear",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// A change of base coordinates together with a change of frame:
/// `x' = base(x)` and `e'_i = sum_k frame_ik(x) e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedChange {
    base: Vec<Jet>,
    /// `frame[i * r + k]`, jets in the base variables of order `N`.
    frame: Vec<Jet>,
    rank: usize,
}

impl GradedChange {
    /// `base` jets of order `N + 1`, `frame` jets of order `N`.
    pub fn new(base: Vec<Jet>, frame: Vec<Vec<Jet>>) -> Result<Self> {
        let n = base.len();
        let r = frame.len();
        if n == 0 || r == 0 || frame.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidAlgebroid("graded change has the wrong shape".into()));
        }
        let ord = base[0].order();
        if ord < 2 {
            return Err(Error::InvalidAlgebroid("graded change of order below 2".into()));
        }
        for f in base.iter().chain(frame.iter().flatten()) {
            if f.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: f.nvars(),
                });
            }
        }
        if let Some(f) = frame.iter().flatten().find(|f| f.order() != ord - 1) {
            return Err(Error::TruncationMismatch {
                expected: ord - 1,
                found: f.order(),
            });
        }
        let g = GradedChange {
            base,
            frame: frame.into_iter().flatten().collect(),
            rank: r,
        };
        g.to_change()?;
        Ok(g)
    }

    pub fn identity(base: usize, rank: usize, order: u32) -> Self {
        GradedChange {
            base: (0..base).map(|i| Jet::var(base, order + 1, i)).collect(),
            frame: (0..rank * rank)
                .map(|ik| {
                    let c = if ik / rank == ik % rank { 1 } else { 0 };
                    Jet::constant(base, order, Scalar::from_integer(c.into()))
                })
                .collect(),
            rank,
        }
    }

    /// Splits a change of the total space that preserves the fiber grading.
    pub fn from_change(phi: &CoordChange, base: usize, rank: usize) -> Result<Self> {
        let (n, r) = (base, rank);
        if phi.dim() != n + r {
            return Err(Error::DimensionMismatch {
                expected: n + r,
                found: phi.dim(),
            });
        }
        let ord = phi.order();
        let mut b = Vec::with_capacity(n);
        for j in 0..n {
            b.push(restrict(phi.component(j), n, ord).ok_or_else(|| {
                Error::InvalidAlgebroid(format!("base coordinate {} depends on the fiber", j + 1))
            })?);
        }
        let mut frame = Vec::with_capacity(r);
        for i in 0..r {
            let coeffs = fiber_coefficients(phi.component(n + i), n, r, ord).ok_or_else(|| {
                Error::InvalidAlgebroid(format!("fiber coordinate {} is not fiber-linear", i + 1))
            })?;
            frame.push(coeffs.into_iter().map(|c| c.with_order(ord - 1)).collect());
        }
        GradedChange::new(b, frame)
    }

    /// The change of the total space `(x, e) -> (x', e')`, of order `N + 1`.
    pub fn to_change(&self) -> Result<CoordChange> {
        let n = self.base.len();
        let r = self.rank;
        let m = n + r;
        let ord = self.base[0].order();
        let mut comps: Vec<Jet> = self.base.iter().map(|f| embed(f, m, 0)).collect();
        for i in 0..r {
            let mut acc = Jet::zero(m, ord);
            for k in 0..r {
                let g = embed(&self.frame(i, k).with_order(ord), m, 0);
                acc = &acc + &(&g * &Jet::var(m, ord, n + k));
            }
            comps.push(acc);
        }
        CoordChange::new(comps)
    }

    pub fn base_component(&self, j: usize) -> &Jet {
        &self.base[j]
    }

    pub fn frame(&self, i: usize, k: usize) -> &Jet {
        &self.frame[i * self.rank + k]
    }
}

/// Action algebroid of a linear representation: the algebra with anchors
/// `e_i -> sum_jk A_i[j][k] x^k d_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearAlgebroid {
    algebra: LieAlgebra,
    anchors: Vec<Matrix>,
}

impl LinearAlgebroid {
    /// Checks `[#e_i, #e_j] = sum_k c^k_ij #e_k` on the linear fields.
    pub fn new(algebra: LieAlgebra, anchors: Vec<Matrix>) -> Result<Self> {
        let r = algebra.dim();
        if anchors.len() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: anchors.len(),
            });
        }
        let n = anchors.first().map_or(0, Matrix::rows);
        if n == 0 || anchors.iter().any(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::InvalidAlgebroid("anchor matrices must be square and nonempty".into()));
        }
        let fields: Vec<VectorField> = anchors.iter().map(|a| VectorField::linear(a, 1)).collect();
        for i in 0..r {
            for j in i + 1..r {
                let lhs = fields[i].lie_bracket(&fields[j]);
                let mut rhs = VectorField::zero(n, 1);
                for (k, f) in fields.iter().enumerate() {
                    rhs = rhs.add(&f.map(|c| c.scale(algebra.constant(i, j, k))));
                }
                if lhs != rhs {
                    return Err(Error::InvalidAlgebroid(format!(
                        "anchor does not preserve the bracket of e_{} and e_{}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(LinearAlgebroid { algebra, anchors })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn anchors(&self) -> &[Matrix] {
        &self.anchors
    }

    pub fn base_dim(&self) -> usize {
        self.anchors[0].rows()
    }

    /// As an algebroid jet of order `order`.
    pub fn to_jet(&self, order: u32) -> AlgebroidJet {
        let n = self.base_dim();
        let r = self.algebra.dim();
        let structure = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        (0..r)
                            .map(|k| Jet::constant(n, order, self.algebra.constant(i, j, k).clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let anchor = (0..r)
            .map(|i| VectorField::linear(&self.anchors[i], order + 1).comps().to_vec())
            .collect();
        AlgebroidJet::new(n, r, structure, anchor).expect("linear algebroid is valid")
    }
}

fn permutation_change(perm: &[usize], order: u32) -> Result<CoordChange> {
    let m = perm.len();
    let p = Matrix::from_fn(m, m, |i, j| Scalar::from_integer(((perm[i] == j) as i32).into()));
    CoordChange::linear(&p, order)
}

/// Runs the bracket engine on the Poisson jet of `a` with adapted basis rows
/// `rows` (in `(x, e)` coordinates), the first `p` spanning s, and returns
/// the result in `(x, e)` order.
fn run_adapted(
    a: &AlgebroidJet,
    order: u32,
    rows: Matrix,
    p: usize,
    opts: &EngineOptions,
) -> Result<Outcome<AlgebroidJet>> {
    check_order(order, a.order())?;
    let (n, r) = (a.base, a.rank);
    let m = n + r;
    let pi = a.with_order(order).to_poisson().into_bivector();
    // adapted order is (fiber rows, base rows)
    let mask: Vec<bool> = (0..m).map(|i| i < r).collect();
    let run = run_engine(&pi, &rows, p, Some(mask), opts)?;
    let back: Vec<usize> = (0..m).map(|i| if i < n { r + i } else { i - n }).collect();
    let perm = permutation_change(&back, order + 1)?;
    let outcome = finish(run);
    let (change, reached, trace, obstruction) = match outcome {
        Outcome::Linearized {
            change,
            result,
            trace,
        } => (change, result, trace, None),
        Outcome::Obstructed {
            obstruction,
            change,
            reached,
            trace,
        } => (change, reached, trace, Some(obstruction)),
    };
    let change = crate::polyalg::compose_change(&change, &perm)?;
    let b = reached.pushforward_with_inverse(&perm, &permutation_change(&invert(&back), order + 1)?);
    let jet = AlgebroidJet::from_poisson(&PoissonJet::trusted(b), n, r)?;
    Ok(match obstruction {
        None => Outcome::Linearized {
            change,
            result: jet,
            trace,
        },
        Some(obstruction) => Outcome::Obstructed {
            obstruction,
            change,
            reached: jet,
            trace,
        },
    })
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Linearizes the algebroid through order `N` by graded changes, or stops at
/// the first nonzero class.
pub fn linearize_algebroid(
    a: &AlgebroidJet,
    order: u32,
    opts: &EngineOptions,
) -> Result<Outcome<AlgebroidJet>> {
    let (n, r) = (a.base, a.rank);
    let m = n + r;
    let rows = permutation_change(&(0..m).map(|i| (i + n) % m).collect::<Vec<_>>(), 1)?.linear_part();
    run_adapted(a, order, rows, r, opts)
}

/// Normalizes relative to a Levi split `s ⊕ r` of the isotropy algebra: the
/// new frame is `(e_s, f_r)`, with the s-s brackets constant and the brackets
/// of `e_s` with `f_r` and with `x` linear.
pub fn levi_algebroid(
    a: &AlgebroidJet,
    split: &LeviSplit,
    order: u32,
    opts: &EngineOptions,
) -> Result<Outcome<AlgebroidJet>> {
    if a.isotropy() != *split.algebra() {
        return Err(Error::SplitAlgebraMismatch);
    }
    let (n, r) = (a.base, a.rank);
    let m = n + r;
    let fr = split.basis_matrix();
    let rows = Matrix::from_fn(m, m, |i, j| {
        if i < r {
            if j >= n {
                fr.get(i, j - n).clone()
            } else {
                Scalar::zero()
            }
        } else if j == i - r {
            Scalar::from_integer(1.into())
        } else {
            Scalar::zero()
        }
    });
    run_adapted(a, order, rows, split.s_basis().len(), opts)
}

/// `[[e_1, e_2]] = x^2 e_1` over a line with zero anchor: the isotropy is abelian
/// and the quadratic term is a nonzero class.
pub fn quadratic_obstruction_example(order: u32) -> AlgebroidJet {
    let x = Jet::var(1, order, 0);
    let z = Jet::zero(1, order);
    let c12 = vec![x.pow(2), z.clone()];
    let c21 = vec![-&x.pow(2), z.clone()];
    let structure = vec![vec![vec![z.clone(), z.clone()], c12], vec![c21, vec![z.clone(), z]]];
    let anchor = vec![vec![Jet::zero(1, order + 1)]; 2];
    AlgebroidJet::new(1, 2, structure, anchor).expect("rank-two algebroid over a line")
}

/// Coadjoint action algebroid of `algebra` on its dual.
pub fn coadjoint_algebroid(algebra: &LieAlgebra) -> LinearAlgebroid {
    LinearAlgebroid::new(algebra.clone(), crate::cohomology::hamiltonian_fields(algebra))
        .expect("coadjoint anchors preserve brackets")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{catalog, levi_lift};
    use crate::scalar::int;

    fn graded_perturbation(n: usize, r: usize, order: u32) -> GradedChange {
        let x: Vec<Jet> = (0..n).map(|i| Jet::var(n, order + 1, i)).collect();
        let base = (0..n)
            .map(|j| &x[j] + &(&x[(j + 1) % n] * &x[j]).scale(&int(2)))
            .collect();
        let frame = (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| {
                        let mut g = Jet::zero(n, order);
                        if i == k {
                            g.add_term(Monomial::one(n), int(1));
                        }
                        if k == (i + 1) % r {
                            g.add_term(Monomial::var(n, i % n), int(-1));
                        }
                        g
                    })
                    .collect()
            })
            .collect();
        GradedChange::new(base, frame).unwrap()
    }

    #[test]
    fn poisson_round_trip_and_graded_change() {
        let lin = coadjoint_algebroid(&catalog::so3()).to_jet(2);
        let pi = lin.to_poisson();
        assert_eq!(AlgebroidJet::from_poisson(&pi, 3, 3).unwrap(), lin);
        let g = graded_perturbation(3, 3, 2);
        assert_eq!(GradedChange::from_change(&g.to_change().unwrap(), 3, 3).unwrap(), g);
        let pushed = lin.pushforward(&g).unwrap();
        assert!(!pushed.is_linear());
        assert_eq!(pushed.linear_part().algebra(), lin.linear_part().algebra());
    }

    #[test]
    fn so3_action_algebroid_linearizes() {
        let n = 3;
        let lin = coadjoint_algebroid(&catalog::so3()).to_jet(n);
        let a = lin.pushforward(&graded_perturbation(3, 3, n)).unwrap();
        let out = linearize_algebroid(&a, n, &EngineOptions::default()).unwrap();
        assert!(out.is_linearized());
        assert!(out.result().is_linear());
        let g = GradedChange::from_change(out.change(), 3, 3).unwrap();
        assert_eq!(a.pushforward(&g).unwrap(), *out.result());
        LinearAlgebroid::new(
            out.result().isotropy(),
            out.result().linear_part().anchors().to_vec(),
        )
        .unwrap();
    }

    #[test]
    fn quadratic_example_obstructed_in_degree_three() {
        let a = quadratic_obstruction_example(3);
        let out = linearize_algebroid(&a, 3, &EngineOptions::default()).unwrap();
        let obs = out.obstruction().unwrap();
        assert_eq!(obs.degree, 3);
        assert!(obs.class.verify());
    }

    #[test]
    fn levi_on_gl2_coadjoint() {
        let n = 2;
        let g = catalog::gl2();
        let lin = coadjoint_algebroid(&g).to_jet(n);
        let a = lin.pushforward(&graded_perturbation(4, 4, n)).unwrap();
        let split = levi_lift(&a.isotropy()).unwrap();
        let out = levi_algebroid(&a, &split, n, &EngineOptions::default()).unwrap();
        assert!(out.is_linearized());
        let res = out.result();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..4 {
                    assert!(res.structure(i, j, k).filter(|m| m.degree() >= 1).is_zero());
                }
            }
        }
    }

    #[test]
    fn rejects_non_jacobi_data() {
        let z = Jet::zero(1, 2);
        // anchors x d/dx and 0 with [e1, e2] = e2 violate the anchor identity
        let structure = vec![
            vec![vec![z.clone(), z.clone()], vec![z.clone(), Jet::constant(1, 2, int(1))]],
            vec![vec![z.clone(), Jet::constant(1, 2, int(-1))], vec![z.clone(), z.clone()]],
        ];
        let anchor = vec![vec![Jet::zero(1, 3)], vec![Jet::var(1, 3, 0)]];
        assert!(matches!(
            AlgebroidJet::new(1, 2, structure, anchor),
            Err(Error::InvalidAlgebroid(_))
        ));
    }
}
