//! Random test objects with small rational coefficients.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::algebroid::{AlgebroidJet, GradedChange, LinearAlgebroid};
use crate::cohomology::{cochain_dim, Cochain, GModule};
use crate::linalg::Matrix;
use crate::polyalg::{CoordChange, Jet, Monomial};
use crate::scalar::{frac, Scalar};

/// A coefficient `p/q` with `p` in `-2..=2` and `q` in `{1, 2, 3}`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    frac(rng.random_range(-2..=2), *[1, 2, 3].choose(rng).expect("nonempty"))
}

fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let s = small_rational(rng);
        if s != Scalar::from_integer(0.into()) {
            return s;
        }
    }
}

/// A jet in `nvars` variables with `terms` random monomials of degree `lo..=hi`.
pub fn random_jet<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    order: u32,
    lo: u32,
    hi: u32,
    terms: usize,
) -> Jet {
    let mut j = Jet::zero(nvars, order);
    let hi = hi.min(order);
    if lo > hi {
        return j;
    }
    for _ in 0..terms {
        let d = rng.random_range(lo..=hi);
        let pool = Monomial::all_of_degree(nvars, d);
        let m = pool.choose(rng).expect("nonempty monomial pool").clone();
        j.add_term(m, nonzero_rational(rng));
    }
    j
}

/// `x + h(x)` with `h` of degree `2..=4`, a few terms per component.
pub fn random_near_identity<R: Rng + ?Sized>(rng: &mut R, m: usize, order: u32) -> CoordChange {
    let comps = (0..m)
        .map(|i| &Jet::var(m, order, i) + &random_jet(rng, m, order, 2, 4, 2))
        .collect();
    CoordChange::new(comps).expect("near-identity change")
}

/// An invertible matrix with small entries.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Matrix {
    loop {
        let a = Matrix::from_fn(m, m, |_, _| small_rational(rng));
        if a.inverse().is_some() {
            return a;
        }
    }
}

/// A cochain of the given degree with uniformly random small entries.
pub fn random_cochain<R: Rng + ?Sized>(
    rng: &mut R,
    module: std::sync::Arc<GModule>,
    degree: usize,
) -> Cochain {
    let len = cochain_dim(&module, degree);
    let values = (0..len).map(|_| small_rational(rng)).collect();
    Cochain::new(module, degree, values).expect("length matches")
}

/// A graded change of order `N` with near-identity base map and frame.
pub fn random_graded_change<R: Rng + ?Sized>(
    rng: &mut R,
    base: usize,
    rank: usize,
    order: u32,
) -> GradedChange {
    let b = (0..base)
        .map(|j| &Jet::var(base, order + 1, j) + &random_jet(rng, base, order + 1, 2, 4, 2))
        .collect();
    let frame = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|k| {
                    let mut g = random_jet(rng, base, order, 1, 3, 1);
                    if i == k {
                        g.add_term(Monomial::one(base), Scalar::from_integer(1.into()));
                    }
                    g
                })
                .collect()
        })
        .collect();
    GradedChange::new(b, frame).expect("identity linear part")
}

/// A linear algebroid disguised by a random graded change.
pub fn random_algebroid<R: Rng + ?Sized>(
    rng: &mut R,
    linear: &LinearAlgebroid,
    order: u32,
) -> AlgebroidJet {
    let g = random_graded_change(rng, linear.base_dim(), linear.algebra().dim(), order);
    linear
        .to_jet(order)
        .pushforward(&g)
        .expect("graded changes preserve algebroids")
}
