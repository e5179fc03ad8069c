use nalgebra::DMatrix;

use super::complex::{differential_matrix, Subsets};
use super::module::GModule;
use crate::scalar::to_f64;

/// Operator norm of the minimal-norm right inverse of `d: C^{r-1} -> C^r`
/// on the coboundary space, measured in weighted norms.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyBound {
    pub cochain_degree: usize,
    /// `1 / sigma_min` over the nonzero singular values; 0 for the zero map.
    pub bound: f64,
    pub rank: usize,
    pub largest_singular_value: f64,
}

/// Relative cutoff below which a singular value counts as zero.
const RANK_TOL: f64 = 1e-10;

/// Estimates the homotopy constant for degree-`r` cochains (`r >= 1`).
///
/// `weights[v]` is the squared norm of the `v`-th module basis vector; the
/// cochain norm weights every subset equally.
pub fn homotopy_bound_estimate(module: &GModule, r: usize, weights: &[f64]) -> HomotopyBound {
    assert!(r >= 1, "homotopy bound needs cochain degree at least 1");
    assert_eq!(weights.len(), module.dim(), "one weight per module basis vector");
    assert!(weights.iter().all(|w| *w > 0.0), "weights must be positive");
    let d = module.dim();
    let n = module.algebra().dim();
    let rows = Subsets::new(n, r).len() * d;
    let cols = Subsets::new(n, r - 1).len() * d;
    let zero = HomotopyBound {
        cochain_degree: r,
        bound: 0.0,
        rank: 0,
        largest_singular_value: 0.0,
    };
    if rows == 0 || cols == 0 {
        return zero;
    }
    let dmat = differential_matrix(module, r - 1);
    let mut m = DMatrix::<f64>::zeros(rows, cols);
    for i in 0..rows {
        let wi = weights[i % d].sqrt();
        for (j, v) in dmat.row(i) {
            m[(i, *j)] = wi * to_f64(v) / weights[j % d].sqrt();
        }
    }
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return zero;
    }
    let nonzero: Vec<f64> = sv.iter().cloned().filter(|s| *s > RANK_TOL * smax).collect();
    let smin = nonzero.iter().cloned().fold(f64::INFINITY, f64::min);
    HomotopyBound {
        cochain_degree: r,
        bound: 1.0 / smin,
        rank: nonzero.len(),
        largest_singular_value: smax,
    }
}
