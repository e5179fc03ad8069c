//! Formal normalization of Poisson jets and Lie algebra actions.

mod action;
mod engine;
mod norms;
mod trace;

pub use action::{action_remainder, linearize_action, ActionJet};
pub use engine::EngineObstruction;
pub use norms::{hermitian_inner, hermitian_norm, hermitian_norm_many, hermitian_weight};
pub use trace::{
    convergence_report, ConvergenceReport, EngineOptions, IterationTrace, ReportRow, Scheduler,
    StepKind, StepRecord,
};

pub(crate) use engine::run as run_engine;

use crate::cohomology::{poisson_polynomial_module, Cochain};
use crate::error::{Error, Result};
use crate::liealg::{isotropy_from_linear_part, LeviSplit};
use crate::linalg::Matrix;
use crate::polyalg::{Bivector, CoordChange, Jet, PoissonJet};

/// Result of a normalization run.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<T> {
    /// `change` carries the input to `result`, whose remainder vanishes through the order.
    Linearized {
        change: CoordChange,
        result: T,
        trace: IterationTrace,
    },
    /// The run stopped at a nonzero class; `reached` is normalized below its degree.
    Obstructed {
        obstruction: EngineObstruction,
        change: CoordChange,
        reached: T,
        trace: IterationTrace,
    },
}

impl<T> Outcome<T> {
    pub fn is_linearized(&self) -> bool {
        matches!(self, Outcome::Linearized { .. })
    }

    pub fn change(&self) -> &CoordChange {
        match self {
            Outcome::Linearized { change, .. } | Outcome::Obstructed { change, .. } => change,
        }
    }

    pub fn trace(&self) -> &IterationTrace {
        match self {
            Outcome::Linearized { trace, .. } | Outcome::Obstructed { trace, .. } => trace,
        }
    }

    /// The final object, or the one reached before the obstruction.
    pub fn result(&self) -> &T {
        match self {
            Outcome::Linearized { result, .. } => result,
            Outcome::Obstructed { reached, .. } => reached,
        }
    }

    pub fn obstruction(&self) -> Option<&EngineObstruction> {
        match self {
            Outcome::Linearized { .. } => None,
            Outcome::Obstructed { obstruction, .. } => Some(obstruction),
        }
    }

    pub(crate) fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Linearized {
                change,
                result,
                trace,
            } => Outcome::Linearized {
                change,
                result: f(result),
                trace,
            },
            Outcome::Obstructed {
                obstruction,
                change,
                reached,
                trace,
            } => Outcome::Obstructed {
                obstruction,
                change,
                reached: f(reached),
                trace,
            },
        }
    }
}

/// Checks `1 <= order <= available`.
pub(crate) fn check_order(order: u32, available: u32) -> Result<()> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    if order > available {
        return Err(Error::OrderTooLarge {
            requested: order,
            available,
        });
    }
    Ok(())
}

/// First degree in `2..d` carrying a nonlinear term, as a precondition error.
fn check_normalized_below(parts: &[&Jet], d: u32) -> Result<()> {
    let found = parts
        .iter()
        .filter_map(|j| j.filter(|m| m.degree() >= 2).lowest_degree())
        .min();
    match found {
        Some(f) if f < d => Err(Error::PreconditionNotNormalized { degree: d, found: f }),
        _ => Ok(()),
    }
}

/// The degree-`d` part of `Pi` as a 2-cochain of the isotropy algebra with
/// values in degree-`d` polynomials. Requires degrees `2..d-1` to vanish.
pub fn poisson_remainder(pi: &PoissonJet, d: u32) -> Result<Cochain> {
    if d < 2 {
        return Err(Error::InvalidInput("remainder degree must be at least 2".into()));
    }
    check_order(d, pi.order())?;
    let n = pi.dim();
    let entries: Vec<&Jet> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| pi.get(i, j))
        .collect();
    check_normalized_below(&entries, d)?;
    let module = poisson_polynomial_module(&isotropy_from_linear_part(pi), d).shared();
    let basis = module.poly_basis().expect("polynomial module").clone();
    let mut values = Vec::new();
    for e in &entries {
        values.extend(
            basis
                .to_vector(&[e.homogeneous_part(d)])
                .expect("homogeneous part lies in the full basis"),
        );
    }
    Cochain::new(module, 2, values)
}

/// Linearizes `Pi` through `order`, or stops at the first nonzero `H^2` class.
pub fn linearize_poisson(
    pi: &PoissonJet,
    order: u32,
    opts: &EngineOptions,
) -> Result<Outcome<PoissonJet>> {
    check_order(order, pi.order())?;
    let b = pi.with_order(order);
    let n = b.dim();
    let run = run_engine(&b, &Matrix::identity(n), n, None, opts)?;
    Ok(finish(run).map(PoissonJet::trusted))
}

pub(crate) fn finish(run: engine::EngineRun) -> Outcome<Bivector> {
    match run.obstruction {
        None => Outcome::Linearized {
            change: run.change,
            result: run.bivector,
            trace: run.trace,
        },
        Some(obstruction) => Outcome::Obstructed {
            obstruction,
            change: run.change,
            reached: run.bivector,
            trace: run.trace,
        },
    }
}

/// `Pi` in coordinates adapted to a Levi split, with the s-s brackets linear
/// and the s-r brackets linear in the r-coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LeviNormalForm {
    split: LeviSplit,
    bivector: PoissonJet,
}

impl LeviNormalForm {
    pub fn split(&self) -> &LeviSplit {
        &self.split
    }

    /// The whole bivector in the adapted coordinates `(s, r)`.
    pub fn bivector(&self) -> &PoissonJet {
        &self.bivector
    }

    pub fn order(&self) -> u32 {
        self.bivector.order()
    }

    pub fn s_dim(&self) -> usize {
        self.split.s_basis().len()
    }

    pub fn r_dim(&self) -> usize {
        self.split.r_basis().len()
    }

    /// `{s_a, r_alpha} = sum_beta M_a[alpha][beta] r_beta`.
    pub fn mixed_matrix(&self, a: usize) -> Matrix {
        let p = self.s_dim();
        let q = self.r_dim();
        let m = p + q;
        let c = self.bivector.linear_coefficients();
        Matrix::from_fn(q, q, |al, be| c[(a * m + p + al) * m + p + be].clone())
    }

    /// The r-r bracket `{r_alpha, r_beta}`, unconstrained by the normal form.
    pub fn residual(&self, alpha: usize, beta: usize) -> &Jet {
        let p = self.s_dim();
        self.bivector.get(p + alpha, p + beta)
    }

    /// Whether the s-s and s-r entries have the normal shape.
    pub fn is_normal(&self) -> bool {
        let p = self.s_dim();
        let m = self.bivector.dim();
        (0..p).all(|a| {
            (a + 1..m).all(|j| {
                let e = self.bivector.get(a, j);
                e.terms().all(|(mo, _)| {
                    mo.degree() == 1 && (j < p || (p..m).any(|k| mo.exp(k) == 1))
                })
            })
        })
    }
}

/// Normalizes `Pi` relative to a Levi split of its isotropy algebra: removes
/// the nonlinear s-s terms (`H^2` steps) and the nonlinear s-r terms (`H^1` steps).
pub fn levi_decompose(
    pi: &PoissonJet,
    split: &LeviSplit,
    order: u32,
    opts: &EngineOptions,
) -> Result<Outcome<LeviNormalForm>> {
    check_order(order, pi.order())?;
    if isotropy_from_linear_part(pi) != *split.algebra() {
        return Err(Error::SplitAlgebraMismatch);
    }
    let b = pi.with_order(order);
    let p = split.s_basis().len();
    let run = run_engine(&b, &split.basis_matrix(), p, None, opts)?;
    Ok(finish(run).map(|bivector| LeviNormalForm {
        split: split.clone(),
        bivector: PoissonJet::trusted(bivector),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{solve_coboundary, CoboundarySolution};
    use crate::liealg::{catalog, levi_lift};
    use crate::polyalg::pushforward;

    fn quad(n: usize, order: u32, i: usize, j: usize) -> Jet {
        &Jet::var(n, order, i) * &Jet::var(n, order, j)
    }

    #[test]
    fn abelian_quadratic_is_obstructed() {
        // {x, y} = x^2 on a plane with zero linear part
        let b = Bivector::from_upper(2, 4, [(0, 1, quad(2, 4, 0, 0))]).unwrap();
        let pi = PoissonJet::new(b).unwrap();
        let out = linearize_poisson(&pi, 4, &EngineOptions::default()).unwrap();
        let obs = out.obstruction().unwrap();
        assert_eq!(obs.degree, 2);
        assert!(obs.class.verify());
        assert_eq!(obs.class.cohomology_dimension(), 3);
    }

    #[test]
    fn so3_with_casimir_term_linearizes() {
        // Pi = Pi_so3 + (x^2 + y^2 + z^2) * (linear so3 bivector), Poisson since C is a Casimir
        let n = 4;
        let so3 = catalog::so3();
        let lin = Bivector::linear(&so3, n);
        let c = &(&quad(3, n, 0, 0) + &quad(3, n, 1, 1)) + &quad(3, n, 2, 2);
        let b = lin.map(|e| e + &(&c * e));
        let pi = PoissonJet::new(b).unwrap();
        for sched in [Scheduler::Degree, Scheduler::Doubling] {
            let out = linearize_poisson(&pi, n, &EngineOptions::with_scheduler(sched)).unwrap();
            assert!(out.is_linearized());
            assert_eq!(pushforward(&pi, out.change()).unwrap(), PoissonJet::linear(&so3, n));
            assert!(out.trace().is_consistent());
        }
    }

    #[test]
    fn remainder_is_coboundary_for_pushed_linear() {
        let n = 3;
        let so3 = catalog::so3();
        let x = Jet::var(3, n, 0);
        let y = Jet::var(3, n, 1);
        let z = Jet::var(3, n, 2);
        let phi = CoordChange::new(vec![&x + &quad(3, n, 1, 2), y, z]).unwrap();
        let pi = pushforward(&PoissonJet::linear(&so3, n), &phi).unwrap();
        let rem = poisson_remainder(&pi, 2).unwrap();
        assert!(matches!(
            solve_coboundary(&rem).unwrap(),
            CoboundarySolution::Primitive(_)
        ));
        assert!(matches!(
            poisson_remainder(&pi, 3),
            Err(Error::PreconditionNotNormalized { degree: 3, found: 2 })
        ));
    }

    #[test]
    fn levi_on_gl2_pushed_forward() {
        let n = 3;
        let g = catalog::gl2();
        let split = levi_lift(&g).unwrap();
        let v: Vec<Jet> = (0..4).map(|i| Jet::var(4, n, i)).collect();
        let phi = CoordChange::new(vec![
            &v[0] + &quad(4, n, 3, 3),
            &v[1] + &quad(4, n, 0, 3),
            v[2].clone(),
            &v[3] - &quad(4, n, 0, 1),
        ])
        .unwrap();
        let pi = pushforward(&PoissonJet::linear(&g, n), &phi).unwrap();
        let out = levi_decompose(&pi, &split, n, &EngineOptions::default()).unwrap();
        assert!(out.is_linearized());
        assert!(out.result().is_normal());
        assert_eq!(
            pushforward(&pi, out.change()).unwrap(),
            *out.result().bivector()
        );
        assert_eq!(out.result().mixed_matrix(0), Matrix::zeros(1, 1));
    }
}
