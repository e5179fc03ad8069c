use num_traits::{Signed, Zero};

use super::norms::hermitian_norm_many;
use super::trace::{EngineOptions, IterationTrace, StepKind, StepRecord};
use super::{check_order, EngineObstruction, Outcome};
use crate::cohomology::{solve_coboundary, vector_field_module, Cochain, CoboundarySolution};
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::polyalg::{compose_change, invert_change, CoordChange, Jet, Monomial, VectorField};

/// A Lie algebra action by formal vector fields fixing the origin:
/// `[rho_i, rho_j] = sum_k c^{ij}_k rho_k` through the truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionJet {
    algebra: LieAlgebra,
    fields: Vec<VectorField>,
}

impl ActionJet {
    pub fn new(algebra: LieAlgebra, fields: Vec<VectorField>) -> Result<Self> {
        let n = algebra.dim();
        if fields.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: fields.len(),
            });
        }
        let Some(first) = fields.first() else {
            return Err(Error::InvalidInput("action of the zero algebra".into()));
        };
        let (m, order) = (first.dim(), first.order());
        for f in &fields {
            if f.dim() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: f.dim(),
                });
            }
            if f.order() != order {
                return Err(Error::TruncationMismatch {
                    expected: order,
                    found: f.order(),
                });
            }
            if !f.vanishes_at_origin() {
                return Err(Error::NotVanishingAtOrigin {
                    what: "action field".into(),
                });
            }
        }
        let action = ActionJet { algebra, fields };
        if let Some((i, j, degree)) = action.first_violation() {
            return Err(Error::NotAnAction {
                order,
                detail: format!("[rho_{}, rho_{}] differs in degree {degree}", i + 1, j + 1),
            });
        }
        Ok(action)
    }

    /// Linear action `x -> A_i x` of a matrix representation.
    pub fn linear(algebra: LieAlgebra, matrices: &[Matrix], order: u32) -> Result<Self> {
        let fields = matrices.iter().map(|a| VectorField::linear(a, order)).collect();
        ActionJet::new(algebra, fields)
    }

    fn first_violation(&self) -> Option<(usize, usize, u32)> {
        let n = self.algebra.dim();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.fields[i].lie_bracket(&self.fields[j]);
                let mut rhs = VectorField::zero(self.dim(), self.order());
                for k in 0..n {
                    let c = self.algebra.constant(i, j, k);
                    if !c.is_zero() {
                        rhs = rhs.add(&self.fields[k].map(|f| f.scale(c)));
                    }
                }
                let diff = lhs.sub(&rhs);
                if let Some(d) = diff.comps().iter().filter_map(Jet::lowest_degree).min() {
                    return Some((i, j, d));
                }
            }
        }
        None
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn field(&self, i: usize) -> &VectorField {
        &self.fields[i]
    }

    /// Dimension of the space acted on.
    pub fn dim(&self) -> usize {
        self.fields[0].dim()
    }

    pub fn order(&self) -> u32 {
        self.fields[0].order()
    }

    /// Matrices of the linear parts.
    pub fn linear_matrices(&self) -> Vec<Matrix> {
        self.fields.iter().map(VectorField::linear_matrix).collect()
    }

    pub fn is_linear(&self) -> bool {
        self.lowest_nonlinear_degree().is_none()
    }

    pub fn lowest_nonlinear_degree(&self) -> Option<u32> {
        self.nonlinear_parts().iter().filter_map(Jet::lowest_degree).min()
    }

    fn nonlinear_parts(&self) -> Vec<Jet> {
        self.fields
            .iter()
            .flat_map(|f| f.comps().iter().map(|c| c.filter(|m| m.degree() >= 2)))
            .collect()
    }

    /// The action in the coordinates `y = phi(x)`.
    pub fn pushforward(&self, phi: &CoordChange) -> Result<ActionJet> {
        let inv = invert_change(phi)?;
        Ok(self.pushforward_with_inverse(phi, &inv))
    }

    fn pushforward_with_inverse(&self, phi: &CoordChange, inv: &CoordChange) -> ActionJet {
        ActionJet {
            algebra: self.algebra.clone(),
            fields: self
                .fields
                .iter()
                .map(|f| f.pushforward_with_inverse(phi, inv))
                .collect(),
        }
    }

    pub fn with_order(&self, order: u32) -> ActionJet {
        ActionJet {
            algebra: self.algebra.clone(),
            fields: self.fields.iter().map(|f| f.with_order(order)).collect(),
        }
    }
}

fn degree_cochain(rho: &ActionJet, d: u32) -> Result<Cochain> {
    let module = vector_field_module(
        rho.algebra(),
        &rho.linear_matrices(),
        Monomial::all_of_degree(rho.dim(), d),
    )?
    .shared();
    let basis = module.poly_basis().expect("polynomial module").clone();
    let mut values = Vec::with_capacity(rho.algebra().dim() * basis.len());
    for f in rho.fields() {
        let parts: Vec<Jet> = f.comps().iter().map(|c| c.homogeneous_part(d)).collect();
        values.extend(basis.to_vector(&parts).expect("homogeneous parts lie in the full basis"));
    }
    Cochain::new(module, 1, values)
}

/// The degree-`d` parts of the fields as a 1-cochain with values in degree-`d`
/// vector fields. Requires degrees `2..d-1` to vanish.
pub fn action_remainder(rho: &ActionJet, d: u32) -> Result<Cochain> {
    if d < 2 {
        return Err(Error::InvalidInput("remainder degree must be at least 2".into()));
    }
    check_order(d, rho.order())?;
    if let Some(f) = rho.lowest_nonlinear_degree() {
        if f < d {
            return Err(Error::PreconditionNotNormalized { degree: d, found: f });
        }
    }
    degree_cochain(rho, d)
}

/// Linearizes the action through `order`, or stops at the first nonzero `H^1` class.
pub fn linearize_action(
    rho: &ActionJet,
    order: u32,
    opts: &EngineOptions,
) -> Result<Outcome<ActionJet>> {
    check_order(order, rho.order())?;
    if !opts.radius.is_positive() {
        return Err(Error::NonPositiveRadius);
    }
    let mut cur = rho.with_order(order);
    let m = cur.dim();
    let mut total = CoordChange::identity(m, order);
    let mut trace = IterationTrace::new(opts);
    let mut last = None;
    while let Some(lowest) = cur.lowest_nonlinear_degree() {
        let block = opts.scheduler.next_block(lowest, last, order);
        if block.is_empty() {
            break;
        }
        let norm_before = hermitian_norm_many(&cur.nonlinear_parts(), &opts.radius)?;
        let mut record = StepRecord {
            index: trace.steps.len(),
            kind: StepKind::Action,
            degrees: block.clone(),
            lowest_before: Some(lowest),
            lowest_after: Some(lowest),
            norm_before,
            norm_after: norm_before,
            obstructed: false,
        };
        let mut z = vec![Jet::zero(m, order); m];
        for &e in &block {
            let rem = degree_cochain(&cur, e)?;
            if rem.is_zero() {
                continue;
            }
            match solve_coboundary(&rem)? {
                CoboundarySolution::Primitive(s) => {
                    let basis = rem.module().poly_basis().expect("polynomial module");
                    for (zi, part) in z.iter_mut().zip(basis.from_vector(s.values(), order)) {
                        *zi = &*zi + &part;
                    }
                }
                CoboundarySolution::Obstruction(class) => {
                    record.obstructed = true;
                    trace.steps.push(record);
                    return Ok(Outcome::Obstructed {
                        obstruction: EngineObstruction {
                            degree: e,
                            kind: StepKind::Action,
                            class,
                        },
                        change: total,
                        reached: cur,
                        trace,
                    });
                }
            }
        }
        if z.iter().any(|c| !c.is_zero()) {
            let comps = (0..m).map(|i| &Jet::var(m, order, i) - &z[i]).collect();
            let step = CoordChange::new(comps)?;
            let inv = invert_change(&step)?;
            cur = cur.pushforward_with_inverse(&step, &inv);
            total = compose_change(&total, &step)?;
        }
        record.lowest_after = cur.lowest_nonlinear_degree();
        record.norm_after = hermitian_norm_many(&cur.nonlinear_parts(), &opts.radius)?;
        let treated_max = *block.last().expect("nonempty block");
        if record.lowest_after.is_some_and(|d| d <= treated_max) {
            return Err(Error::SolverFailure(format!(
                "degree {treated_max} not cleared by its own step"
            )));
        }
        trace.steps.push(record);
        last = Some(treated_max);
    }
    Ok(Outcome::Linearized {
        change: total,
        result: cur,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::hamiltonian_fields;
    use crate::normalform::Scheduler;
    use crate::liealg::catalog;
    use crate::scalar::int;

    #[test]
    fn one_dimensional_x_squared_is_obstructed() {
        // R acting on R by x^2 d/dx: zero linear part, H^1 nonzero in every degree
        let x = Jet::var(1, 3, 0);
        let rho = ActionJet::new(catalog::abelian(1), vec![VectorField::new(vec![x.pow(2)]).unwrap()])
            .unwrap();
        let out = linearize_action(&rho, 3, &EngineOptions::default()).unwrap();
        let obs = out.obstruction().unwrap();
        assert_eq!(obs.degree, 2);
        assert!(obs.class.verify());
    }

    #[test]
    fn conjugated_so3_action_linearizes() {
        let n = 4;
        let so3 = catalog::so3();
        let lin = ActionJet::linear(so3.clone(), &hamiltonian_fields(&so3), n).unwrap();
        let v: Vec<Jet> = (0..3).map(|i| Jet::var(3, n, i)).collect();
        let phi = CoordChange::new(vec![
            &v[0] + &(&v[1] * &v[2]),
            &v[1] - &v[0].pow(2).scale(&int(2)),
            &v[2] + &v[0].pow(3),
        ])
        .unwrap();
        let rho = lin.pushforward(&phi).unwrap();
        assert!(!rho.is_linear());
        for sched in [Scheduler::Degree, Scheduler::Doubling] {
            let out = linearize_action(&rho, n, &EngineOptions::with_scheduler(sched)).unwrap();
            assert!(out.is_linearized());
            assert_eq!(rho.pushforward(out.change()).unwrap(), lin);
        }
    }

    #[test]
    fn rejects_non_actions() {
        let x = Jet::var(2, 2, 0);
        let y = Jet::var(2, 2, 1);
        let f1 = VectorField::new(vec![x.clone(), Jet::zero(2, 2)]).unwrap();
        let f2 = VectorField::new(vec![Jet::zero(2, 2), &y + &(&x * &y)]).unwrap();
        let err = ActionJet::new(catalog::abelian(2), vec![f1, f2]).unwrap_err();
        assert!(matches!(err, Error::NotAnAction { .. }));
    }
}
