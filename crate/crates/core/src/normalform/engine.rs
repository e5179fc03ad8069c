//! The bracket engine: `H^2` steps on the s-s brackets followed by `H^1`
//! steps on the s-r brackets, in coordinates adapted to a split `s ⊕ r` of the
//! isotropy algebra. With `r = 0` this is plain linearization.

use num_traits::{Signed, Zero};

use super::norms::hermitian_norm_many;
use super::trace::{EngineOptions, IterationTrace, StepKind, StepRecord};
use crate::cohomology::{
    solve_coboundary, twisted_polynomial_module, Cochain, CoboundarySolution, ObstructionClass,
};
use crate::error::{Error, Result};
use crate::liealg::{LeviViolation, LieAlgebra};
use crate::linalg::Matrix;
use crate::polyalg::{compose_change, invert_change, Bivector, CoordChange, Jet, Monomial};

/// Where a normalization stopped for lack of a primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineObstruction {
    pub degree: u32,
    /// `Bracket` for an `H^2` class, `Action` for an `H^1` class.
    pub kind: StepKind,
    pub class: ObstructionClass,
}

pub(crate) struct EngineRun {
    pub change: CoordChange,
    pub bivector: Bivector,
    pub trace: IterationTrace,
    pub obstruction: Option<EngineObstruction>,
}

/// Problem data in the adapted coordinates.
struct Adapted {
    m: usize,
    p: usize,
    order: u32,
    s_algebra: LieAlgebra,
    fields: Vec<Matrix>,
    /// For each group of r-variables (indices into `0..q`), the twist matrices.
    groups: Vec<(Vec<usize>, Vec<Matrix>)>,
    fiber: Option<Vec<bool>>,
}

impl Adapted {
    fn new(b: &Bivector, p: usize, fiber: Option<Vec<bool>>) -> Result<Self> {
        let m = b.dim();
        let q = m - p;
        let c = b.linear_coefficients();
        let cst = |i: usize, j: usize, k: usize| &c[(i * m + j) * m + k];
        for a in 0..p {
            for bb in 0..p {
                if (p..m).any(|k| !cst(a, bb, k).is_zero()) {
                    return Err(Error::SplitNotCertified(LeviViolation::SNotSubalgebra));
                }
            }
            for al in p..m {
                if (0..p).any(|k| !cst(a, al, k).is_zero()) {
                    return Err(Error::SplitNotCertified(LeviViolation::RNotInvariant));
                }
            }
        }
        let mut sc = Vec::with_capacity(p * p * p);
        for a in 0..p {
            for bb in 0..p {
                for k in 0..p {
                    sc.push(cst(a, bb, k).clone());
                }
            }
        }
        let s_algebra = LieAlgebra::new(p, sc)?;
        let fields: Vec<Matrix> = (0..p)
            .map(|a| Matrix::from_fn(m, m, |j, k| cst(a, j, k).clone()))
            .collect();

        let fd = |i: usize| -> u32 { fiber.as_ref().map_or(0, |f| f[i] as u32) };
        let mut group_keys: Vec<u32> = (p..m).map(fd).collect();
        group_keys.sort_unstable();
        group_keys.dedup();
        let mut groups = Vec::new();
        for key in group_keys {
            let members: Vec<usize> = (0..q).filter(|&al| fd(p + al) == key).collect();
            for a in 0..p {
                for &al in &members {
                    for be in 0..q {
                        if fd(p + be) != key && !cst(a, p + al, p + be).is_zero() {
                            return Err(Error::InvalidAlgebroid(
                                "linear bracket does not preserve the fiber grading".into(),
                            ));
                        }
                    }
                }
            }
            let twist: Vec<Matrix> = (0..p)
                .map(|a| {
                    Matrix::from_fn(members.len(), members.len(), |x, y| {
                        -cst(a, p + members[x], p + members[y]).clone()
                    })
                })
                .collect();
            groups.push((members, twist));
        }
        if let Some(f) = &fiber {
            if (0..p).any(|a| f[a] != f[0]) {
                return Err(Error::InvalidAlgebroid(
                    "s-coordinates of mixed fiber degree".into(),
                ));
            }
        }
        Ok(Adapted {
            m,
            p,
            order: b.order(),
            s_algebra,
            fields,
            groups,
            fiber,
        })
    }

    fn monomials(&self, e: u32, fiber_degree: u32) -> Vec<Monomial> {
        let all = Monomial::all_of_degree(self.m, e);
        match &self.fiber {
            None => all,
            Some(mask) => all
                .into_iter()
                .filter(|mo| mo.partial_degree(mask) == fiber_degree)
                .collect(),
        }
    }

    fn fiber_degree(&self, var: usize) -> u32 {
        self.fiber.as_ref().map_or(0, |f| f[var] as u32)
    }

    /// Nonlinear parts of the brackets the engine normalizes.
    fn remainder(&self, b: &Bivector) -> Vec<Jet> {
        let mut out = Vec::new();
        for a in 0..self.p {
            for j in a + 1..self.m {
                out.push(b.get(a, j).filter(|mo| mo.degree() >= 2));
            }
        }
        out
    }

    fn lowest(&self, b: &Bivector) -> Option<u32> {
        self.remainder(b).iter().filter_map(Jet::lowest_degree).min()
    }

    /// Solves the s-s equations on `degrees`; `Ok(Err(..))` is an obstruction.
    fn bracket_step(
        &self,
        b: &Bivector,
        degrees: &[u32],
    ) -> Result<std::result::Result<Vec<Jet>, EngineObstruction>> {
        let p = self.p;
        let mut sigma = vec![Jet::zero(self.m, self.order); p];
        if p < 2 {
            return Ok(Ok(sigma));
        }
        let fd = self.fiber_degree(0);
        for &e in degrees {
            let module = twisted_polynomial_module(
                &self.s_algebra,
                &self.fields,
                self.monomials(e, fd),
                None,
                None,
            )?
            .shared();
            let basis = module.poly_basis().expect("polynomial module").clone();
            let mut values = Vec::with_capacity(p * (p - 1) / 2 * basis.len());
            for a in 0..p {
                for c in a + 1..p {
                    let part = b.get(a, c).homogeneous_part(e);
                    values.extend(basis.to_vector(&[part]).ok_or_else(|| {
                        Error::InvalidAlgebroid("bracket is not homogeneous in the fiber grading".into())
                    })?);
                }
            }
            let rem = Cochain::new(module, 2, values)?;
            if rem.is_zero() {
                continue;
            }
            match solve_coboundary(&rem)? {
                CoboundarySolution::Primitive(s) => {
                    let d = basis.len();
                    for (a, sig) in sigma.iter_mut().enumerate() {
                        let part = basis.from_vector(&s.values()[a * d..(a + 1) * d], self.order);
                        *sig = &*sig + &part[0];
                    }
                }
                CoboundarySolution::Obstruction(class) => {
                    return Ok(Err(EngineObstruction {
                        degree: e,
                        kind: StepKind::Bracket,
                        class,
                    }))
                }
            }
        }
        Ok(Ok(sigma))
    }

    /// Solves the s-r equations on `degrees`, returning corrections for the r-variables.
    fn mixed_step(
        &self,
        b: &Bivector,
        degrees: &[u32],
    ) -> Result<std::result::Result<Vec<Jet>, EngineObstruction>> {
        let p = self.p;
        let q = self.m - p;
        let mut tau = vec![Jet::zero(self.m, self.order); q];
        if p == 0 {
            return Ok(Ok(tau));
        }
        for &e in degrees {
            for (members, twist) in &self.groups {
                let fd = self.fiber_degree(p + members[0]);
                let module = twisted_polynomial_module(
                    &self.s_algebra,
                    &self.fields,
                    self.monomials(e, fd),
                    Some(twist),
                    None,
                )?
                .shared();
                let basis = module.poly_basis().expect("polynomial module").clone();
                let mut values = Vec::with_capacity(p * basis.len());
                for a in 0..p {
                    let comps: Vec<Jet> = members
                        .iter()
                        .map(|&al| b.get(a, p + al).homogeneous_part(e))
                        .collect();
                    values.extend(basis.to_vector(&comps).ok_or_else(|| {
                        Error::InvalidAlgebroid("bracket is not homogeneous in the fiber grading".into())
                    })?);
                }
                let rem = Cochain::new(module, 1, values)?;
                if rem.is_zero() {
                    continue;
                }
                match solve_coboundary(&rem)? {
                    CoboundarySolution::Primitive(s) => {
                        let parts = basis.from_vector(s.values(), self.order);
                        for (k, &al) in members.iter().enumerate() {
                            tau[al] = &tau[al] + &parts[k];
                        }
                    }
                    CoboundarySolution::Obstruction(class) => {
                        return Ok(Err(EngineObstruction {
                            degree: e,
                            kind: StepKind::Action,
                            class,
                        }))
                    }
                }
            }
        }
        Ok(Ok(tau))
    }
}

fn near_identity(m: usize, order: u32, corrections: &[(usize, &Jet)]) -> CoordChange {
    let mut comps: Vec<Jet> = (0..m).map(|i| Jet::var(m, order, i)).collect();
    for (i, c) in corrections {
        comps[*i] = &comps[*i] - c;
    }
    CoordChange::new(comps).expect("near-identity change is invertible")
}

fn apply(
    b: &Bivector,
    total: &CoordChange,
    step: &CoordChange,
) -> Result<(Bivector, CoordChange)> {
    let inv = invert_change(step)?;
    Ok((b.pushforward_with_inverse(step, &inv), compose_change(total, step)?))
}

/// Runs the engine on `pi` (already truncated to the target order).
///
/// `basis` has the s-basis as its first `p` rows and the r-basis after; the
/// first step is the linear change to those coordinates. `fiber` marks the
/// fiber variables of the adapted coordinates when the changes must preserve
/// the fiber grading.
pub(crate) fn run(
    pi: &Bivector,
    basis: &Matrix,
    p: usize,
    fiber: Option<Vec<bool>>,
    opts: &EngineOptions,
) -> Result<EngineRun> {
    if !opts.radius.is_positive() {
        return Err(Error::NonPositiveRadius);
    }
    let m = pi.dim();
    let order = pi.order();
    let linear = CoordChange::linear(basis, order)?;
    let (mut b, mut total) = if linear.is_identity() {
        (pi.clone(), linear)
    } else {
        apply(pi, &CoordChange::identity(m, order), &linear)?
    };
    let ad = Adapted::new(&b, p, fiber)?;
    let kind = if p == m { StepKind::Bracket } else { StepKind::Levi };
    let mut trace = IterationTrace::new(opts);
    let mut last: Option<u32> = None;
    while let Some(lowest) = ad.lowest(&b) {
        let block = opts.scheduler.next_block(lowest, last, order);
        if block.is_empty() {
            break;
        }
        let norm_before = hermitian_norm_many(&ad.remainder(&b), &opts.radius)?;
        let mut record = StepRecord {
            index: trace.steps.len(),
            kind,
            degrees: block.clone(),
            lowest_before: Some(lowest),
            lowest_after: Some(lowest),
            norm_before,
            norm_after: norm_before,
            obstructed: false,
        };
        let sigma = match ad.bracket_step(&b, &block)? {
            Ok(s) => s,
            Err(obstruction) => {
                record.obstructed = true;
                trace.steps.push(record);
                return Ok(EngineRun {
                    change: total,
                    bivector: b,
                    trace,
                    obstruction: Some(obstruction),
                });
            }
        };
        if sigma.iter().any(|s| !s.is_zero()) {
            let corr: Vec<(usize, &Jet)> = sigma.iter().enumerate().collect();
            (b, total) = apply(&b, &total, &near_identity(m, order, &corr))?;
        }
        let tau = match ad.mixed_step(&b, &block)? {
            Ok(t) => t,
            Err(obstruction) => {
                record.obstructed = true;
                record.lowest_after = ad.lowest(&b);
                record.norm_after = hermitian_norm_many(&ad.remainder(&b), &opts.radius)?;
                trace.steps.push(record);
                return Ok(EngineRun {
                    change: total,
                    bivector: b,
                    trace,
                    obstruction: Some(obstruction),
                });
            }
        };
        if tau.iter().any(|t| !t.is_zero()) {
            let corr: Vec<(usize, &Jet)> = tau.iter().enumerate().map(|(i, t)| (p + i, t)).collect();
            (b, total) = apply(&b, &total, &near_identity(m, order, &corr))?;
        }
        record.lowest_after = ad.lowest(&b);
        record.norm_after = hermitian_norm_many(&ad.remainder(&b), &opts.radius)?;
        let treated_max = *block.last().unwrap();
        if record.lowest_after.is_some_and(|d| d <= treated_max) {
            return Err(Error::SolverFailure(format!(
                "degree {treated_max} not cleared by its own step"
            )));
        }
        trace.steps.push(record);
        last = Some(treated_max);
    }
    Ok(EngineRun {
        change: total,
        bivector: b,
        trace,
        obstruction: None,
    })
}
