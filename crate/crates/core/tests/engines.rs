use jetnorm_core::cohomology::{
    cohomology_dimension, is_cocycle, poisson_polynomial_module, solve_coboundary,
    CoboundarySolution,
};
use jetnorm_core::liealg::{catalog, levi_lift, verify_levi_split, LieAlgebra};
use jetnorm_core::normalform::{
    action_remainder, convergence_report, levi_decompose, linearize_action, linearize_poisson,
    poisson_remainder, ActionJet, EngineOptions, Scheduler,
};
use jetnorm_core::polyalg::{pushforward, Bivector, CoordChange, Jet, PoissonJet, VectorField};
use jetnorm_core::sample::random_near_identity;
use jetnorm_core::scalar::{frac, int};
use jetnorm_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn perturbed(alg: &LieAlgebra, order: u32, seed: u64) -> PoissonJet {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let phi = random_near_identity(&mut r, alg.dim(), order);
    pushforward(&PoissonJet::linear(alg, order), &phi).unwrap()
}

#[test]
fn linear_input_needs_no_steps() {
    let pi = PoissonJet::linear(&catalog::so3(), 6);
    let out = linearize_poisson(&pi, 6, &EngineOptions::default()).unwrap();
    assert!(out.change().is_identity());
    assert!(out.trace().steps.is_empty());
    assert!(convergence_report(out.trace()).rows.is_empty());
}

#[test]
fn zero_bivector_is_accepted() {
    let pi = PoissonJet::zero(3, 4);
    let out = linearize_poisson(&pi, 4, &EngineOptions::default()).unwrap();
    assert!(out.is_linearized());
    assert!(out.change().is_identity());
}

#[test]
fn schedulers_agree_on_linearity() {
    for seed in 0..4 {
        let pi = perturbed(&catalog::sl2(), 6, seed);
        for sched in [Scheduler::Degree, Scheduler::Doubling] {
            let out = linearize_poisson(&pi, 6, &EngineOptions::with_scheduler(sched)).unwrap();
            assert!(out.result().is_linear());
            assert_eq!(pushforward(&pi, out.change()).unwrap(), *out.result());
            assert!(out.trace().is_consistent());
        }
    }
}

#[test]
fn degree_scheduler_advances_one_degree_per_step() {
    let n = 6;
    for seed in 0..3 {
        let pi = perturbed(&catalog::so3(), n, seed);
        let out = linearize_poisson(&pi, n, &EngineOptions::with_scheduler(Scheduler::Degree)).unwrap();
        let degrees: Vec<u32> = out.trace().steps.iter().flat_map(|s| s.degrees.clone()).collect();
        assert!(out.trace().steps.iter().all(|s| s.degrees.len() == 1));
        let first = degrees[0];
        assert_eq!(degrees, (first..first + degrees.len() as u32).collect::<Vec<_>>());
        assert_eq!(convergence_report(out.trace()).doubling_law, None);
    }
}

#[test]
fn doubling_trace_on_quadratic_perturbation() {
    let n = 9;
    let x: Vec<Jet> = (0..3).map(|i| Jet::var(3, n, i)).collect();
    let phi = CoordChange::new(vec![x[0].clone(), x[1].clone(), &x[2] + &x[0].pow(2)]).unwrap();
    let pi = pushforward(&PoissonJet::linear(&catalog::so3(), n), &phi).unwrap();
    let out = linearize_poisson(&pi, n, &EngineOptions::default()).unwrap();
    let lowest: Vec<u32> = out.trace().steps.iter().map(|s| s.lowest_before.unwrap()).collect();
    assert_eq!(lowest[0], 2);
    for (nu, d) in lowest.iter().enumerate() {
        assert!(*d >= 1 << nu);
    }
    assert_eq!(convergence_report(out.trace()).doubling_law, Some(true));
}

#[test]
fn remainders_are_cocycles() {
    for seed in 0..3 {
        let pi = perturbed(&catalog::so3(), 4, seed);
        let rem = poisson_remainder(&pi, 2).unwrap();
        assert!(is_cocycle(&rem));
    }
    let x: Vec<Jet> = (0..3).map(|i| Jet::var(3, 3, i)).collect();
    let phi = CoordChange::new(vec![x[0].clone(), x[1].clone(), &x[2] + &x[0].pow(2)]).unwrap();
    let pi = pushforward(&PoissonJet::linear(&catalog::so3(), 3), &phi).unwrap();
    let rem = poisson_remainder(&pi, 2).unwrap();
    assert!(!rem.is_zero());
    assert!(is_cocycle(&rem));
    let lin = PoissonJet::linear(&catalog::so3(), 3);
    assert!(poisson_remainder(&lin, 3).unwrap().is_zero());
}

#[test]
fn abelian_remainder_is_the_bracket() {
    let x = Jet::var(2, 3, 0);
    let pi = PoissonJet::new(Bivector::from_upper(2, 3, [(0, 1, x.pow(2))]).unwrap()).unwrap();
    let rem = poisson_remainder(&pi, 2).unwrap();
    assert_eq!(rem.value(&[0, 1], 0), int(1));
    assert_eq!(rem.nonzero_entries().len(), 1);
}

#[test]
fn obstruction_cannot_be_removed_at_its_degree() {
    let x = Jet::var(2, 3, 0);
    let pi = PoissonJet::new(Bivector::from_upper(2, 3, [(0, 1, x.pow(2))]).unwrap()).unwrap();
    let out = linearize_poisson(&pi, 3, &EngineOptions::default()).unwrap();
    let obs = out.obstruction().unwrap();
    assert!(obs.class.verify());
    assert!(matches!(
        solve_coboundary(obs.class.cocycle()).unwrap(),
        CoboundarySolution::Obstruction(_)
    ));
    // a near-identity change moves the remainder by a coboundary, so the pairing is unchanged
    let y = Jet::var(2, 3, 1);
    let phi = CoordChange::new(vec![&x + &(&x * &y), &y - &y.pow(2).scale(&frac(1, 2))]).unwrap();
    let moved = pushforward(&pi, &phi).unwrap();
    let rem = poisson_remainder(&moved, 2).unwrap();
    let pairing = obs
        .class
        .functional()
        .iter()
        .zip(rem.values())
        .fold(int(0), |acc, (a, b)| acc + a * b);
    assert_eq!(pairing, obs.class.pairing());
    let module = poisson_polynomial_module(&catalog::abelian(2), 2);
    assert_eq!(cohomology_dimension(&module, 2), 3);
}

#[test]
fn action_remainder_and_linearization() {
    let n = 5;
    let so3 = catalog::so3();
    let lin = ActionJet::linear(so3.clone(), &jetnorm_core::cohomology::hamiltonian_fields(&so3), n).unwrap();
    assert!(action_remainder(&lin, 2).unwrap().is_zero());
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let phi = random_near_identity(&mut r, 3, n);
    let rho = lin.pushforward(&phi).unwrap();
    let d = rho.lowest_nonlinear_degree().unwrap();
    let rem = action_remainder(&rho, d).unwrap();
    assert!(!rem.is_zero());
    assert!(is_cocycle(&rem));
    if d == 2 {
        assert!(matches!(
            action_remainder(&rho, 3),
            Err(Error::PreconditionNotNormalized { degree: 3, found: 2 })
        ));
    }
    let out = linearize_action(&rho, n, &EngineOptions::default()).unwrap();
    assert_eq!(*out.result(), lin);
}

#[test]
fn x_squared_action_remainder() {
    let x = Jet::var(1, 3, 0);
    let rho = ActionJet::new(catalog::abelian(1), vec![VectorField::new(vec![x.pow(2)]).unwrap()]).unwrap();
    let rem = action_remainder(&rho, 2).unwrap();
    assert!(!rem.is_zero());
    assert!(is_cocycle(&rem));
}

#[test]
fn levi_with_empty_s_is_identity() {
    let g = catalog::aff1();
    let split = verify_levi_split(&g, &[], &[g.basis_vector(0), g.basis_vector(1)]).unwrap();
    let y = Jet::var(2, 4, 1);
    let x = Jet::var(2, 4, 0);
    let b = Bivector::from_upper(2, 4, [(0, 1, &y + &(&x * &y))]).unwrap();
    let pi = PoissonJet::new(b).unwrap();
    let out = levi_decompose(&pi, &split, 4, &EngineOptions::default()).unwrap();
    assert!(out.change().is_identity());
    assert_eq!(out.result().bivector(), &pi);
    assert_eq!(out.result().s_dim(), 0);
}

#[test]
fn levi_with_full_semisimple_s_linearizes() {
    let pi = perturbed(&catalog::so3(), 5, 3);
    let split = levi_lift(&catalog::so3()).unwrap();
    let out = levi_decompose(&pi, &split, 5, &EngineOptions::default()).unwrap();
    assert!(out.result().bivector().is_linear());
}

#[test]
fn levi_rejects_foreign_split() {
    let pi = perturbed(&catalog::gl2(), 3, 1);
    let split = levi_lift(&catalog::sl2_semidirect_r2()).unwrap();
    assert_eq!(
        levi_decompose(&pi, &split, 3, &EngineOptions::default()).unwrap_err(),
        Error::SplitAlgebraMismatch
    );
}

#[test]
fn order_bounds_are_checked() {
    let pi = PoissonJet::linear(&catalog::so3(), 3);
    assert_eq!(
        linearize_poisson(&pi, 4, &EngineOptions::default()).unwrap_err(),
        Error::OrderTooLarge { requested: 4, available: 3 }
    );
    let opts = EngineOptions {
        radius: int(0),
        ..EngineOptions::default()
    };
    assert_eq!(linearize_poisson(&pi, 3, &opts).unwrap_err(), Error::NonPositiveRadius);
}
