use jetnorm_core::liealg::catalog;
use jetnorm_core::polyalg::{
    compose_change, invert_change, jacobiator, koszul_bracket, pushforward, sharp, Bivector,
    CoordChange, Jet, PoissonJet, PolyOneForm, VectorField,
};
use jetnorm_core::sample::{random_jet, random_near_identity};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = random_near_identity(&mut r, 3, 5);
        let inv = invert_change(&phi).unwrap();
        prop_assert!(compose_change(&phi, &inv).unwrap().is_identity());
        prop_assert!(compose_change(&inv, &phi).unwrap().is_identity());
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_near_identity(&mut r, 2, 4);
        let b = random_near_identity(&mut r, 2, 4);
        let c = random_near_identity(&mut r, 2, 4);
        let left = compose_change(&compose_change(&a, &b).unwrap(), &c).unwrap();
        let right = compose_change(&a, &compose_change(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn pushforward_is_functorial_and_keeps_jacobi(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = PoissonJet::linear(&catalog::sl2(), 5);
        let a = random_near_identity(&mut r, 3, 5);
        let b = random_near_identity(&mut r, 3, 5);
        let step = pushforward(&pushforward(&pi, &a).unwrap(), &b).unwrap();
        let once = pushforward(&pi, &compose_change(&a, &b).unwrap()).unwrap();
        prop_assert_eq!(&step, &once);
        prop_assert!(jacobiator(&step).iter().all(|(_, j)| j.is_zero()));
        let back = pushforward(&step, &invert_change(&compose_change(&a, &b).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(back, pi);
    }

    #[test]
    fn bracket_is_a_biderivation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = pushforward(&PoissonJet::linear(&catalog::so3(), 4), &random_near_identity(&mut r, 3, 4)).unwrap();
        let f = random_jet(&mut r, 3, 4, 0, 3, 3);
        let g = random_jet(&mut r, 3, 4, 0, 3, 3);
        let h = random_jet(&mut r, 3, 4, 0, 3, 3);
        prop_assert_eq!(pi.bracket(&f, &(&g * &h)), &(&pi.bracket(&f, &g) * &h) + &(&g * &pi.bracket(&f, &h)));
        prop_assert_eq!(pi.bracket(&f, &g), -&pi.bracket(&g, &f));
    }

    #[test]
    fn vector_field_pushforward_respects_brackets(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = 4;
        let v = VectorField::new((0..2).map(|_| random_jet(&mut r, 2, n, 1, 3, 2)).collect()).unwrap();
        let w = VectorField::new((0..2).map(|_| random_jet(&mut r, 2, n, 1, 3, 2)).collect()).unwrap();
        let phi = random_near_identity(&mut r, 2, n);
        let inv = invert_change(&phi).unwrap();
        let lhs = v.lie_bracket(&w).pushforward_with_inverse(&phi, &inv);
        let rhs = v
            .pushforward_with_inverse(&phi, &inv)
            .lie_bracket(&w.pushforward_with_inverse(&phi, &inv));
        prop_assert_eq!(lhs, rhs);
    }
}

fn koszul_case(pi: &Bivector, f: &Jet, g: &Jet, h: &Jet) {
    let n = pi.order();
    let df = PolyOneForm::exact(f);
    let dg = PolyOneForm::exact(g);
    let lhs = koszul_bracket(&df, &dg, pi).unwrap();
    assert_eq!(lhs, PolyOneForm::exact(&pi.bracket(f, g)).with_order(n - 1));
    let alpha = df.scale_by(h);
    let beta = dg;
    let lhs = koszul_bracket(&alpha, &beta.scale_by(f), pi).unwrap();
    let sa = sharp(&alpha, pi);
    let alpha_f = (0..pi.dim()).fold(Jet::zero(pi.dim(), n), |acc, j| &acc + &(&sa[j] * &f.derivative(j)));
    let rhs = koszul_bracket(&alpha, &beta, pi)
        .unwrap()
        .scale_by(&f.with_order(n - 1))
        .add(&beta.with_order(n - 1).scale_by(&alpha_f.with_order(n - 1)));
    assert_eq!(lhs, rhs);
}

#[test]
fn koszul_identities_on_linear_and_pushed_structures() {
    let mut r = rng(11);
    let lin = PoissonJet::linear(&catalog::so3(), 5);
    let pushed = pushforward(&lin, &random_near_identity(&mut r, 3, 5)).unwrap();
    for pi in [lin.bivector(), pushed.bivector()] {
        for _ in 0..6 {
            let f = random_jet(&mut r, 3, 5, 1, 3, 3);
            let g = random_jet(&mut r, 3, 5, 1, 3, 3);
            let h = random_jet(&mut r, 3, 5, 0, 2, 2);
            koszul_case(pi, &f, &g, &h);
        }
    }
}

#[test]
fn change_rejects_mixed_orders() {
    let x = Jet::var(2, 3, 0);
    let y = Jet::var(2, 4, 1);
    assert!(CoordChange::new(vec![x, y]).is_err());
}
