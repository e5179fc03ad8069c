use std::sync::Arc;
use std::time::{Duration, Instant};

use jetnorm_cli::cli::main_with_args;
use jetnorm_cli::corpus;
use jetnorm_core::algebroid::{
    coadjoint_algebroid, fiberwise_linearity_check, linearize_algebroid, AlgebroidJet, GradedChange,
    LinearAlgebroid,
};
use jetnorm_core::cohomology::{
    ce_differential, cochain_dim, cohomology_dimension, hamiltonian_fields, poisson_polynomial_module,
    Cochain, GModule, ObstructionClass,
};
use jetnorm_core::liealg::{catalog, verify_levi_split, LieAlgebra};
use jetnorm_core::normalform::{
    hermitian_inner, hermitian_norm, levi_decompose, linearize_action, linearize_poisson, poisson_remainder,
    ActionJet, EngineOptions, Outcome, Scheduler,
};
use jetnorm_core::polyalg::{
    koszul_bracket, pushforward, sharp, Bivector, Jet, Monomial, PoissonJet, PolyOneForm, VectorField,
};
use jetnorm_core::sample::{random_algebroid, random_cochain, random_jet, random_near_identity, small_rational};
use jetnorm_core::scalar::{frac, int, Scalar};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

/// Applies `lambda` to `d e_k` for every basis cochain `e_k` one degree below the class.
fn annihilates_coboundaries(class: &ObstructionClass) -> bool {
    let module: Arc<GModule> = class.cocycle().module().clone();
    let r = class.degree() - 1;
    let len = cochain_dim(&module, r);
    (0..len).all(|k| {
        let mut v = vec![Scalar::zero(); len];
        v[k] = int(1);
        let e = Cochain::new(module.clone(), r, v).unwrap();
        dot(class.functional(), ce_differential(&e).values()).is_zero()
    })
}

fn perturbed(alg: &LieAlgebra, order: u32, seed: u64) -> PoissonJet {
    let phi = random_near_identity(&mut rng(seed), alg.dim(), order);
    pushforward(&PoissonJet::linear(alg, order), &phi).unwrap()
}

fn c1_d_squared() -> Check {
    let start = Instant::now();
    let algebras = [
        ("so3", catalog::so3()),
        ("sl2", catalog::sl2()),
        ("gl2", catalog::gl2()),
        ("abelian2", catalog::abelian(2)),
    ];
    let mut r = rng(1);
    let mut count = 0;
    for (name, g) in &algebras {
        for d in 1..=4 {
            let module = poisson_polynomial_module(g, d).shared();
            for deg in 0..=2 {
                for _ in 0..5 {
                    let c = random_cochain(&mut r, module.clone(), deg);
                    ensure(ce_differential(&ce_differential(&c)).is_zero(), || {
                        format!("d(d c) != 0 for {name}, module degree {d}, cochain degree {deg}")
                    })?;
                    count += 1;
                }
            }
        }
    }
    let t = start.elapsed();
    ensure(count >= 200, || format!("only {count} cochains"))?;
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!("{count} cochains in {:.2?}", t))
}

fn c2_whitehead() -> Check {
    let start = Instant::now();
    for (name, g) in [("so3", catalog::so3()), ("sl2", catalog::sl2())] {
        for d in 2..=5 {
            let m = poisson_polynomial_module(&g, d);
            for r in 1..=2 {
                let h = cohomology_dimension(&m, r);
                ensure(h == 0, || format!("H^{r} = {h} for {name} at module degree {d}"))?;
            }
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("16 groups vanish in {:.2?}", t))
}

fn c3_c4_linearize() -> (Check, Check) {
    let n = 8;
    let mut outcomes: Vec<Outcome<PoissonJet>> = Vec::new();
    let mut run = || -> Result<String, String> {
        let mut count = 0;
        for (name, g) in [("so3", catalog::so3()), ("sl2", catalog::sl2())] {
            let lin = PoissonJet::linear(&g, n);
            for seed in 0..50 {
                let pi = perturbed(&g, n, 1000 + seed);
                let out = linearize_poisson(&pi, n, &EngineOptions::default())
                    .map_err(|e| format!("{name} seed {seed}: {e}"))?;
                ensure(out.obstruction().is_none(), || format!("{name} seed {seed}: obstructed"))?;
                ensure(pushforward(&pi, out.change()).unwrap() == lin, || {
                    format!("{name} seed {seed}: pushforward is not the linear bracket")
                })?;
                outcomes.push(out);
                count += 1;
            }
        }
        Ok(format!("{count} perturbations linearized exactly at N = {n}"))
    };
    let c3 = run();
    let c4 = (|| {
        ensure(!outcomes.is_empty(), || "no traces".into())?;
        let mut steps = 0;
        for (i, out) in outcomes.iter().enumerate() {
            let trace = out.trace();
            ensure(trace.scheduler == Scheduler::Doubling, || format!("trace {i} not doubling"))?;
            for (nu, s) in trace.steps.iter().enumerate() {
                let lowest = s.lowest_before.ok_or_else(|| format!("trace {i} step {nu} has no remainder"))?;
                ensure(u64::from(lowest) >= 1u64 << nu, || {
                    format!("trace {i} step {nu}: lowest degree {lowest} < 2^{nu}")
                })?;
                steps += 1;
            }
        }
        Ok(format!("{} traces, {steps} steps", outcomes.len()))
    })();
    (c3, c4)
}

fn c5_abelian_obstruction() -> Check {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(["jetnorm", "corpus", "run", "abelian-x2"], &mut out, &mut err);
    ensure(code == 2, || format!("exit code {code}"))?;
    let report: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    ensure(report["exit_code"] == 2, || "report exit code is not 2".into())?;

    let x = Jet::var(2, 6, 0);
    let pi = PoissonJet::new(Bivector::from_upper(2, 6, [(0, 1, x.pow(2))]).unwrap()).unwrap();
    let spec_pi = corpus::find("abelian-x2").unwrap().spec(None).unwrap().poisson().unwrap();
    ensure(spec_pi == pi, || "corpus entry is not {x, y} = x^2".into())?;
    let outcome = linearize_poisson(&pi, 6, &EngineOptions::default()).unwrap();
    let obs = outcome.obstruction().ok_or("no obstruction")?;
    ensure(annihilates_coboundaries(&obs.class), || "functional misses a coboundary".into())?;
    let rem = poisson_remainder(&pi, 2).unwrap();
    let pairing = dot(obs.class.functional(), rem.values());
    ensure(!pairing.is_zero(), || "functional vanishes on the remainder".into())?;
    Ok(format!("exit 2, degree {}, pairing {pairing}", obs.degree))
}

fn c6_actions() -> Check {
    let n = 6;
    let so3 = catalog::so3();
    let lin = ActionJet::linear(so3.clone(), &hamiltonian_fields(&so3), n).unwrap();
    let mut r = rng(6);
    for k in 0..50 {
        let phi = random_near_identity(&mut r, 3, n);
        let rho = lin.pushforward(&phi).unwrap();
        let out = linearize_action(&rho, n, &EngineOptions::default()).map_err(|e| format!("sample {k}: {e}"))?;
        ensure(out.obstruction().is_none(), || format!("sample {k}: obstructed"))?;
        ensure(*out.result() == lin, || format!("sample {k}: result is not the coadjoint action"))?;
        ensure(rho.pushforward(out.change()).unwrap() == lin, || {
            format!("sample {k}: change does not transport the action")
        })?;
    }
    let x = Jet::var(1, n, 0);
    let rho = ActionJet::new(catalog::abelian(1), vec![VectorField::new(vec![x.pow(2)]).unwrap()]).unwrap();
    let out = linearize_action(&rho, n, &EngineOptions::default()).unwrap();
    let obs = out.obstruction().ok_or("x^2 d/dx was not obstructed")?;
    ensure(obs.class.degree() == 1, || format!("class in degree {}", obs.class.degree()))?;
    ensure(obs.class.verify() && annihilates_coboundaries(&obs.class), || "H^1 certificate fails".into())?;
    ensure(!obs.class.pairing().is_zero(), || "zero pairing".into())?;
    Ok("50 conjugations recovered, x^2 d/dx certified in H^1".into())
}

fn c7_levi() -> Check {
    let n = 6;
    let g = catalog::gl2();
    let s: Vec<_> = (0..3).map(|i| g.basis_vector(i)).collect();
    let split = verify_levi_split(&g, &s, &[g.basis_vector(3)]).map_err(|e| format!("{e:?}"))?;
    ensure(split.s_algebra().is_semisimple(), || "s is not semisimple".into())?;
    let p = 3;
    for seed in 0..25 {
        let pi = perturbed(&g, n, 7000 + seed);
        let out = levi_decompose(&pi, &split, n, &EngineOptions::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(out.obstruction().is_none(), || format!("seed {seed}: obstructed"))?;
        let b = out.result().bivector();
        ensure(pushforward(&pi, out.change()).unwrap() == *b, || format!("seed {seed}: change mismatch"))?;
        for a in 0..p {
            for j in a + 1..4 {
                let in_block = |k: usize| if j < p { k < p } else { k >= p };
                let ok = b.get(a, j).terms().all(|(m, _)| m.degree() == 1 && (0..4).any(|k| m.exp(k) == 1 && in_block(k)));
                ensure(ok, || format!("seed {seed}: entry ({a}, {j}) = {}", b.get(a, j).to_text(&["s1", "s2", "s3", "r1"])))?;
            }
        }
    }
    Ok("25 gl2 perturbations in Levi form at N = 6".into())
}

fn koszul_identities(pi: &Bivector, f: &Jet, g: &Jet, h: &Jet) -> bool {
    let n = pi.order();
    let m = pi.dim();
    let df = PolyOneForm::exact(f);
    let dg = PolyOneForm::exact(g);
    let first = koszul_bracket(&df, &dg, pi).unwrap() == PolyOneForm::exact(&pi.bracket(f, g)).with_order(n - 1);
    let alpha = df.scale_by(h);
    let lhs = koszul_bracket(&alpha, &dg.scale_by(f), pi).unwrap();
    let sa = sharp(&alpha, pi);
    let alpha_f = (0..m).fold(Jet::zero(m, n), |acc, j| &acc + &(&sa[j] * &f.derivative(j)));
    let rhs = koszul_bracket(&alpha, &dg, pi)
        .unwrap()
        .scale_by(&f.with_order(n - 1))
        .add(&dg.with_order(n - 1).scale_by(&alpha_f.with_order(n - 1)));
    first && lhs == rhs
}

fn c8_koszul() -> Check {
    let n = 6;
    let mut r = rng(8);
    let so3 = PoissonJet::linear(&catalog::so3(), n);
    let v: Vec<Jet> = (0..3).map(|i| Jet::var(3, n, i)).collect();
    let quad = loop {
        // log-canonical brackets {x_i, x_j} = a_ij x_i x_j always satisfy Jacobi
        let entries: Vec<_> = [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .map(|(i, j)| (i, j, (&v[i] * &v[j]).scale(&small_rational(&mut r))))
            .collect();
        let b = Bivector::from_upper(3, n, entries).unwrap();
        if !b.is_zero() {
            break PoissonJet::new(b).map_err(|e| format!("random quadratic bracket rejected: {e}"))?;
        }
    };
    let mut count = 0;
    for pi in [so3.bivector(), quad.bivector()] {
        for _ in 0..50 {
            let f = random_jet(&mut r, 3, n, 0, 4, 3);
            let g = random_jet(&mut r, 3, n, 0, 4, 3);
            let h = random_jet(&mut r, 3, n, 0, 4, 2);
            ensure(koszul_identities(pi, &f, &g, &h), || format!("identity fails on input {count}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} inputs over so3 and a quadratic bracket"))
}

fn c9_algebroids() -> Check {
    let linears: Vec<LinearAlgebroid> = [catalog::so3(), catalog::sl2(), catalog::gl2(), catalog::aff1()]
        .iter()
        .map(coadjoint_algebroid)
        .collect();
    let mut r = rng(9);
    for k in 0..60 {
        let lin = &linears[k % linears.len()];
        let a = random_algebroid(&mut r, lin, 3);
        let pi = a.to_poisson();
        fiberwise_linearity_check(pi.bivector(), a.base_dim(), a.rank()).map_err(|e| format!("sample {k}: {e}"))?;
        let back = AlgebroidJet::from_poisson(&pi, a.base_dim(), a.rank()).map_err(|e| format!("sample {k}: {e}"))?;
        ensure(back == a, || format!("sample {k}: round trip differs"))?;
    }
    let n = 5;
    let target = coadjoint_algebroid(&catalog::so3()).to_jet(n);
    for k in 0..25 {
        let a = random_algebroid(&mut r, &coadjoint_algebroid(&catalog::so3()), n);
        let out = linearize_algebroid(&a, n, &EngineOptions::default()).map_err(|e| format!("perturbation {k}: {e}"))?;
        ensure(*out.result() == target, || format!("perturbation {k}: not recovered"))?;
        let g = GradedChange::from_change(out.change(), 3, 3).map_err(|e| format!("perturbation {k}: {e}"))?;
        ensure(a.pushforward(&g).unwrap() == target, || format!("perturbation {k}: change mismatch"))?;
    }
    Ok("60 round trips, 25 so3 algebroids recovered at N = 5".into())
}

fn c10_metric() -> Check {
    for nvars in 2..=4usize {
        for (num, den) in [(1, 1), (1, 2)] {
            let radius = frac(num, den);
            let rf = num as f64 / den as f64;
            let x1 = Jet::var(nvars, 3, 0);
            let norm = hermitian_norm(&x1, &radius).unwrap();
            let got = norm * norm;
            let want = rf * rf / (nvars as f64 + 1.0);
            let rel = ((got - want) / want).abs();
            ensure(rel <= 1e-12, || format!("n = {nvars}, r = {rf}: {got} vs {want}"))?;
            let monos: Vec<Monomial> = (0..=3).flat_map(|d| Monomial::all_of_degree(nvars, d)).collect();
            for (i, a) in monos.iter().enumerate() {
                for b in &monos[i + 1..] {
                    let fa = Jet::monomial(nvars, 3, a.clone(), int(1));
                    let fb = Jet::monomial(nvars, 3, b.clone(), int(1));
                    ensure(hermitian_inner(&fa, &fb, &radius).unwrap().is_zero(), || {
                        format!("distinct monomials are not orthogonal for n = {nvars}")
                    })?;
                }
            }
        }
    }
    Ok("spot values within 1e-12, distinct monomials orthogonal".into())
}

fn brute_killing(g: &LieAlgebra) -> Vec<Vec<Scalar>> {
    // ad(e_i) maps e_l to sum_k c^{il}_k e_k, so tr(ad_i ad_j) = sum_{k,l} c^{il}_k c^{jk}_l
    let n = g.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Scalar::zero();
                    for k in 0..n {
                        for l in 0..n {
                            acc += g.constant(i, l, k) * g.constant(j, k, l);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn c11_killing() -> Check {
    let diag = |d: [i64; 3]| -> Vec<Vec<Scalar>> {
        (0..3).map(|i| (0..3).map(|j| if i == j { int(d[i]) } else { int(0) }).collect()).collect()
    };
    for (name, g, want, compact) in [
        ("sl2", catalog::sl2(), diag([2, 2, -2]), false),
        ("so3", catalog::so3(), diag([-2, -2, -2]), true),
    ] {
        let oracle = brute_killing(&g);
        ensure(oracle == want, || format!("{name}: oracle gives {oracle:?}"))?;
        let k = g.killing_form();
        let got: Vec<Vec<Scalar>> = (0..3).map(|i| k.row(i).to_vec()).collect();
        ensure(got == want, || format!("{name}: killing_form gives {got:?}"))?;
        ensure(g.is_semisimple(), || format!("{name} not semisimple"))?;
        ensure(g.is_compact_type() == compact, || format!("{name}: compact flag wrong"))?;
    }
    Ok("sl2 diag(2,2,-2), so3 -2I, flags consistent".into())
}

fn c12_flat() -> Check {
    let entry = corpus::find("weinstein-sl2-flat").ok_or("missing corpus entry")?;
    for n in 1..=10 {
        let pi = entry.spec(Some(n)).map_err(|e| e.to_string())?.poisson().map_err(|e| e.to_string())?;
        ensure(pi == PoissonJet::linear(&catalog::sl2(), n), || format!("N = {n}: not the linear bracket"))?;
        let out = linearize_poisson(&pi, n, &EngineOptions::default()).map_err(|e| e.to_string())?;
        ensure(out.change().is_identity(), || format!("N = {n}: change is not the identity"))?;
    }
    Ok("linear with identity change for N = 1..=10".into())
}

fn main() {
    let (c3, c4) = c3_c4_linearize();
    let results = vec![
        (1, "d o d = 0", c1_d_squared()),
        (2, "Whitehead vanishing", c2_whitehead()),
        (3, "Poisson linearization round trip", c3),
        (4, "degree doubling law", c4),
        (5, "obstruction certificate", c5_abelian_obstruction()),
        (6, "action linearization", c6_actions()),
        (7, "Levi pattern", c7_levi()),
        (8, "Koszul bracket identities", c8_koszul()),
        (9, "algebroid duality and linearization", c9_algebroids()),
        (10, "metric spot values", c10_metric()),
        (11, "Killing forms", c11_killing()),
        (12, "flat perturbation", c12_flat()),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {n}: {name} ({detail})"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n}: {name} ({why})");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
