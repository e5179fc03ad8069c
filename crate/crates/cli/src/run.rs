//! Command dispatch and report verification.

use std::collections::BTreeMap;
use std::time::Instant;

use jetnorm_core::algebroid::{levi_algebroid, linearize_algebroid, AlgebroidJet, GradedChange};
use jetnorm_core::cohomology::{
    cochain_dim, cohomology_dimension, homotopy_bound_estimate, poisson_polynomial_module,
    vector_field_module, GModule,
};
use jetnorm_core::liealg::LieAlgebra;
use jetnorm_core::normalform::{
    hermitian_weight, levi_decompose, linearize_action, linearize_poisson, ActionJet, Outcome,
};
use jetnorm_core::polyalg::{pushforward, CoordChange, Monomial, PoissonJet};
use jetnorm_core::scalar::{to_f64, Scalar};

use crate::error::CliError;
use crate::poly::parse_polynomial;
use crate::problem::{ProblemKind, ProblemSpec};
use crate::report::{
    change_block, Assignment, Certificate, Classification, HomotopyBlock, InputEcho, NormalForm,
    Report, ResultBlock, TraceBlock,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Validates the input invariants.
    Check,
    /// Classifies the isotropy algebra.
    Analyze,
    /// Linearizes a bracket, an action or an algebroid.
    Linearize,
    /// Normalizes relative to a Levi factor.
    Levi,
    /// Linearizes an algebroid, or normalizes it relative to a given Levi factor.
    Algebroid,
    /// Dimension of `H^degree` on polynomials of `module_degree`.
    Cohomology { degree: usize, module_degree: u32 },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Analyze => "analyze",
            Command::Linearize => "linearize",
            Command::Levi => "levi",
            Command::Algebroid => "algebroid",
            Command::Cohomology { .. } => "cohomology",
        }
    }
}

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_OBSTRUCTION: i32 = 2;

/// Which normalization a result belongs to; fixes the output coordinates
/// and the shape the normal form must have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Linear,
    Levi { s_dim: usize },
}

fn levi_names(s_dim: usize, total: usize) -> Vec<String> {
    (0..total)
        .map(|i| if i < s_dim { format!("s{}", i + 1) } else { format!("r{}", i - s_dim + 1) })
        .collect()
}

/// Output coordinates: unchanged for linearization, `s1.., r1..` for a Levi
/// normal form (replacing the fibers of an algebroid).
fn output_names(spec: &ProblemSpec, target: Target) -> Vec<String> {
    match (target, spec.kind) {
        (Target::Linear, _) => spec.coordinates(),
        (Target::Levi { s_dim }, ProblemKind::Algebroid) => {
            let mut v = spec.variables.clone();
            v.extend(levi_names(s_dim, spec.fibers.len()));
            v
        }
        (Target::Levi { s_dim }, _) => levi_names(s_dim, spec.variables.len()),
    }
}

fn poisson_form(pi: &PoissonJet, names: &[String]) -> NormalForm {
    let s = ProblemSpec::from_poisson(pi, names.to_vec());
    NormalForm {
        coordinates: names.to_vec(),
        brackets: crate::problem::bracket_entries(&s.brackets, names, names),
        ..NormalForm::default()
    }
}

fn action_form(rho: &ActionJet, basis: &[String], names: &[String]) -> NormalForm {
    let mut fields: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for (a, v) in rho.fields().iter().enumerate() {
        for (j, f) in v.comps().iter().enumerate() {
            if !f.is_zero() {
                fields
                    .entry(basis[a].clone())
                    .or_default()
                    .insert(names[j].clone(), f.to_text(names));
            }
        }
    }
    NormalForm {
        coordinates: names.to_vec(),
        fields,
        ..NormalForm::default()
    }
}

fn algebroid_form(a: &AlgebroidJet, names: &[String]) -> NormalForm {
    let (n, r) = (a.base_dim(), a.rank());
    let (base, fib) = names.split_at(n);
    let mut structure: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut anchor: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for i in 0..r {
        for j in i + 1..r {
            for k in 0..r {
                let f = a.structure(i, j, k);
                if !f.is_zero() {
                    structure
                        .entry(format!("{},{}", fib[i], fib[j]))
                        .or_default()
                        .insert(fib[k].clone(), f.to_text(base));
                }
            }
        }
        for j in 0..n {
            let f = a.anchor(i, j);
            if !f.is_zero() {
                anchor.entry(fib[i].clone()).or_default().insert(base[j].clone(), f.to_text(base));
            }
        }
    }
    NormalForm {
        coordinates: names.to_vec(),
        structure,
        anchor,
        ..NormalForm::default()
    }
}

/// The structure pushed forward by `phi`, in the output coordinates.
fn transported(spec: &ProblemSpec, phi: &CoordChange, names: &[String]) -> Result<NormalForm, CliError> {
    Ok(match spec.kind {
        ProblemKind::Poisson => poisson_form(&pushforward(&spec.poisson()?, phi)?, names),
        ProblemKind::Action => {
            let basis = &spec.algebra.as_ref().expect("actions carry an algebra").basis;
            action_form(&spec.action()?.pushforward(phi)?, basis, names)
        }
        ProblemKind::Algebroid => {
            let a = spec.algebroid()?;
            let g = GradedChange::from_change(phi, a.base_dim(), a.rank())?;
            algebroid_form(&a.pushforward(&g)?, names)
        }
    })
}

/// Order of the coordinate changes acting on the engine input.
fn change_order(spec: &ProblemSpec) -> u32 {
    match spec.kind {
        ProblemKind::Algebroid => spec.order + 1,
        _ => spec.order,
    }
}

fn has_shape(spec: &ProblemSpec, nf: &NormalForm, target: Target) -> Result<bool, CliError> {
    let names = &nf.coordinates;
    let order = spec.order;
    let parse = |text: &str, vars: &[String], ord: u32| {
        parse_polynomial(text, vars, ord).map_err(|e| CliError::Input(format!("normal form entry `{text}`: {e}")))
    };
    match (spec.kind, target) {
        (ProblemKind::Poisson | ProblemKind::Action, Target::Linear) => {
            let entries = nf.brackets.values().chain(nf.fields.values().flat_map(|m| m.values()));
            for text in entries {
                if parse(text, names, order)?.terms().any(|(m, _)| m.degree() != 1) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (ProblemKind::Poisson, Target::Levi { s_dim }) => {
            for (key, text) in &nf.brackets {
                let pos = |x: &str| names.iter().position(|n| n == x);
                let Some((Some(i), Some(j))) = key.split_once(',').map(|(a, b)| (pos(a), pos(b))) else {
                    return Ok(false);
                };
                if i.min(j) >= s_dim {
                    continue;
                }
                let f = parse(text, names, order)?;
                let r_linear = |m: &Monomial| (s_dim..names.len()).any(|k| m.exp(k) == 1);
                let ok = f.terms().all(|(m, _)| m.degree() == 1 && (i.max(j) < s_dim || r_linear(m)));
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (ProblemKind::Algebroid, _) => {
            let n = spec.variables.len();
            let base = &names[..n];
            let fib = &names[n..];
            let s_dim = match target {
                Target::Linear => fib.len(),
                Target::Levi { s_dim } => s_dim,
            };
            let in_s = |name: &str| fib.iter().position(|f| f == name).is_some_and(|p| p < s_dim);
            for (key, comps) in &nf.structure {
                let Some((a, b)) = key.split_once(',') else {
                    return Ok(false);
                };
                if !(in_s(a) || in_s(b)) {
                    continue;
                }
                for (k, text) in comps {
                    let f = parse(text, base, order)?;
                    if f.terms().any(|(m, _)| m.degree() >= 1) {
                        return Ok(false);
                    }
                    // [s, r] stays in r
                    if !(in_s(a) && in_s(b)) && in_s(k) {
                        return Ok(false);
                    }
                }
            }
            for (e, comps) in &nf.anchor {
                if !in_s(e) {
                    continue;
                }
                for text in comps.values() {
                    if parse(text, base, order + 1)?.terms().any(|(m, _)| m.degree() >= 2) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        (ProblemKind::Action, Target::Levi { .. }) => Ok(false),
    }
}

fn target_of(nf: &NormalForm) -> Target {
    match nf.levi_dimension {
        Some(s_dim) => Target::Levi { s_dim },
        None => Target::Linear,
    }
}

/// Re-checks a serialized change and normal form against the input: the
/// parsed change must carry the input exactly to the normal form, which must
/// have the shape of its target.
pub fn verify_normalized(spec: &ProblemSpec, change: &[Assignment], nf: &NormalForm) -> Result<bool, CliError> {
    let old = spec.coordinates();
    if change.len() != old.len() || nf.coordinates.len() != old.len() {
        return Ok(false);
    }
    let order = change_order(spec);
    let comps = change
        .iter()
        .map(|a| {
            parse_polynomial(&a.expression, &old, order)
                .map_err(|e| CliError::Input(format!("change of `{}`: {e}", a.coordinate)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let Ok(phi) = CoordChange::new(comps) else {
        return Ok(false);
    };
    let Ok(pushed) = transported(spec, &phi, &nf.coordinates) else {
        return Ok(false);
    };
    let mut expected = nf.clone();
    expected.levi_dimension = None;
    Ok(pushed == expected && has_shape(spec, nf, target_of(nf))?)
}

/// Verifies every normalized result of a report; other results pass.
pub fn verify_report(spec: &ProblemSpec, report: &Report) -> Result<bool, CliError> {
    match &report.result {
        ResultBlock::Normalized {
            change, normal_form, ..
        } => verify_normalized(spec, change, normal_form),
        ResultBlock::Obstructed { certificate, .. } => Ok(certificate.verified),
        _ => Ok(true),
    }
}

struct Normalization<T> {
    outcome: Outcome<T>,
    target: Target,
}

fn finish<T>(
    spec: &ProblemSpec,
    run: Normalization<T>,
    form: impl Fn(&T, &[String]) -> NormalForm,
) -> Result<(ResultBlock, TraceBlock), CliError> {
    let names = output_names(spec, run.target);
    let old = spec.coordinates();
    let mut nf = form(run.outcome.result(), &names);
    if let Target::Levi { s_dim } = run.target {
        nf.levi_dimension = Some(s_dim);
    }
    let change = change_block(run.outcome.change(), &names, &old);
    let trace = TraceBlock::of(run.outcome.trace());
    let result = match run.outcome.obstruction() {
        None => {
            let verified = verify_normalized(spec, &change, &nf)?;
            if !verified {
                return Err(CliError::Engine(jetnorm_core::Error::SolverFailure(
                    "normal form failed its round-trip verification".into(),
                )));
            }
            ResultBlock::Normalized {
                change,
                normal_form: nf,
                verified,
            }
        }
        Some(obs) => ResultBlock::Obstructed {
            change,
            reached: nf,
            certificate: Certificate::of(obs.degree, obs.kind, &obs.class),
        },
    };
    Ok((result, trace))
}

fn module_for(spec: &ProblemSpec, degree: u32) -> Result<(GModule, String), CliError> {
    Ok(match spec.kind {
        ProblemKind::Poisson | ProblemKind::Algebroid => {
            let g = spec.isotropy()?;
            (poisson_polynomial_module(&g, degree), "polynomials on the dual of the isotropy algebra".into())
        }
        ProblemKind::Action => {
            let rho = spec.action()?;
            let m = spec.variables.len();
            let module = vector_field_module(
                rho.algebra(),
                &rho.linear_matrices(),
                Monomial::all_of_degree(m, degree),
            )?;
            (module, "vector fields under the linear action".into())
        }
    })
}

fn cohomology_block(spec: &ProblemSpec, r: usize, d: u32) -> Result<ResultBlock, CliError> {
    let (module, name) = module_for(spec, d)?;
    let homotopy = if r >= 1 {
        let weights: Vec<f64> = match module.poly_basis() {
            Some(pb) => (0..pb.len())
                .map(|v| to_f64(&hermitian_weight(pb.split(v).1, &spec.radius)))
                .collect(),
            None => vec![1.0; module.dim()],
        };
        (module.dim() > 0 && weights.iter().all(|w| *w > 0.0)).then(|| {
            let hb = homotopy_bound_estimate(&module, r, &weights);
            HomotopyBlock {
                rank: hb.rank,
                bound: hb.bound,
                largest_singular_value: hb.largest_singular_value,
            }
        })
    } else {
        None
    };
    Ok(ResultBlock::Cohomology {
        cochain_degree: r,
        module_degree: d,
        module: name,
        module_dimension: module.dim(),
        cochain_dimension: cochain_dim(&module, r),
        cohomology_dimension: cohomology_dimension(&module, r),
        homotopy,
    })
}

fn checks(spec: &ProblemSpec) -> Result<Vec<String>, CliError> {
    let n = spec.order;
    Ok(match spec.kind {
        ProblemKind::Poisson => {
            spec.poisson()?;
            vec![
                "bracket is antisymmetric and vanishes at the origin".into(),
                format!("Jacobi identity holds through degree {n}"),
            ]
        }
        ProblemKind::Action => {
            spec.action()?;
            vec![
                "fields vanish at the origin".into(),
                format!("brackets of fields match the algebra through degree {n}"),
            ]
        }
        ProblemKind::Algebroid => {
            spec.algebroid()?;
            vec![
                "anchors vanish at the origin".into(),
                format!("dual Poisson structure is fiberwise linear and satisfies Jacobi through degree {}", n + 1),
            ]
        }
    })
}

fn normalize(spec: &ProblemSpec, command: Command) -> Result<(ResultBlock, TraceBlock), CliError> {
    let opts = spec.options();
    let n = spec.order;
    let use_levi = match command {
        Command::Levi => true,
        Command::Algebroid => spec.levi.is_some(),
        _ => false,
    };
    match (spec.kind, use_levi) {
        (ProblemKind::Poisson, false) => {
            let outcome = linearize_poisson(&spec.poisson()?, n, &opts)?;
            finish(spec, Normalization { outcome, target: Target::Linear }, poisson_form)
        }
        (ProblemKind::Poisson, true) => {
            let pi = spec.poisson()?;
            let split = spec.levi_split(&spec.isotropy()?)?;
            let s_dim = split.s_basis().len();
            let outcome = levi_decompose(&pi, &split, n, &opts)?;
            finish(spec, Normalization { outcome, target: Target::Levi { s_dim } }, |l, names| {
                poisson_form(l.bivector(), names)
            })
        }
        (ProblemKind::Action, false) => {
            let basis = spec.algebra.as_ref().expect("actions carry an algebra").basis.clone();
            let outcome = linearize_action(&spec.action()?, n, &opts)?;
            finish(spec, Normalization { outcome, target: Target::Linear }, |r, names| {
                action_form(r, &basis, names)
            })
        }
        (ProblemKind::Action, true) => Err(CliError::Input(
            "the Levi normal form applies to Poisson and algebroid problems".into(),
        )),
        (ProblemKind::Algebroid, false) => {
            let outcome = linearize_algebroid(&spec.algebroid()?, n, &opts)?;
            finish(spec, Normalization { outcome, target: Target::Linear }, algebroid_form)
        }
        (ProblemKind::Algebroid, true) => {
            let a = spec.algebroid()?;
            let split = spec.levi_split(&a.isotropy())?;
            let s_dim = split.s_basis().len();
            let outcome = levi_algebroid(&a, &split, n, &opts)?;
            finish(spec, Normalization { outcome, target: Target::Levi { s_dim } }, algebroid_form)
        }
    }
}

fn linear_note(spec: &ProblemSpec) -> Option<String> {
    let linear = match spec.kind {
        ProblemKind::Poisson => spec.poisson().ok()?.is_linear(),
        ProblemKind::Action => spec.action().ok()?.is_linear(),
        ProblemKind::Algebroid => spec.algebroid().ok()?.is_linear(),
    };
    linear.then(|| format!("input is already linear through degree {}; the identity change is returned", spec.order))
}

/// Runs `command` on `spec` and assembles a report.
pub fn run(command: Command, spec: &ProblemSpec) -> Result<Report, CliError> {
    let start = Instant::now();
    if command == Command::Algebroid && spec.kind != ProblemKind::Algebroid {
        return Err(CliError::Input(format!(
            "the algebroid command needs a problem of kind algebroid, found {}",
            spec.kind
        )));
    }
    let isotropy: LieAlgebra = spec.isotropy()?;
    let classification = Some(Classification::of(&isotropy));
    let mut notes = Vec::new();
    let (result, trace) = match command {
        Command::Check => (ResultBlock::Valid { checks: checks(spec)? }, None),
        Command::Analyze => (ResultBlock::Analyzed, None),
        Command::Cohomology { degree, module_degree } => (cohomology_block(spec, degree, module_degree)?, None),
        Command::Linearize | Command::Levi | Command::Algebroid => {
            let (r, t) = normalize(spec, command)?;
            if matches!(command, Command::Linearize | Command::Algebroid) {
                notes.extend(linear_note(spec));
            }
            (r, Some(t))
        }
    };
    let exit_code = match result {
        ResultBlock::Obstructed { .. } => EXIT_OBSTRUCTION,
        _ => EXIT_SUCCESS,
    };
    Ok(Report {
        schema: crate::report::SCHEMA_VERSION,
        command: command.name().into(),
        input: InputEcho::of(spec),
        classification,
        result,
        trace,
        notes,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
        exit_code,
    })
}

/// Applies the scalar flags to a parsed spec.
pub fn apply_overrides(
    spec: &mut ProblemSpec,
    scheduler: Option<jetnorm_core::normalform::Scheduler>,
    radius: Option<Scalar>,
    levi: Option<crate::problem::LeviFactor>,
) {
    if let Some(s) = scheduler {
        spec.scheduler = s;
    }
    if let Some(r) = radius {
        spec.radius = r;
    }
    if let Some(l) = levi {
        spec.levi = Some(l);
    }
}
