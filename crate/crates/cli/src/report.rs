//! Machine-readable reports. Every rational is a string `p` or `p/q`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use jetnorm_core::cohomology::ObstructionClass;
use jetnorm_core::liealg::LieAlgebra;
use jetnorm_core::normalform::{convergence_report, IterationTrace, StepKind};
use jetnorm_core::polyalg::CoordChange;
use jetnorm_core::scalar;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::poly::print_polynomial;
use crate::problem::ProblemSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub input: InputEcho,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classification: Option<Classification>,
    pub result: ResultBlock,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<TraceBlock>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub timing_ms: f64,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    pub kind: String,
    pub variables: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub fibers: Vec<String>,
    pub order: u32,
    pub scheduler: String,
    pub radius: String,
}

impl InputEcho {
    pub fn of(spec: &ProblemSpec) -> Self {
        InputEcho {
            name: spec.name.clone(),
            kind: spec.kind.to_string(),
            variables: spec.variables.clone(),
            fibers: spec.fibers.clone(),
            order: spec.order,
            scheduler: spec.scheduler.to_string(),
            radius: scalar::format(&spec.radius),
        }
    }
}

/// A structure constant `[b_i, b_j] = ... + value * b_k + ...` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub dimension: usize,
    pub structure_constants: Vec<ConstantEntry>,
    pub killing_form: Vec<Vec<String>>,
    pub killing_signature: Signature,
    pub semisimple: bool,
    pub compact_type: bool,
    pub radical_dimension: usize,
}

impl Classification {
    pub fn of(l: &LieAlgebra) -> Self {
        let n = l.dim();
        let k = l.killing_form();
        let (positive, negative, zero) = l.killing_signature();
        Classification {
            dimension: n,
            structure_constants: l
                .entries()
                .into_iter()
                .filter(|(i, j, _, c)| i < j && !c.is_zero())
                .map(|(i, j, k, c)| ConstantEntry {
                    i,
                    j,
                    k,
                    value: scalar::format(&c),
                })
                .collect(),
            killing_form: (0..n)
                .map(|i| (0..n).map(|j| scalar::format(k.get(i, j))).collect())
                .collect(),
            killing_signature: Signature {
                positive,
                negative,
                zero,
            },
            semisimple: l.is_semisimple(),
            compact_type: l.is_compact_type(),
            radical_dimension: l.radical().len(),
        }
    }
}

/// `coordinate = expression`, the expression in the input coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub coordinate: String,
    pub expression: String,
}

pub fn change_block(phi: &CoordChange, new_names: &[String], old_names: &[String]) -> Vec<Assignment> {
    phi.components()
        .iter()
        .zip(new_names)
        .map(|(f, n)| Assignment {
            coordinate: n.clone(),
            expression: print_polynomial(f, old_names),
        })
        .collect()
}

/// A structure written in the output coordinates, with the same table
/// layout as a problem file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct NormalForm {
    pub coordinates: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub brackets: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub fields: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub structure: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub anchor: BTreeMap<String, BTreeMap<String, String>>,
    /// Number of leading coordinates spanning the Levi factor, for `levi`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub levi_dimension: Option<usize>,
}

/// One nonzero value of a cochain: arguments, module basis label, value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainEntry {
    pub arguments: Vec<usize>,
    pub component: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseValue {
    pub index: usize,
    pub value: String,
}

/// A separating functional: it vanishes on all coboundaries and pairs
/// nonzero with the cocycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub polynomial_degree: u32,
    pub step: String,
    pub cochain_degree: usize,
    pub module_dimension: usize,
    pub cohomology_dimension: usize,
    pub cocycle: Vec<CochainEntry>,
    pub functional: Vec<SparseValue>,
    pub pairing: String,
    pub verified: bool,
}

pub fn step_name(kind: StepKind) -> &'static str {
    match kind {
        StepKind::Bracket => "bracket",
        StepKind::Action => "action",
        StepKind::Levi => "levi",
    }
}

impl Certificate {
    pub fn of(degree: u32, kind: StepKind, class: &ObstructionClass) -> Self {
        let c = class.cocycle();
        let labels = c.module().labels().to_vec();
        Certificate {
            polynomial_degree: degree,
            step: step_name(kind).into(),
            cochain_degree: class.degree(),
            module_dimension: c.module().dim(),
            cohomology_dimension: class.cohomology_dimension(),
            cocycle: c
                .nonzero_entries()
                .into_iter()
                .map(|(arguments, v, value)| CochainEntry {
                    arguments,
                    component: labels[v].clone(),
                    value: scalar::format(&value),
                })
                .collect(),
            functional: class
                .functional()
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(index, v)| SparseValue {
                    index,
                    value: scalar::format(v),
                })
                .collect(),
            pairing: scalar::format(&class.pairing()),
            verified: class.verify(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyBlock {
    pub rank: usize,
    pub bound: f64,
    pub largest_singular_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ResultBlock {
    /// The input satisfies its invariants.
    Valid { checks: Vec<String> },
    /// Only the classification block is meaningful.
    Analyzed,
    /// `change` carries the input to `normal_form`.
    Normalized {
        change: Vec<Assignment>,
        normal_form: NormalForm,
        verified: bool,
    },
    /// A nonzero class stopped the run; `reached` is the structure after `change`.
    Obstructed {
        change: Vec<Assignment>,
        reached: NormalForm,
        certificate: Certificate,
    },
    Cohomology {
        cochain_degree: usize,
        module_degree: u32,
        module: String,
        module_dimension: usize,
        cochain_dimension: usize,
        cohomology_dimension: usize,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        homotopy: Option<HomotopyBlock>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepBlock {
    pub index: usize,
    pub kind: String,
    pub degrees: Vec<u32>,
    pub lowest_before: Option<u32>,
    pub lowest_after: Option<u32>,
    pub norm_before: f64,
    pub norm_after: f64,
    pub obstructed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowBlock {
    pub index: usize,
    pub lowest_degree: Option<u32>,
    pub norm: f64,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceBlock {
    pub scheduler: String,
    pub radius: String,
    pub steps: Vec<StepBlock>,
    pub convergence: Vec<RowBlock>,
    pub doubling_law: Option<bool>,
}

impl TraceBlock {
    pub fn of(trace: &IterationTrace) -> Self {
        let conv = convergence_report(trace);
        TraceBlock {
            scheduler: trace.scheduler.to_string(),
            radius: scalar::format(&trace.radius),
            steps: trace
                .steps
                .iter()
                .map(|s| StepBlock {
                    index: s.index,
                    kind: step_name(s.kind).into(),
                    degrees: s.degrees.clone(),
                    lowest_before: s.lowest_before,
                    lowest_after: s.lowest_after,
                    norm_before: s.norm_before,
                    norm_after: s.norm_after,
                    obstructed: s.obstructed,
                })
                .collect(),
            convergence: conv
                .rows
                .iter()
                .map(|r| RowBlock {
                    index: r.index,
                    lowest_degree: r.lowest_degree,
                    norm: r.norm,
                    ratio: r.ratio,
                })
                .collect(),
            doubling_law: conv.doubling_law,
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// A human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let name = self.input.name.as_deref().unwrap_or("<unnamed>");
        let _ = writeln!(s, "{} {} ({}, order {})", self.command, name, self.input.kind, self.input.order);
        if let Some(c) = &self.classification {
            let sig = &c.killing_signature;
            let _ = writeln!(
                s,
                "isotropy: dim {}, Killing signature (+{}, -{}, 0:{}), semisimple {}, compact type {}, radical dim {}",
                c.dimension, sig.positive, sig.negative, sig.zero, c.semisimple, c.compact_type, c.radical_dimension
            );
        }
        let write_form = |s: &mut String, nf: &NormalForm| {
            for (k, v) in &nf.brackets {
                let _ = writeln!(s, "  {{{k}}} = {v}");
            }
            for (a, comps) in &nf.fields {
                for (x, v) in comps {
                    let _ = writeln!(s, "  {a}.{x} = {v}");
                }
            }
            for (k, comps) in &nf.structure {
                for (e, v) in comps {
                    let _ = writeln!(s, "  [{k}].{e} = {v}");
                }
            }
            for (e, comps) in &nf.anchor {
                for (x, v) in comps {
                    let _ = writeln!(s, "  #{e}.{x} = {v}");
                }
            }
        };
        match &self.result {
            ResultBlock::Valid { checks } => {
                let _ = writeln!(s, "valid");
                for c in checks {
                    let _ = writeln!(s, "  {c}");
                }
            }
            ResultBlock::Analyzed => {}
            ResultBlock::Normalized {
                change,
                normal_form,
                verified,
            } => {
                let _ = writeln!(s, "normalized (verified: {verified})");
                let _ = writeln!(s, "change:");
                for a in change {
                    let _ = writeln!(s, "  {} = {}", a.coordinate, a.expression);
                }
                let _ = writeln!(s, "normal form in ({}):", normal_form.coordinates.join(", "));
                write_form(&mut s, normal_form);
            }
            ResultBlock::Obstructed {
                certificate: c, ..
            } => {
                let _ = writeln!(
                    s,
                    "obstructed at polynomial degree {} ({} step): H^{} has dimension {}, pairing {} (verified: {})",
                    c.polynomial_degree, c.step, c.cochain_degree, c.cohomology_dimension, c.pairing, c.verified
                );
            }
            ResultBlock::Cohomology {
                cochain_degree,
                module_degree,
                module,
                cohomology_dimension,
                ..
            } => {
                let _ = writeln!(
                    s,
                    "dim H^{cochain_degree}({module}, degree {module_degree}) = {cohomology_dimension}"
                );
            }
        }
        if let Some(t) = &self.trace {
            for st in &t.steps {
                let _ = writeln!(
                    s,
                    "  step {} [{}] degrees {:?}: norm {:.6e} -> {:.6e}",
                    st.index, st.kind, st.degrees, st.norm_before, st.norm_after
                );
            }
            if let Some(law) = t.doubling_law {
                let _ = writeln!(s, "  doubling law: {law}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "exit code {} ({:.1} ms)", self.exit_code, self.timing_ms);
        s
    }
}
