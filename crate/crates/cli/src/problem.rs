//! Problem files: TOML documents naming the variables, the truncation order
//! and sparse polynomial entries of a Poisson bracket, an action or an algebroid.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use jetnorm_core::algebroid::AlgebroidJet;
use jetnorm_core::liealg::{isotropy_from_linear_part, levi_lift, verify_levi_split, LeviSplit, LieAlgebra};
use jetnorm_core::normalform::{ActionJet, EngineOptions, Scheduler};
use jetnorm_core::polyalg::{Bivector, Jet, Monomial, PoissonJet, VectorField};
use jetnorm_core::scalar::{self, Scalar};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{parse_error, CliError};
use crate::poly::{is_homogeneous_linear, parse_polynomial, print_polynomial};

pub const DEFAULT_ORDER: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Poisson,
    Action,
    Algebroid,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Poisson => "poisson",
            ProblemKind::Action => "action",
            ProblemKind::Algebroid => "algebroid",
        })
    }
}

impl FromStr for ProblemKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "poisson" => Ok(ProblemKind::Poisson),
            "action" => Ok(ProblemKind::Action),
            "algebroid" => Ok(ProblemKind::Algebroid),
            other => Err(format!("unknown kind `{other}` (expected poisson, action or algebroid)")),
        }
    }
}

/// A Lie algebra given by named basis vectors and linear brackets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub basis: Vec<String>,
    /// `[b_i, b_j]` for `i < j`, linear jets of order 1 in the basis names.
    pub brackets: BTreeMap<(usize, usize), Jet>,
}

impl AlgebraSpec {
    pub fn to_algebra(&self) -> Result<LieAlgebra, CliError> {
        let mut entries = Vec::new();
        for (&(i, j), f) in &self.brackets {
            for (m, c) in f.terms() {
                let k = m.exponents().iter().position(|&e| e == 1).expect("linear term");
                entries.push((i, j, k, c.clone()));
            }
        }
        Ok(LieAlgebra::from_entries(self.basis.len(), entries)?)
    }
}

/// Rows of a Levi factor `s` and of an invariant complement `r`, in the
/// coordinates of the isotropy algebra.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LeviFactor {
    pub s: Vec<Vec<Scalar>>,
    pub r: Vec<Vec<Scalar>>,
}

/// A parsed problem.
///
/// Entries are sparse: absent keys are zero. Bracket keys are stored with
/// `i < j`. For algebroids the structure functions have order `N` and the
/// anchors order `N + 1`, both in the base variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub name: Option<String>,
    pub description: Option<String>,
    pub variables: Vec<String>,
    pub fibers: Vec<String>,
    pub order: u32,
    pub scheduler: Scheduler,
    pub radius: Scalar,
    pub algebra: Option<AlgebraSpec>,
    /// `{x_i, x_j}` for Poisson problems.
    pub brackets: BTreeMap<(usize, usize), Jet>,
    /// Component `j` of the field of basis vector `a`, keyed `(a, j)`.
    pub fields: BTreeMap<(usize, usize), Jet>,
    /// `c^k_ij` keyed `(i, j, k)` with `i < j`.
    pub structure: BTreeMap<(usize, usize, usize), Jet>,
    /// `B^j_i` keyed `(i, j)`.
    pub anchor: BTreeMap<(usize, usize), Jet>,
    pub levi: Option<LeviFactor>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    basis: Spanned<Vec<String>>,
    #[serde(default)]
    brackets: BTreeMap<String, Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLevi {
    #[serde(default)]
    s: Vec<Vec<Spanned<String>>>,
    #[serde(default)]
    r: Vec<Vec<Spanned<String>>>,
}

type Table = BTreeMap<String, BTreeMap<String, Spanned<String>>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    kind: Spanned<String>,
    name: Option<String>,
    description: Option<String>,
    variables: Spanned<Vec<String>>,
    fibers: Option<Spanned<Vec<String>>>,
    order: Option<Spanned<i64>>,
    scheduler: Option<Spanned<String>>,
    radius: Option<Spanned<String>>,
    algebra: Option<Spanned<RawAlgebra>>,
    #[serde(default)]
    brackets: BTreeMap<String, Spanned<String>>,
    fields: Option<Spanned<Table>>,
    structure: Option<Spanned<Table>>,
    anchor: Option<Spanned<Table>>,
    levi: Option<Spanned<RawLevi>>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn err(&self, span: Range<usize>, msg: impl Into<String>) -> CliError {
        parse_error(self.text, span.start, msg)
    }

    /// Parses a polynomial stored in a TOML string value at `span`.
    fn poly(&self, value: &Spanned<String>, names: &[String], order: u32) -> Result<Jet, CliError> {
        parse_polynomial(value.get_ref(), names, order).map_err(|e| {
            // the content starts after the opening quote
            let base = value.span().start + 1;
            parse_error(self.text, base + e.offset, e.to_string())
        })
    }

    fn rational(&self, value: &Spanned<String>) -> Result<Scalar, CliError> {
        scalar::parse(value.get_ref()).ok_or_else(|| {
            self.err(
                value.span(),
                format!("`{}` is not a rational of the form p or p/q", value.get_ref()),
            )
        })
    }

    fn names(&self, list: &Spanned<Vec<String>>, what: &str) -> Result<Vec<String>, CliError> {
        let names = list.get_ref().clone();
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(self.err(list.span(), format!("{what} name `{n}` is not an identifier")));
            }
            if names[..i].contains(n) {
                return Err(self.err(list.span(), format!("duplicate {what} name `{n}`")));
            }
        }
        Ok(names)
    }

    /// Resolves a key `"a,b"` to an index pair with `a != b`.
    fn pair(&self, key: &str, names: &[String], span: Range<usize>) -> Result<(usize, usize), CliError> {
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(self.err(span, format!("key `{key}` must name two entries as `a,b`")));
        }
        let idx = |p: &str| {
            names
                .iter()
                .position(|n| n == p)
                .ok_or_else(|| self.err(span.clone(), format!("unknown name `{p}` in key `{key}`")))
        };
        Ok((idx(parts[0])?, idx(parts[1])?))
    }

    fn index(&self, key: &str, names: &[String], span: Range<usize>) -> Result<usize, CliError> {
        names
            .iter()
            .position(|n| n == key.trim())
            .ok_or_else(|| self.err(span, format!("unknown name `{key}`")))
    }
}

/// Inserts an antisymmetric entry, normalizing the key to `i < j`.
fn insert_antisymmetric<K: Ord>(
    map: &mut BTreeMap<K, Jet>,
    (i, j): (usize, usize),
    f: Jet,
    key: impl Fn(usize, usize) -> K,
) -> Result<(), String> {
    if i == j {
        return if f.is_zero() {
            Ok(())
        } else {
            Err("an entry with equal arguments must vanish".into())
        };
    }
    let (k, f) = if i < j { (key(i, j), f) } else { (key(j, i), -&f) };
    if map.contains_key(&k) {
        return Err("entry given twice".into());
    }
    if !f.is_zero() {
        map.insert(k, f);
    }
    Ok(())
}

/// Parses a problem file at its own truncation order.
pub fn parse_problem(text: &str) -> Result<ProblemSpec, CliError> {
    parse_problem_with_order(text, None)
}

/// Parses a problem file, replacing its truncation order by `order` if given.
pub fn parse_problem_with_order(text: &str, order: Option<u32>) -> Result<ProblemSpec, CliError> {
    let raw: RawProblem = toml::from_str(text).map_err(|e| {
        let at = e.span().map_or(0, |s| s.start);
        parse_error(text, at, e.message().trim().to_string())
    })?;
    let cx = Ctx { text };
    let kind: ProblemKind = raw
        .kind
        .get_ref()
        .parse()
        .map_err(|m: String| cx.err(raw.kind.span(), m))?;
    let variables = cx.names(&raw.variables, "variable")?;
    if variables.is_empty() {
        return Err(cx.err(raw.variables.span(), "at least one variable is required"));
    }
    let order = match (order, &raw.order) {
        (Some(n), _) => n,
        (None, Some(o)) => u32::try_from(*o.get_ref())
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| cx.err(o.span(), "order must be a positive integer"))?,
        (None, None) => DEFAULT_ORDER,
    };
    if order == 0 {
        return Err(CliError::Input("order must be a positive integer".into()));
    }
    let scheduler = match &raw.scheduler {
        Some(s) => s.get_ref().parse().map_err(|m: String| cx.err(s.span(), m))?,
        None => Scheduler::default(),
    };
    let radius = match &raw.radius {
        Some(r) => {
            let v = cx.rational(r)?;
            if !v.is_positive() {
                return Err(cx.err(r.span(), "radius must be positive"));
            }
            v
        }
        None => EngineOptions::default().radius,
    };

    let forbid = |present: Option<Range<usize>>, what: &str| match present {
        Some(span) => Err(cx.err(span, format!("`{what}` is not allowed for kind {kind}"))),
        None => Ok(()),
    };
    let fibers = match (&raw.fibers, kind) {
        (Some(f), ProblemKind::Algebroid) => {
            let fibers = cx.names(f, "fiber")?;
            if fibers.is_empty() {
                return Err(cx.err(f.span(), "an algebroid needs at least one fiber"));
            }
            if let Some(n) = fibers.iter().find(|n| variables.contains(n)) {
                return Err(cx.err(f.span(), format!("`{n}` is both a variable and a fiber")));
            }
            fibers
        }
        (None, ProblemKind::Algebroid) => {
            return Err(CliError::Input("kind algebroid requires `fibers`".into()));
        }
        (f, _) => {
            forbid(f.as_ref().map(Spanned::span), "fibers")?;
            Vec::new()
        }
    };

    let mut spec = ProblemSpec {
        kind,
        name: raw.name,
        description: raw.description,
        variables,
        fibers,
        order,
        scheduler,
        radius,
        algebra: None,
        brackets: BTreeMap::new(),
        fields: BTreeMap::new(),
        structure: BTreeMap::new(),
        anchor: BTreeMap::new(),
        levi: None,
    };

    match kind {
        ProblemKind::Poisson => {
            forbid(raw.algebra.as_ref().map(Spanned::span), "algebra")?;
            forbid(raw.fields.as_ref().map(Spanned::span), "fields")?;
            forbid(raw.structure.as_ref().map(Spanned::span), "structure")?;
            forbid(raw.anchor.as_ref().map(Spanned::span), "anchor")?;
            for (key, value) in &raw.brackets {
                let ij = cx.pair(key, &spec.variables, value.span())?;
                let f = cx.poly(value, &spec.variables, order)?;
                insert_antisymmetric(&mut spec.brackets, ij, f, |i, j| (i, j))
                    .map_err(|m| cx.err(value.span(), format!("bracket `{key}`: {m}")))?;
            }
        }
        ProblemKind::Action => {
            if !raw.brackets.is_empty() {
                return Err(CliError::Input("`brackets` is not allowed for kind action".into()));
            }
            forbid(raw.structure.as_ref().map(Spanned::span), "structure")?;
            forbid(raw.anchor.as_ref().map(Spanned::span), "anchor")?;
            let Some(alg) = &raw.algebra else {
                return Err(CliError::Input("kind action requires an `[algebra]` table".into()));
            };
            let algebra = parse_algebra(&cx, alg.get_ref())?;
            if let Some(fields) = &raw.fields {
                for (elt, comps) in fields.get_ref() {
                    let a = cx.index(elt, &algebra.basis, fields.span())?;
                    for (var, value) in comps {
                        let j = cx.index(var, &spec.variables, value.span())?;
                        let f = cx.poly(value, &spec.variables, order)?;
                        if !f.is_zero() {
                            spec.fields.insert((a, j), f);
                        }
                    }
                }
            }
            spec.algebra = Some(algebra);
        }
        ProblemKind::Algebroid => {
            if !raw.brackets.is_empty() {
                return Err(CliError::Input("`brackets` is not allowed for kind algebroid".into()));
            }
            forbid(raw.algebra.as_ref().map(Spanned::span), "algebra")?;
            forbid(raw.fields.as_ref().map(Spanned::span), "fields")?;
            if let Some(structure) = &raw.structure {
                for (key, comps) in structure.get_ref() {
                    let ij = cx.pair(key, &spec.fibers, structure.span())?;
                    for (fk, value) in comps {
                        let k = cx.index(fk, &spec.fibers, value.span())?;
                        let f = cx.poly(value, &spec.variables, order)?;
                        insert_antisymmetric(&mut spec.structure, ij, f, |i, j| (i, j, k))
                            .map_err(|m| cx.err(value.span(), format!("structure `{key}`: {m}")))?;
                    }
                }
            }
            if let Some(anchor) = &raw.anchor {
                for (fi, comps) in anchor.get_ref() {
                    let i = cx.index(fi, &spec.fibers, anchor.span())?;
                    for (var, value) in comps {
                        let j = cx.index(var, &spec.variables, value.span())?;
                        let f = cx.poly(value, &spec.variables, order + 1)?;
                        if !f.is_zero() {
                            spec.anchor.insert((i, j), f);
                        }
                    }
                }
            }
        }
    }

    if let Some(levi) = &raw.levi {
        spec.levi = Some(parse_levi_rows(&cx, levi.get_ref())?);
    }
    Ok(spec)
}

fn parse_algebra(cx: &Ctx<'_>, raw: &RawAlgebra) -> Result<AlgebraSpec, CliError> {
    let basis = cx.names(&raw.basis, "basis")?;
    if basis.is_empty() {
        return Err(cx.err(raw.basis.span(), "the algebra needs at least one basis vector"));
    }
    let mut brackets = BTreeMap::new();
    for (key, value) in &raw.brackets {
        let ij = cx.pair(key, &basis, value.span())?;
        let f = cx.poly(value, &basis, 2)?;
        if !is_homogeneous_linear(&f) {
            return Err(cx.err(
                value.span(),
                format!("algebra bracket `{key}` must be a linear combination of basis vectors"),
            ));
        }
        insert_antisymmetric(&mut brackets, ij, f.with_order(1), |i, j| (i, j))
            .map_err(|m| cx.err(value.span(), format!("algebra bracket `{key}`: {m}")))?;
    }
    Ok(AlgebraSpec { basis, brackets })
}

fn parse_levi_rows(cx: &Ctx<'_>, raw: &RawLevi) -> Result<LeviFactor, CliError> {
    let rows = |rows: &[Vec<Spanned<String>>]| {
        rows.iter()
            .map(|row| row.iter().map(|v| cx.rational(v)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(LeviFactor {
        s: rows(&raw.s)?,
        r: rows(&raw.r)?,
    })
}

/// Parses a stand-alone Levi factor file with `s` and `r` row arrays.
pub fn parse_levi_factor(text: &str) -> Result<LeviFactor, CliError> {
    let raw: RawLevi = toml::from_str(text).map_err(|e| {
        let at = e.span().map_or(0, |s| s.start);
        parse_error(text, at, e.message().trim().to_string())
    })?;
    parse_levi_rows(&Ctx { text }, &raw)
}

#[derive(Serialize)]
struct OutAlgebra {
    basis: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    brackets: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct OutLevi {
    s: Vec<Vec<String>>,
    r: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct OutProblem {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    variables: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    fibers: Vec<String>,
    order: u32,
    scheduler: String,
    radius: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    algebra: Option<OutAlgebra>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    brackets: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    fields: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    structure: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    anchor: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    levi: Option<OutLevi>,
}

fn rows_text(rows: &[Vec<Scalar>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(scalar::format).collect()).collect()
}

/// Sparse text entries `"a,b" -> poly` of an antisymmetric table.
pub fn bracket_entries(
    entries: &BTreeMap<(usize, usize), Jet>,
    keys: &[String],
    vars: &[String],
) -> BTreeMap<String, String> {
    entries
        .iter()
        .filter(|(_, f)| !f.is_zero())
        .map(|(&(i, j), f)| (format!("{},{}", keys[i], keys[j]), print_polynomial(f, vars)))
        .collect()
}

fn table<I>(entries: I) -> BTreeMap<String, BTreeMap<String, String>>
where
    I: IntoIterator<Item = (String, String, String)>,
{
    let mut out: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for (outer, inner, poly) in entries {
        out.entry(outer).or_default().insert(inner, poly);
    }
    out
}

/// Canonical TOML text; [`parse_problem`] inverts it exactly.
pub fn print_problem(spec: &ProblemSpec) -> String {
    let vars = &spec.variables;
    let algebra = spec.algebra.as_ref().map(|a| OutAlgebra {
        basis: a.basis.clone(),
        brackets: bracket_entries(&a.brackets, &a.basis, &a.basis),
    });
    let basis = spec.algebra.as_ref().map(|a| a.basis.clone()).unwrap_or_default();
    let fields = table(
        spec.fields
            .iter()
            .filter(|(_, f)| !f.is_zero())
            .map(|(&(a, j), f)| (basis[a].clone(), vars[j].clone(), print_polynomial(f, vars))),
    );
    let fib = &spec.fibers;
    let structure = table(spec.structure.iter().filter(|(_, f)| !f.is_zero()).map(|(&(i, j, k), f)| {
        (format!("{},{}", fib[i], fib[j]), fib[k].clone(), print_polynomial(f, vars))
    }));
    let anchor = table(
        spec.anchor
            .iter()
            .filter(|(_, f)| !f.is_zero())
            .map(|(&(i, j), f)| (fib[i].clone(), vars[j].clone(), print_polynomial(f, vars))),
    );
    let out = OutProblem {
        kind: spec.kind.to_string(),
        name: spec.name.clone(),
        description: spec.description.clone(),
        variables: vars.clone(),
        fibers: spec.fibers.clone(),
        order: spec.order,
        scheduler: spec.scheduler.to_string(),
        radius: scalar::format(&spec.radius),
        algebra,
        brackets: bracket_entries(&spec.brackets, vars, vars),
        fields,
        structure,
        anchor,
        levi: spec.levi.as_ref().map(|l| OutLevi {
            s: rows_text(&l.s),
            r: rows_text(&l.r),
        }),
    };
    toml::to_string(&out).expect("problem serializes to TOML")
}

impl ProblemSpec {
    /// All coordinate names of the engine input: variables, then fibers.
    pub fn coordinates(&self) -> Vec<String> {
        self.variables.iter().chain(&self.fibers).cloned().collect()
    }

    pub fn options(&self) -> EngineOptions {
        EngineOptions {
            scheduler: self.scheduler,
            radius: self.radius.clone(),
        }
    }

    fn expect_kind(&self, kind: ProblemKind) -> Result<(), CliError> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(CliError::Input(format!("expected a problem of kind {kind}, found {}", self.kind)))
        }
    }

    /// The Poisson jet of a `poisson` problem, Jacobi identity checked.
    pub fn poisson(&self) -> Result<PoissonJet, CliError> {
        self.expect_kind(ProblemKind::Poisson)?;
        let m = self.variables.len();
        let b = Bivector::from_upper(m, self.order, self.brackets.iter().map(|(&(i, j), f)| (i, j, f.clone())))?;
        Ok(PoissonJet::new(b)?)
    }

    /// The action jet of an `action` problem, homomorphism property checked.
    pub fn action(&self) -> Result<ActionJet, CliError> {
        self.expect_kind(ProblemKind::Action)?;
        let alg = self.algebra.as_ref().expect("actions carry an algebra");
        let algebra = alg.to_algebra()?;
        let m = self.variables.len();
        let fields = (0..alg.basis.len())
            .map(|a| {
                let comps = (0..m)
                    .map(|j| self.fields.get(&(a, j)).cloned().unwrap_or_else(|| Jet::zero(m, self.order)))
                    .collect();
                VectorField::new(comps)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ActionJet::new(algebra, fields)?)
    }

    /// The algebroid jet of an `algebroid` problem, Jacobi identity checked.
    pub fn algebroid(&self) -> Result<AlgebroidJet, CliError> {
        self.expect_kind(ProblemKind::Algebroid)?;
        let n = self.variables.len();
        let r = self.fibers.len();
        let zero = Jet::zero(n, self.order);
        let mut structure = vec![vec![vec![zero; r]; r]; r];
        for (&(i, j, k), f) in &self.structure {
            structure[i][j][k] = f.clone();
            structure[j][i][k] = -f;
        }
        let mut anchor = vec![vec![Jet::zero(n, self.order + 1); n]; r];
        for (&(i, j), f) in &self.anchor {
            anchor[i][j] = f.clone();
        }
        Ok(AlgebroidJet::new(n, r, structure, anchor)?)
    }

    /// The isotropy algebra at the origin, after validating the input.
    pub fn isotropy(&self) -> Result<LieAlgebra, CliError> {
        Ok(match self.kind {
            ProblemKind::Poisson => isotropy_from_linear_part(&self.poisson()?),
            ProblemKind::Action => self.action()?.algebra().clone(),
            ProblemKind::Algebroid => self.algebroid()?.isotropy(),
        })
    }

    /// The given Levi factor, certified, or one computed from the isotropy.
    pub fn levi_split(&self, isotropy: &LieAlgebra) -> Result<LeviSplit, CliError> {
        match &self.levi {
            Some(l) => verify_levi_split(isotropy, &l.s, &l.r)
                .map_err(|v| CliError::Engine(jetnorm_core::Error::SplitNotCertified(v))),
            None => Ok(levi_lift(isotropy)?),
        }
    }

    /// A Poisson problem with the given bracket.
    pub fn from_poisson(pi: &PoissonJet, variables: Vec<String>) -> ProblemSpec {
        let m = pi.dim();
        let mut brackets = BTreeMap::new();
        for i in 0..m {
            for j in i + 1..m {
                if !pi.get(i, j).is_zero() {
                    brackets.insert((i, j), pi.get(i, j).clone());
                }
            }
        }
        ProblemSpec {
            kind: ProblemKind::Poisson,
            name: None,
            description: None,
            variables,
            fibers: Vec::new(),
            order: pi.order(),
            scheduler: Scheduler::default(),
            radius: Scalar::one(),
            algebra: None,
            brackets,
            fields: BTreeMap::new(),
            structure: BTreeMap::new(),
            anchor: BTreeMap::new(),
            levi: None,
        }
    }

    /// An action problem with the given fields.
    pub fn from_action(rho: &ActionJet, basis: Vec<String>, variables: Vec<String>) -> ProblemSpec {
        let alg = rho.algebra();
        let n = alg.dim();
        let mut brackets = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut f = Jet::zero(n, 1);
                for k in 0..n {
                    f.add_term(Monomial::var(n, k), alg.constant(i, j, k).clone());
                }
                if !f.is_zero() {
                    brackets.insert((i, j), f);
                }
            }
        }
        let mut fields = BTreeMap::new();
        for (a, v) in rho.fields().iter().enumerate() {
            for (j, f) in v.comps().iter().enumerate() {
                if !f.is_zero() {
                    fields.insert((a, j), f.clone());
                }
            }
        }
        ProblemSpec {
            kind: ProblemKind::Action,
            algebra: Some(AlgebraSpec { basis, brackets }),
            fields,
            order: rho.order(),
            ..ProblemSpec::from_poisson(&PoissonJet::zero(variables.len(), rho.order()), variables)
        }
    }

    /// An algebroid problem with the given structure.
    pub fn from_algebroid(a: &AlgebroidJet, variables: Vec<String>, fibers: Vec<String>) -> ProblemSpec {
        let (n, r) = (a.base_dim(), a.rank());
        let mut structure = BTreeMap::new();
        for i in 0..r {
            for j in i + 1..r {
                for k in 0..r {
                    let f = a.structure(i, j, k);
                    if !f.is_zero() {
                        structure.insert((i, j, k), f.clone());
                    }
                }
            }
        }
        let mut anchor = BTreeMap::new();
        for i in 0..r {
            for j in 0..n {
                let f = a.anchor(i, j);
                if !f.is_zero() {
                    anchor.insert((i, j), f.clone());
                }
            }
        }
        ProblemSpec {
            kind: ProblemKind::Algebroid,
            fibers,
            structure,
            anchor,
            order: a.order(),
            ..ProblemSpec::from_poisson(&PoissonJet::zero(variables.len(), a.order()), variables)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SO3: &str = r#"
kind = "poisson"
variables = ["x", "y", "z"]
order = 4

[brackets]
"x,y" = "z"
"y,z" = "x"
"z,x" = "y"
"#;

    #[test]
    fn keys_are_normalized() {
        let spec = parse_problem(SO3).unwrap();
        assert_eq!(spec.brackets.len(), 3);
        let zx = &spec.brackets[&(0, 2)];
        assert_eq!(print_polynomial(zx, &spec.variables), "-y");
        assert!(spec.poisson().unwrap().is_linear());
        assert_eq!(parse_problem(&print_problem(&spec)).unwrap(), spec);
    }

    #[test]
    fn polynomial_errors_carry_positions() {
        let text = "kind = \"poisson\"\nvariables = [\"x\", \"y\"]\n[brackets]\n\"x,y\" = \"x + \"\n";
        match parse_problem(text).unwrap_err() {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (4, 14)),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn schema_errors() {
        assert!(parse_problem("kind = \"poisson\"\nvariables = [\"x\", \"x\"]\n").is_err());
        assert!(parse_problem("kind = \"lie\"\nvariables = [\"x\"]\n").is_err());
        assert!(parse_problem("kind = \"poisson\"\nvariables = [\"x\"]\nfoo = 1\n").is_err());
        let dup = "kind = \"poisson\"\nvariables = [\"x\", \"y\"]\n[brackets]\n\"x,y\" = \"x\"\n\"y,x\" = \"x\"\n";
        assert!(parse_problem(dup).is_err());
    }
}
