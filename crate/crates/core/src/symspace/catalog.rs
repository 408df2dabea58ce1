use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{int, ExactFactor, Rational};
use crate::root_systems::{build_nonreduced, Family, MultiplicityFunction, NonReducedRootSystem, Orbit, RootFamily};

use super::expr::{evaluate_condition, evaluate_integer, evaluate_number, expand_pattern, Env};
use super::CatalogError;

pub const CATALOG_SCHEMA: &str = "symspace-catalog/1";

const BUILTIN: &str = include_str!("../../data/symspace_catalog.toml");

/// A `U(1)` period as written in the catalog: `pi_coeff · π · √radicand`,
/// optionally indexed over a range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodSpec {
    pub factor: String,
    pub name: String,
    pub pi_coeff: String,
    pub radicand: String,
    pub text: String,
    #[serde(default)]
    pub index: Option<String>,
    #[serde(default)]
    pub range: Option<[String; 2]>,
    #[serde(default)]
    pub note: Option<String>,
}

/// Overrides applying when every condition in `when` holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecialCaseSpec {
    pub when: Vec<String>,
    pub note: String,
    #[serde(default)]
    pub h_name: Option<String>,
    #[serde(default)]
    pub ratio_g_h: Option<String>,
    #[serde(default)]
    pub periods: Vec<PeriodSpec>,
}

/// Where the catalog departs from the printed table, and why.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceNote {
    pub field: String,
    pub printed: String,
    pub note: String,
}

/// One catalog row with unevaluated formulas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowSpec {
    pub label: String,
    pub g_compact: String,
    pub g_noncompact: String,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub derived: BTreeMap<String, String>,
    #[serde(default)]
    pub constraints: Vec<String>,
    #[serde(default)]
    pub printed_range: Option<String>,
    #[serde(default)]
    pub sweep: Vec<String>,
    pub g_family: String,
    pub g_rank: String,
    pub dim_g: String,
    pub center: String,
    pub center_order: String,
    pub h_name: String,
    pub dim_h: String,
    pub k_name: String,
    pub dim_k: String,
    pub restricted_family: String,
    pub restricted_rank: String,
    pub highest: String,
    pub m_lambda: Vec<String>,
    pub m_2lambda: Vec<String>,
    pub ratio_g_h: String,
    pub ratio_g_gh: String,
    pub ratio_h_k: String,
    #[serde(default)]
    pub periods: Vec<PeriodSpec>,
    #[serde(default)]
    pub special: Vec<SpecialCaseSpec>,
    #[serde(default)]
    pub source_notes: Vec<SourceNote>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    schema: String,
    row: Vec<RowSpec>,
}

/// The parsed catalog.
#[derive(Clone, Debug)]
pub struct Catalog {
    rows: Vec<RowSpec>,
}

fn normalize_label(s: &str) -> String {
    s.chars().filter(|c| *c != '_' && !c.is_whitespace()).collect::<String>().to_ascii_uppercase()
}

impl Catalog {
    pub fn from_toml(src: &str) -> Result<Self, CatalogError> {
        let file: CatalogFile = toml::from_str(src).map_err(|e| CatalogError::Parse(e.to_string()))?;
        if file.schema != CATALOG_SCHEMA {
            return Err(CatalogError::Schema { expected: CATALOG_SCHEMA.into(), found: file.schema });
        }
        Ok(Self { rows: file.row })
    }

    /// The catalog compiled into the crate.
    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_toml(BUILTIN).expect("embedded catalog is valid"))
    }

    pub fn rows(&self) -> &[RowSpec] {
        &self.rows
    }

    /// Case-insensitive; underscores are optional (`AIIIa` finds `AIII_a`).
    pub fn row(&self, label: &str) -> Result<&RowSpec, CatalogError> {
        let key = normalize_label(label);
        self.rows
            .iter()
            .find(|r| normalize_label(&r.label) == key)
            .ok_or_else(|| CatalogError::UnknownLabel(label.to_string()))
    }

    pub fn lookup(&self, label: &str, binding: &ParameterBinding) -> Result<SymmetricSpaceEntry, CatalogError> {
        evaluate_row(self.row(label)?, binding)
    }
}

/// Integer values for the row parameters `n`, `p`, `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParameterBinding(BTreeMap<String, i64>);

impl ParameterBinding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: i64) -> Self {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.get(name).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl fmt::Display for ParameterBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ParameterBinding {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut b = ParameterBinding::new();
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(b);
        }
        for part in s.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| CatalogError::BadBinding(s.to_string()))?;
            let v: i64 = v.trim().parse().map_err(|_| CatalogError::BadBinding(s.to_string()))?;
            b.0.insert(k.trim().to_string(), v);
        }
        Ok(b)
    }
}

impl Serialize for ParameterBinding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter())
    }
}

/// A root-length ratio such as `√2`; `value` is `None` when undefined (`-`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootLengthRatio {
    pub text: String,
    pub value: Option<f64>,
}

impl RootLengthRatio {
    pub fn parse(s: &str) -> Result<Self, CatalogError> {
        let text = s.trim().to_string();
        let bad =
            || CatalogError::Formula { formula: text.clone(), reason: "expected `c`, `sqrt(r)` or `c*sqrt(r)`".into() };
        if text == "-" {
            return Ok(Self { text, value: None });
        }
        let (coeff, rest) = match text.split_once("sqrt(") {
            Some((c, r)) => {
                let c = c.trim().trim_end_matches('*').trim();
                let c: f64 = if c.is_empty() { 1.0 } else { c.parse().map_err(|_| bad())? };
                let r = r.strip_suffix(')').ok_or_else(bad)?;
                (c, Some(r.trim().parse::<f64>().map_err(|_| bad())?))
            }
            None => (text.parse::<f64>().map_err(|_| bad())?, None),
        };
        let value = coeff * rest.map_or(1.0, f64::sqrt);
        Ok(Self { text, value: Some(value) })
    }
}

/// One evaluated period value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodValue {
    pub index: Option<i64>,
    pub exact: ExactFactor,
    pub value: f64,
}

/// A `U(1)` period evaluated at a binding. `values` is empty when the
/// printed formula cannot be evaluated; `note` then says why.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Period {
    pub factor: String,
    pub name: String,
    pub text: String,
    pub values: Vec<PeriodValue>,
    pub note: Option<String>,
}

/// A catalog row evaluated at a concrete parameter binding.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricSpaceEntry {
    pub label: String,
    pub binding: ParameterBinding,
    pub g_compact: String,
    pub g_noncompact: String,
    pub g_family: Family,
    pub g_rank: usize,
    pub dim_g: i64,
    pub center: String,
    pub center_order: i64,
    pub h_name: String,
    pub dim_h: i64,
    pub k_name: String,
    pub dim_k: i64,
    /// Reduced form of the restricted root system as listed (`B_p` for `BC_p`).
    pub restricted_family: Family,
    pub restricted_rank: usize,
    pub printed_range: Option<String>,
    pub highest_coeffs: Vec<i64>,
    pub m_lambda: Vec<i64>,
    pub m_2lambda: Vec<i64>,
    pub ratio_g_h: RootLengthRatio,
    pub ratio_g_gh: RootLengthRatio,
    pub ratio_h_k: RootLengthRatio,
    pub periods: Vec<Period>,
    pub special_notes: Vec<String>,
    pub source_notes: Vec<SourceNote>,
}

impl SymmetricSpaceEntry {
    /// `true` when `K` is discrete (`dim K = 0`): the split real forms.
    pub fn is_split(&self) -> bool {
        self.dim_k == 0
    }

    pub fn has_double_roots(&self) -> bool {
        self.m_2lambda.iter().any(|&m| m != 0)
    }
}

/// Row lookup in the built-in catalog.
pub fn lookup(label: &str, binding: &ParameterBinding) -> Result<SymmetricSpaceEntry, CatalogError> {
    Catalog::builtin().lookup(label, binding)
}

fn to_big(q: Rational64) -> Rational {
    Rational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

fn evaluate_period(spec: &PeriodSpec, env: &Env) -> Period {
    let mut out = Period {
        factor: spec.factor.clone(),
        name: spec.name.clone(),
        text: spec.text.clone(),
        values: Vec::new(),
        note: spec.note.clone(),
    };
    let one = |env: &Env, index: Option<i64>| -> Result<PeriodValue, CatalogError> {
        let c = evaluate_number(&spec.pi_coeff, env)?;
        let r = evaluate_number(&spec.radicand, env)?;
        let exact = ExactFactor::new(to_big(c), to_big(r), 1);
        let value = exact.to_real::<f64>();
        Ok(PeriodValue { index, exact, value })
    };
    let result: Result<Vec<PeriodValue>, CatalogError> = match (&spec.index, &spec.range) {
        (Some(var), Some([lo, hi])) => (|| {
            let (lo, hi) = (evaluate_integer(lo, env)?, evaluate_integer(hi, env)?);
            (lo..=hi)
                .map(|i| {
                    let mut e = env.clone();
                    e.insert(var.clone(), Rational64::from_integer(i));
                    one(&e, Some(i))
                })
                .collect()
        })(),
        _ => one(env, None).map(|v| vec![v]),
    };
    match result {
        Ok(values) => out.values = values,
        Err(e) => {
            let why = format!("not evaluated: {e}");
            out.note = Some(match out.note {
                Some(n) => format!("{n}; {why}"),
                None => why,
            });
        }
    }
    out
}

fn evaluate_row(row: &RowSpec, binding: &ParameterBinding) -> Result<SymmetricSpaceEntry, CatalogError> {
    let label = row.label.clone();
    for (name, _) in binding.iter() {
        if !row.params.iter().any(|p| p == name) {
            return Err(CatalogError::UnexpectedParameter { label, name: name.to_string() });
        }
    }
    let mut env = Env::new();
    for p in &row.params {
        let v =
            binding.get(p).ok_or_else(|| CatalogError::MissingParameter { label: label.clone(), name: p.clone() })?;
        env.insert(p.clone(), Rational64::from_integer(v));
    }
    for (name, formula) in &row.derived {
        env.insert(name.clone(), evaluate_number(formula, &env)?);
    }
    for c in &row.constraints {
        if !evaluate_condition(c, &env)? {
            return Err(CatalogError::ConstraintViolated {
                label,
                constraint: c.clone(),
                binding: binding.to_string(),
            });
        }
    }
    let int_of = |f: &str| evaluate_integer(f, &env);
    let usize_of = |f: &str| -> Result<usize, CatalogError> {
        let v = int_of(f)?;
        usize::try_from(v).map_err(|_| CatalogError::Formula { formula: f.into(), reason: format!("{v} is negative") })
    };
    let restricted_rank = usize_of(&row.restricted_rank)?;
    let mut h_name = row.h_name.clone();
    let mut ratio_g_h = row.ratio_g_h.clone();
    let mut periods: Vec<Period> = row.periods.iter().map(|p| evaluate_period(p, &env)).collect();
    let mut special_notes = Vec::new();
    for sc in &row.special {
        let mut holds = true;
        for w in &sc.when {
            holds &= evaluate_condition(w, &env)?;
        }
        if !holds {
            continue;
        }
        if let Some(h) = &sc.h_name {
            h_name = h.clone();
        }
        if let Some(r) = &sc.ratio_g_h {
            ratio_g_h = r.clone();
        }
        periods.extend(sc.periods.iter().map(|p| evaluate_period(p, &env)));
        special_notes.push(sc.note.clone());
    }
    Ok(SymmetricSpaceEntry {
        label: row.label.clone(),
        binding: binding.clone(),
        g_compact: row.g_compact.clone(),
        g_noncompact: row.g_noncompact.clone(),
        g_family: row.g_family.parse()?,
        g_rank: usize_of(&row.g_rank)?,
        dim_g: int_of(&row.dim_g)?,
        center: row.center.clone(),
        center_order: int_of(&row.center_order)?,
        h_name,
        dim_h: int_of(&row.dim_h)?,
        k_name: row.k_name.clone(),
        dim_k: int_of(&row.dim_k)?,
        restricted_family: row.restricted_family.parse()?,
        restricted_rank,
        printed_range: row.printed_range.clone(),
        highest_coeffs: expand_pattern(&row.highest, restricted_rank, &env)?,
        m_lambda: row.m_lambda.iter().map(|f| int_of(f)).collect::<Result<_, _>>()?,
        m_2lambda: row.m_2lambda.iter().map(|f| int_of(f)).collect::<Result<_, _>>()?,
        ratio_g_h: RootLengthRatio::parse(&ratio_g_h)?,
        ratio_g_gh: RootLengthRatio::parse(&row.ratio_g_gh)?,
        ratio_h_k: RootLengthRatio::parse(&row.ratio_h_k)?,
        periods,
        special_notes,
        source_notes: row.source_notes.clone(),
    })
}

/// The restricted root system of `entry` with multiplicities `m_α`.
///
/// Listed `(long, short)` pairs map onto the orbits of the canonical family;
/// when any `m_2λ` is non-zero the system is `BC_l`.
pub fn restricted_root_system(entry: &SymmetricSpaceEntry) -> Result<NonReducedRootSystem, CatalogError> {
    let listed = RootFamily::new(entry.restricted_family, entry.restricted_rank)?;
    let pick = |v: &[i64], long: bool| -> i64 {
        match v {
            [single] => *single,
            [l, s] => {
                if long {
                    *l
                } else {
                    *s
                }
            }
            _ => 0,
        }
    };
    let bad = |what: &str| CatalogError::Formula {
        formula: format!("{} multiplicities", entry.label),
        reason: what.to_string(),
    };
    if entry.m_lambda.is_empty() || entry.m_lambda.len() > 2 || entry.m_2lambda.len() > 2 {
        return Err(bad("expected one or two entries"));
    }
    if entry.m_lambda.iter().chain(&entry.m_2lambda).any(|&m| m < 0) {
        return Err(bad("negative multiplicity"));
    }
    // B_1 keeps only its short root; C_1 only its long root
    let rank_one_from_b = entry.restricted_family == Family::B && entry.restricted_rank == 1;
    let mut mult = MultiplicityFunction::new();
    let system_family = if listed.rank() == 1 {
        let long = !rank_one_from_b;
        mult = mult
            .with(Orbit::Long, int(pick(&entry.m_lambda, long)))
            .with(Orbit::DoubleLong, int(pick(&entry.m_2lambda, long)));
        if entry.has_double_roots() {
            RootFamily::new(Family::BC, 1)?
        } else {
            listed
        }
    } else {
        mult = mult
            .with(Orbit::Long, int(pick(&entry.m_lambda, true)))
            .with(Orbit::Short, int(pick(&entry.m_lambda, false)))
            .with(Orbit::DoubleLong, int(pick(&entry.m_2lambda, true)))
            .with(Orbit::DoubleShort, int(pick(&entry.m_2lambda, false)));
        if entry.has_double_roots() {
            if listed.family() != Family::B {
                return Err(bad("doubled roots require a B-type listing"));
            }
            RootFamily::new(Family::BC, listed.rank())?
        } else {
            listed
        }
    };
    // simply-laced systems carry everything on the long orbit
    if system_family.family().is_simply_laced() {
        mult = mult.with(Orbit::Short, Rational::zero());
    }
    if system_family.family() != Family::BC {
        mult = mult.with(Orbit::DoubleLong, Rational::zero()).with(Orbit::DoubleShort, Rational::zero());
    }
    Ok(build_nonreduced(system_family, mult)?)
}

/// The two dimension identities of a symmetric-space row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionReport {
    pub label: String,
    pub binding: ParameterBinding,
    pub dim_g: i64,
    pub dim_h: i64,
    pub dim_k: i64,
    pub rank: usize,
    pub multiplicity_sum: i64,
    /// `dim G − dim H = l + (dim H − dim K)`.
    pub tangent_split: bool,
    /// `Σ_{α ∈ R⁺} m_α = dim H − dim K`.
    pub multiplicity_match: bool,
    pub pass: bool,
}

pub fn check_dimensions(entry: &SymmetricSpaceEntry) -> Result<DimensionReport, CatalogError> {
    let system = restricted_root_system(entry)?;
    let sum = system.multiplicity_sum();
    let multiplicity_sum = if sum.is_integer() {
        i64::try_from(sum.to_integer()).map_err(|_| CatalogError::Parse("multiplicity sum overflow".into()))?
    } else {
        return Err(CatalogError::Parse(format!("non-integral multiplicity sum {sum}")));
    };
    let l = entry.restricted_rank as i64;
    let hk = entry.dim_h - entry.dim_k;
    let tangent_split = entry.dim_g - entry.dim_h == l + hk;
    let multiplicity_match = multiplicity_sum == hk;
    Ok(DimensionReport {
        label: entry.label.clone(),
        binding: entry.binding.clone(),
        dim_g: entry.dim_g,
        dim_h: entry.dim_h,
        dim_k: entry.dim_k,
        rank: entry.restricted_rank,
        multiplicity_sum,
        tangent_split,
        multiplicity_match,
        pass: tangent_split && multiplicity_match,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// All consistency checks for one row at one binding.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRecord {
    pub label: String,
    pub binding: ParameterBinding,
    pub checks: Vec<AuditCheck>,
    pub notes: Vec<String>,
    pub pass: bool,
}

fn sorted(v: &[i64]) -> Vec<i64> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

fn audit_entry(entry: &SymmetricSpaceEntry) -> Vec<AuditCheck> {
    let mut checks = Vec::new();
    let mut push = |name: &str, pass: bool, detail: String| {
        checks.push(AuditCheck { name: name.to_string(), pass, detail });
    };
    match check_dimensions(entry) {
        Ok(d) => {
            push(
                "tangent_split",
                d.tangent_split,
                format!("{} - {} vs {} + ({} - {})", d.dim_g, d.dim_h, d.rank, d.dim_h, d.dim_k),
            );
            push("multiplicity_sum", d.multiplicity_match, format!("{} vs {}", d.multiplicity_sum, d.dim_h - d.dim_k));
        }
        Err(e) => push("dimensions", false, e.to_string()),
    }
    match restricted_root_system(entry) {
        Ok(sys) => {
            push(
                "restricted_rank",
                sys.rank() == entry.restricted_rank,
                format!("{} has rank {}", sys.family(), sys.rank()),
            );
            let built = sorted(sys.highest_coeffs());
            push(
                "highest_root",
                built == sorted(&entry.highest_coeffs),
                format!("{:?} vs listed {:?} (compared as multisets)", sys.highest_coeffs(), entry.highest_coeffs),
            );
        }
        Err(e) => push("restricted_system", false, e.to_string()),
    }
    push(
        "rank_bound",
        entry.restricted_rank <= entry.g_rank,
        format!("l = {} ≤ rank G = {}", entry.restricted_rank, entry.g_rank),
    );
    let split = entry.restricted_rank == entry.g_rank;
    push("split_iff_discrete_k", split == entry.is_split(), format!("l = rank G: {split}, dim K = {}", entry.dim_k));
    if entry.is_split() {
        let ok = entry.m_lambda.iter().all(|&m| m == 1) && entry.m_2lambda.iter().all(|&m| m == 0);
        push("split_multiplicities", ok, format!("{:?}, {:?}", entry.m_lambda, entry.m_2lambda));
    }
    match RootFamily::new(entry.g_family, entry.g_rank) {
        Ok(fam) => {
            push(
                "group_dimension",
                fam.group_dimension() as i64 == entry.dim_g,
                format!("{fam}: {} vs {}", fam.group_dimension(), entry.dim_g),
            );
            push(
                "center_order",
                fam.center_order() as i64 == entry.center_order,
                format!("{fam}: {} vs {}", fam.center_order(), entry.center_order),
            );
        }
        Err(e) => push("group_dimension", true, format!("skipped: {e}")),
    }
    checks
}

/// Audits one row of the built-in catalog at one binding. Lookup failures
/// become a failing `lookup` check rather than an error.
pub fn audit_row(label: &str, binding: &ParameterBinding) -> AuditRecord {
    let catalog = Catalog::builtin();
    let label = catalog.row(label).map(|r| r.label.clone()).unwrap_or_else(|_| label.to_string());
    let (checks, notes) = match catalog.lookup(&label, binding) {
        Ok(entry) => {
            let mut notes = entry.special_notes.clone();
            notes.extend(entry.source_notes.iter().map(|n| format!("{}: {}", n.field, n.note)));
            (audit_entry(&entry), notes)
        }
        Err(e) => (vec![AuditCheck { name: "lookup".into(), pass: false, detail: e.to_string() }], Vec::new()),
    };
    let pass = checks.iter().all(|c| c.pass);
    AuditRecord { label, binding: binding.clone(), checks, notes, pass }
}

/// Bindings a row is audited at: its sweep, or the empty binding for
/// exceptional rows.
pub fn sweep_bindings(row: &RowSpec) -> Vec<ParameterBinding> {
    if row.params.is_empty() {
        vec![ParameterBinding::new()]
    } else {
        row.sweep.iter().map(|s| s.parse().expect("catalog sweep bindings are well formed")).collect()
    }
}

/// Runs every row of the built-in catalog at its sweep bindings.
pub fn catalog_audit() -> Vec<AuditRecord> {
    Catalog::builtin()
        .rows()
        .iter()
        .flat_map(|row| sweep_bindings(row).into_iter().map(move |b| audit_row(&row.label, &b)))
        .collect()
}
