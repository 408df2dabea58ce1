use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::constant_term::{constant_term, verify_constant_term, CtFormula, DEFAULT_TERM_BUDGET};
use crate::exact::int;
use crate::geometry::{
    fundamental_region, tiling_check, verify_dyson_identity, verify_restricted_identity, IdentityReport,
    MIN_ACCEPTANCE, REGION_QUADRATURE_RANK_CAP,
};
use crate::integrals::{
    circular_closed, circular_numeric, mehta_closed, mehta_mc, selberg_closed, selberg_numeric, Method,
};
use crate::root_systems::{
    build_nonreduced, build_root_system, Family, MultiplicityFunction, NonReducedRootSystem, Orbit, RootError,
    RootFamily,
};
use crate::symspace::{audit_row, restricted_root_system, sweep_bindings, Catalog, ParameterBinding};

use super::{stochastic_rule, timed, RunConfig, VerificationRecord, VerifyError};

/// A deferred check. Tasks run concurrently; each yields one record.
pub type Task = Box<dyn FnOnce() -> VerificationRecord + Send>;

fn task(f: impl FnOnce() -> VerificationRecord + Send + 'static) -> Task {
    Box::new(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// `|W| = |Z| r! ∏ ñ_i` and Weyl group enumeration.
    Roots,
    /// Exact constant terms against the product formulas.
    Ct,
    /// Dyson identity and alcove tiling for split forms.
    Split,
    /// Symmetric-space identities with Opdam's product.
    Restricted,
    /// Selberg, Mehta and circular Dyson integrals.
    Classical,
    /// Dimension and root-data audit of every catalog row.
    Catalog,
    All,
}

impl FromStr for Suite {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "roots" | "relation" => Ok(Self::Roots),
            "ct" => Ok(Self::Ct),
            "split" => Ok(Self::Split),
            "restricted" => Ok(Self::Restricted),
            "classical" => Ok(Self::Classical),
            "catalog" => Ok(Self::Catalog),
            "all" => Ok(Self::All),
            other => Err(VerifyError::Suite(other.to_string())),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Roots => "roots",
            Self::Ct => "ct",
            Self::Split => "split",
            Self::Restricted => "restricted",
            Self::Classical => "classical",
            Self::Catalog => "catalog",
            Self::All => "all",
        })
    }
}

/// Runs tasks in parallel. Order of the result is unspecified until the
/// records go through [`super::VerificationReport::new`].
pub fn run_tasks(tasks: Vec<Task>) -> Vec<VerificationRecord> {
    tasks.into_par_iter().map(timed).collect()
}

pub fn suite_tasks(suite: Suite, config: &RunConfig) -> Vec<Task> {
    match suite {
        Suite::Roots => roots_tasks(),
        Suite::Ct => ct_tasks(),
        Suite::Split => split_tasks(config),
        Suite::Restricted => restricted_tasks(config),
        Suite::Classical => classical_tasks(config),
        Suite::Catalog => catalog_tasks(),
        Suite::All => {
            let mut all = roots_tasks();
            all.extend(ct_tasks());
            all.extend(split_tasks(config));
            all.extend(restricted_tasks(config));
            all.extend(classical_tasks(config));
            all.extend(catalog_tasks());
            all
        }
    }
}

fn family(s: &str) -> RootFamily {
    RootFamily::parse(s).expect("suite families are valid")
}

/// Families whose relation `|W| = |Z| r! ∏ ñ_i` is checked by default.
pub(crate) fn relation_families() -> Vec<RootFamily> {
    let mut out = Vec::new();
    out.extend((1..=8).map(|n| RootFamily::new(Family::A, n)));
    out.extend((2..=8).map(|n| RootFamily::new(Family::B, n)));
    out.extend((3..=8).map(|n| RootFamily::new(Family::C, n)));
    out.extend((4..=8).map(|n| RootFamily::new(Family::D, n)));
    out.extend((6..=8).map(|n| RootFamily::new(Family::E, n)));
    out.push(RootFamily::new(Family::F, 4));
    out.push(RootFamily::new(Family::G, 2));
    out.into_iter().map(|f| f.expect("valid family")).collect()
}

/// Families whose Weyl group is enumerated element by element.
pub(crate) fn enumeration_families() -> Vec<RootFamily> {
    ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C3", "C4", "D4", "F4", "G2"].iter().map(|s| family(s)).collect()
}

pub(crate) fn relation_record(fam: RootFamily) -> VerificationRecord {
    match build_root_system(fam) {
        Ok(sys) => {
            let rep = sys.verify_relation();
            VerificationRecord::exact("roots", fam.to_string(), rep.lhs.to_string(), rep.rhs.to_string(), rep.pass)
                .with_detail(format!(
                    "|W| = {}, |Z| = {}, r! = {}, prod n = {}, cells = {}",
                    rep.weyl_order, rep.center_order, rep.rank_factorial, rep.highest_coeff_product, rep.cells
                ))
        }
        Err(e) => VerificationRecord::failed("roots", fam.to_string(), e.to_string()),
    }
}

pub(crate) fn enumeration_record(fam: RootFamily) -> VerificationRecord {
    let run = || -> Result<VerificationRecord, RootError> {
        let sys = build_root_system(fam)?;
        let counted = sys.weyl_order_by_enumeration()?;
        let degrees: num_bigint::BigUint = sys.degrees().iter().map(|&d| num_bigint::BigUint::from(d)).product();
        let pass = counted == degrees;
        Ok(VerificationRecord::exact("weyl", fam.to_string(), degrees.to_string(), counted.to_string(), pass)
            .with_detail(format!("degrees {:?}", sys.degrees())))
    };
    run().unwrap_or_else(|e| VerificationRecord::failed("weyl", fam.to_string(), e.to_string()))
}

/// Tasks for `edl roots FAMILY RANK`.
pub fn relation_task(fam: RootFamily) -> Task {
    task(move || relation_record(fam))
}

pub fn enumeration_task(fam: RootFamily) -> Task {
    task(move || enumeration_record(fam))
}

pub fn roots_tasks() -> Vec<Task> {
    let mut tasks: Vec<Task> = relation_families().into_iter().map(|f| task(move || relation_record(f))).collect();
    tasks.extend(enumeration_families().into_iter().map(|f| task(move || enumeration_record(f))));
    tasks
}

/// Orbits a `ct` multiplicity list is read against, in order.
pub fn ct_orbits(fam: RootFamily) -> Vec<Orbit> {
    match (fam.family(), fam.rank()) {
        (Family::BC, 1) => vec![Orbit::Long, Orbit::DoubleLong],
        (Family::BC, _) => vec![Orbit::Long, Orbit::Short, Orbit::DoubleShort],
        (f, _) if f.is_simply_laced() => vec![Orbit::Long],
        _ => vec![Orbit::Long, Orbit::Short],
    }
}

/// Builds the multiplicity function from `k`: one value applies to every
/// orbit, otherwise one value per entry of [`ct_orbits`].
pub fn ct_multiplicity(fam: RootFamily, k: &[u32]) -> Result<MultiplicityFunction<u32>, String> {
    let orbits = ct_orbits(fam);
    let values: Vec<u32> = match k.len() {
        1 => vec![k[0]; orbits.len()],
        n if n == orbits.len() => k.to_vec(),
        n => {
            return Err(format!(
                "{fam} takes 1 or {} multiplicities ({}), got {n}",
                orbits.len(),
                orbits.iter().map(|o| o.name()).collect::<Vec<_>>().join(", ")
            ))
        }
    };
    Ok(orbits.into_iter().zip(values).fold(MultiplicityFunction::new(), |m, (o, v)| m.with(o, v)))
}

fn ct_system(fam: RootFamily) -> Result<NonReducedRootSystem, RootError> {
    build_nonreduced(fam, MultiplicityFunction::new())
}

/// Formulas that apply to `k` on `fam`.
pub fn ct_formulas(fam: RootFamily, k: &[u32]) -> Vec<CtFormula> {
    let uniform = k.windows(2).all(|w| w[0] == w[1]) && fam.family() != Family::BC;
    let mut out = Vec::new();
    if uniform && fam.family() == Family::A {
        out.push(CtFormula::Dyson);
    }
    if uniform {
        out.push(CtFormula::EqualParameter);
    }
    out.push(CtFormula::General);
    out
}

fn formula_name(f: CtFormula) -> &'static str {
    match f {
        CtFormula::Dyson => "dyson",
        CtFormula::EqualParameter => "equal",
        CtFormula::General => "general",
    }
}

pub(crate) fn ct_record(fam: RootFamily, k: Vec<u32>, formula: CtFormula) -> VerificationRecord {
    let ks = k.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    let inputs = format!("{fam} k={ks} {}", formula_name(formula));
    let run = || -> Result<VerificationRecord, String> {
        let sys = ct_system(fam).map_err(|e| e.to_string())?;
        let mult = ct_multiplicity(fam, &k)?;
        let res = verify_constant_term(&sys, &mult, formula, DEFAULT_TERM_BUDGET).map_err(|e| e.to_string())?;
        Ok(VerificationRecord::exact(
            "ct",
            inputs.clone(),
            res.predicted.to_string(),
            res.computed.to_string(),
            res.pass,
        ))
    };
    run().unwrap_or_else(|e| VerificationRecord::failed("ct", inputs.clone(), e))
}

/// Tasks for `edl ct FAMILY RANK --k ...`.
pub fn ct_command_tasks(fam: RootFamily, k: Vec<u32>) -> Result<Vec<Task>, String> {
    ct_multiplicity(fam, &k)?;
    Ok(ct_formulas(fam, &k)
        .into_iter()
        .map(|f| {
            let k = k.clone();
            task(move || ct_record(fam, k, f))
        })
        .collect())
}

pub fn ct_tasks() -> Vec<Task> {
    let mut tasks = Vec::new();
    for n in 1..=3 {
        let fam = RootFamily::new(Family::A, n).expect("valid");
        for k in 1..=3 {
            tasks.push(task(move || ct_record(fam, vec![k], CtFormula::Dyson)));
        }
    }
    for name in ["A2", "B2", "G2"] {
        let fam = family(name);
        for k in 1..=2 {
            tasks.push(task(move || ct_record(fam, vec![k], CtFormula::EqualParameter)));
            tasks.push(task(move || ct_record(fam, vec![k], CtFormula::General)));
        }
    }
    for name in ["BC1", "BC2"] {
        let fam = family(name);
        let orbits = ct_orbits(fam).len();
        let mut ks = vec![vec![]];
        for _ in 0..orbits {
            ks = ks.into_iter().flat_map(|v: Vec<u32>| (0..=2).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        for k in ks.into_iter().filter(|k| k.iter().any(|&x| x > 0)) {
            tasks.push(task(move || ct_record(fam, k, CtFormula::General)));
        }
    }
    tasks
}

pub(crate) fn identity_record(command: &str, inputs: String, rep: &IdentityReport<f64>) -> VerificationRecord {
    let stochastic = rep.lhs_estimate.is_stochastic();
    let mut rec = if stochastic {
        VerificationRecord::stochastic(
            command,
            inputs,
            rep.rhs,
            rep.lhs,
            rep.lhs_estimate.std_error * rep.prefactor.to_real::<f64>().abs(),
            rep.tolerance,
            rep.lhs_estimate.seed.unwrap_or_default(),
        )
    } else {
        VerificationRecord::numeric(command, inputs, rep.rhs, rep.lhs, rep.tolerance.rel)
    };
    // the report's verdict is authoritative; the record mirrors it
    rec.pass = rep.pass;
    if stochastic {
        rec.tolerance = stochastic_rule(rep.tolerance);
    }
    rec.with_detail(rep.notes.join("; "))
}

pub(crate) fn dyson_record(fam: RootFamily, config: RunConfig) -> VerificationRecord {
    let inputs = fam.to_string();
    let run = || -> Result<VerificationRecord, String> {
        let sys = build_root_system(fam).map_err(|e| e.to_string())?;
        let method = Method::Quadrature { nodes: config.quad_nodes };
        let rep = verify_dyson_identity::<f64>(&sys, method, config.tolerance()).map_err(|e| e.to_string())?;
        Ok(identity_record("dyson", inputs.clone(), &rep))
    };
    run().unwrap_or_else(|e| VerificationRecord::failed("dyson", inputs.clone(), e))
}

pub(crate) fn tiling_record(fam: RootFamily, config: RunConfig) -> VerificationRecord {
    let inputs = format!("{fam} m=1");
    let run = || -> Result<VerificationRecord, String> {
        let sys = build_nonreduced(fam, MultiplicityFunction::uniform(int(1))).map_err(|e| e.to_string())?;
        let rep = tiling_check::<f64>(&sys, config.quad_nodes, config.tolerance()).map_err(|e| e.to_string())?;
        Ok(identity_record("tiling", inputs.clone(), &rep))
    };
    run().unwrap_or_else(|e| VerificationRecord::failed("tiling", inputs.clone(), e))
}

pub fn split_tasks(config: &RunConfig) -> Vec<Task> {
    let config = *config;
    let mut tasks = Vec::new();
    for name in ["A1", "A2", "B2", "G2"] {
        let fam = family(name);
        tasks.push(task(move || dyson_record(fam, config)));
        tasks.push(task(move || tiling_record(fam, config)));
    }
    tasks
}

/// Identity check for one catalog row. Rows of restricted rank up to
/// [`REGION_QUADRATURE_RANK_CAP`] use quadrature, higher
/// ranks Monte Carlo.
pub(crate) fn restricted_record(label: &str, binding: ParameterBinding, config: RunConfig) -> VerificationRecord {
    let inputs = if binding.is_empty() { label.to_string() } else { format!("{label} {binding}") };
    let run = || -> Result<VerificationRecord, String> {
        let entry = Catalog::builtin().lookup(label, &binding).map_err(|e| e.to_string())?;
        let rank = restricted_root_system(&entry).map_err(|e| e.to_string())?.rank();
        let method = if rank <= REGION_QUADRATURE_RANK_CAP {
            Method::Quadrature { nodes: config.quad_nodes }
        } else {
            Method::MonteCarlo(config.plan())
        };
        let rep = verify_restricted_identity::<f64>(&entry, method, config.tolerance()).map_err(|e| e.to_string())?;
        Ok(identity_record("restricted", inputs.clone(), &rep))
    };
    run().unwrap_or_else(|e| VerificationRecord::failed("restricted", inputs.clone(), e))
}

/// Rows checked by the restricted suite: every rank-one row at two
/// bindings, and the rank-two exceptional rows.
pub(crate) fn restricted_cases() -> Vec<(&'static str, ParameterBinding)> {
    let n = |v| ParameterBinding::new().with("n", v);
    vec![
        ("AIV", n(2)),
        ("AIV", n(3)),
        ("BII", n(2)),
        ("BII", n(3)),
        ("DII", n(2)),
        ("DII", n(3)),
        ("FII", ParameterBinding::new()),
        ("EIV", ParameterBinding::new()),
        ("EIII", ParameterBinding::new()),
    ]
}

pub fn restricted_tasks(config: &RunConfig) -> Vec<Task> {
    let config = *config;
    restricted_cases().into_iter().map(|(label, b)| task(move || restricted_record(label, b, config))).collect()
}

/// Tasks for `edl verify LABEL`: the catalog audit of the row and its
/// identity check. The identity is skipped, with the reason returned, when
/// the region is too thin inside its bounding box for rejection sampling.
pub fn row_tasks(label: &str, binding: &ParameterBinding, config: &RunConfig) -> (Vec<Task>, Vec<String>) {
    let config = *config;
    let canonical = Catalog::builtin().row(label).map(|r| r.label.clone()).unwrap_or_else(|_| label.to_string());
    let mut tasks = vec![catalog_task(canonical.clone(), binding.clone())];
    let mut skipped = Vec::new();
    let system = Catalog::builtin().lookup(&canonical, binding).ok().and_then(|e| restricted_root_system(&e).ok());
    let too_thin = system.as_ref().and_then(|sys| {
        let fraction = fundamental_region(sys).box_fraction();
        (sys.rank() > REGION_QUADRATURE_RANK_CAP && fraction < MIN_ACCEPTANCE).then_some((sys.rank(), fraction))
    });
    match too_thin {
        Some((rank, fraction)) => skipped.push(format!(
            "restricted identity for {canonical} skipped: rank {rank} region fills {fraction:.3e} of its box, \
             below the sampling floor {MIN_ACCEPTANCE:e}"
        )),
        None => {
            let b = binding.clone();
            tasks.push(task(move || restricted_record(&canonical, b, config)));
        }
    }
    (tasks, skipped)
}

fn catalog_task(label: String, binding: ParameterBinding) -> Task {
    task(move || {
        let rec = audit_row(&label, &binding);
        let inputs = if binding.is_empty() { rec.label.clone() } else { format!("{} {}", rec.label, binding) };
        let passed = rec.checks.iter().filter(|c| c.pass).count();
        let failing: Vec<String> =
            rec.checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect();
        let mut detail = failing;
        detail.extend(rec.notes.iter().cloned());
        VerificationRecord::exact(
            "catalog",
            inputs,
            format!("{} checks", rec.checks.len()),
            format!("{passed} checks"),
            rec.pass,
        )
        .with_detail(detail.join("; "))
    })
}

pub fn catalog_tasks() -> Vec<Task> {
    Catalog::builtin()
        .rows()
        .iter()
        .flat_map(|row| sweep_bindings(row).into_iter().map(|b| catalog_task(row.label.clone(), b)))
        .collect()
}

fn selberg_record(n: usize, a: f64, b: f64, g: f64, config: RunConfig) -> VerificationRecord {
    let inputs = format!("n={n} a={a} b={b} g={g}");
    let run = || -> Result<VerificationRecord, String> {
        let closed = selberg_closed(n, a, b, g).map_err(|e| e.to_string())?.value;
        let est =
            selberg_numeric(n, a, b, g, Method::Quadrature { nodes: config.quad_nodes }).map_err(|e| e.to_string())?;
        Ok(VerificationRecord::numeric("selberg", inputs.clone(), closed, est.value, config.rel_tol))
    };
    run().unwrap_or_else(|e| VerificationRecord::failed("selberg", inputs.clone(), e))
}

fn mehta_record(n: usize, g: f64, config: RunConfig) -> VerificationRecord {
    let inputs = format!("n={n} g={g}");
    let run = || -> Result<VerificationRecord, String> {
        let closed = mehta_closed(n, g).map_err(|e| e.to_string())?.value;
        let est = mehta_mc(n, g, config.plan()).map_err(|e| e.to_string())?;
        Ok(VerificationRecord::stochastic(
            "mehta",
            inputs.clone(),
            closed,
            est.value,
            est.std_error,
            config.tolerance(),
            config.seed,
        ))
    };
    run().unwrap_or_else(|e| VerificationRecord::failed("mehta", inputs.clone(), e))
}

fn circular_record(n: usize, g: f64, config: RunConfig) -> VerificationRecord {
    let inputs = format!("n={n} g={g}");
    let run = || -> Result<VerificationRecord, String> {
        let closed = circular_closed(n, g).map_err(|e| e.to_string())?.value;
        let est = circular_numeric(n, g, Method::Quadrature { nodes: config.quad_nodes }).map_err(|e| e.to_string())?;
        Ok(VerificationRecord::numeric("circular", inputs.clone(), closed, est.value, config.rel_tol))
    };
    run().unwrap_or_else(|e| VerificationRecord::failed("circular", inputs.clone(), e))
}

/// `C_3(2)` by quadrature against the constant term of `A_2` at `k = 2`.
fn circular_ct_record(config: RunConfig) -> VerificationRecord {
    let inputs = "n=3 g=2 vs ct A2 k=2".to_string();
    let run = || -> Result<VerificationRecord, String> {
        let sys = ct_system(family("A2")).map_err(|e| e.to_string())?;
        let ct = constant_term(&sys, &MultiplicityFunction::new().with(Orbit::Long, 2), DEFAULT_TERM_BUDGET)
            .map_err(|e| e.to_string())?;
        let ct = ct.to_f64().ok_or("constant term does not fit in f64")?;
        let est =
            circular_numeric(3, 2.0, Method::Quadrature { nodes: config.quad_nodes }).map_err(|e| e.to_string())?;
        Ok(VerificationRecord::numeric("circular", inputs.clone(), ct, est.value, config.rel_tol))
    };
    run().unwrap_or_else(|e| VerificationRecord::failed("circular", inputs.clone(), e))
}

pub fn classical_tasks(config: &RunConfig) -> Vec<Task> {
    let c = *config;
    vec![
        task(move || selberg_record(1, 3.0, 2.0, 1.0, c)),
        task(move || selberg_record(2, 2.0, 3.0, 1.0, c)),
        task(move || selberg_record(3, 2.0, 2.0, 1.0, c)),
        task(move || mehta_record(2, 1.0, c)),
        task(move || mehta_record(3, 1.0, c)),
        task(move || circular_record(2, 1.0, c)),
        task(move || circular_record(3, 1.0, c)),
        task(move || circular_record(3, 2.0, c)),
        task(move || circular_ct_record(c)),
    ]
}
