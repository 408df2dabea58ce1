//! Acceptance criteria, one line each. Run with
//! `cargo test -p edl-core --test acceptance` (add `-- --nocapture` for the
//! per-criterion details; the PASS/FAIL lines are always written).

mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{binomial, ct_by_expansion, factorial, rank_two_roots, type_a_roots, type_bc_roots, weyl_order};
use edl_core::constant_term::{
    constant_term, dyson_constant_term, predict_equal_parameter, predict_general, DEFAULT_TERM_BUDGET,
};
use edl_core::exact::{int, rat};
use edl_core::geometry::{tiling_check, verify_dyson_identity, verify_restricted_identity, Tolerance};
use edl_core::integrals::{
    circular_closed, circular_numeric, macdonald_closed, mehta_closed, mehta_mc, selberg_closed, torus_integral, Method,
};
use edl_core::root_systems::{build_nonreduced, build_root_system, Family, MultiplicityFunction, Orbit, RootFamily};
use edl_core::sampling::SamplingPlan;
use edl_core::symspace::{catalog_audit, lookup, Catalog, ParameterBinding};
use edl_core::verify::{run_suite, RunConfig, Suite};
use num_bigint::BigInt;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fam(s: &str) -> RootFamily {
    RootFamily::parse(s).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn quad(nodes: usize) -> Method {
    Method::Quadrature { nodes }
}

fn c01_relation() -> Check {
    let start = Instant::now();
    let mut names: Vec<String> = Vec::new();
    names.extend((1..=8).map(|n| format!("A{n}")));
    names.extend((2..=8).map(|n| format!("B{n}")));
    names.extend((3..=8).map(|n| format!("C{n}")));
    names.extend((4..=8).map(|n| format!("D{n}")));
    names.extend((6..=8).map(|n| format!("E{n}")));
    names.extend(["F4".to_string(), "G2".to_string()]);
    for name in &names {
        let sys = build_root_system(fam(name)).map_err(|e| e.to_string())?;
        let rep = sys.verify_relation();
        let letter = &name[..1];
        let n: u64 = name[1..].parse().unwrap();
        let oracle = weyl_order(letter, n);
        ensure(rep.pass, || format!("{name}: relation fails {} vs {}", rep.lhs, rep.rhs))?;
        ensure(rep.weyl_order.to_string() == oracle.to_string(), || {
            format!("{name}: |W| = {} but closed form gives {oracle}", rep.weyl_order)
        })?;
        if name == "E7" {
            ensure(rep.weyl_order.to_string() == "2903040" && rep.cells.to_string() == "1451520", || {
                format!("E7: |W| = {}, cells = {}", rep.weyl_order, rep.cells)
            })?;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 1.0, || format!("took {elapsed:.3}s"))?;
    Ok(format!("{} systems in {elapsed:.3}s; E7 |W| = 2903040 = 2 x 1451520", names.len()))
}

fn c02_enumeration() -> Check {
    let start = Instant::now();
    let names = ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C3", "C4", "D4", "F4", "G2"];
    for name in names {
        let sys = build_root_system(fam(name)).map_err(|e| e.to_string())?;
        let counted = sys.weyl_order_by_enumeration().map_err(|e| e.to_string())?;
        let degrees: u128 = sys.degrees().iter().map(|&d| d as u128).product();
        let oracle = weyl_order(&name[..1], name[1..].parse().unwrap());
        ensure(counted.to_string() == degrees.to_string() && degrees == oracle, || {
            format!("{name}: enumerated {counted}, degrees {degrees}, closed form {oracle}")
        })?;
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 30.0, || format!("took {elapsed:.1}s"))?;
    Ok(format!("{} groups enumerated in {elapsed:.2}s", names.len()))
}

fn c03_dyson_ct() -> Check {
    let mut count = 0;
    for n in 2..=4usize {
        let sys = build_nonreduced(fam(&format!("A{}", n - 1)), MultiplicityFunction::new()).unwrap();
        for k in 1..=3u32 {
            let engine = constant_term(&sys, &MultiplicityFunction::new().with(Orbit::Long, k), DEFAULT_TERM_BUDGET)
                .map_err(|e| e.to_string())?;
            let oracle = ct_by_expansion(n, &type_a_roots(n, k));
            let closed = factorial(n as u64 * k as u64) / factorial(k as u64).pow(n as u32);
            ensure(engine.to_string() == oracle.to_string() && oracle as u128 == closed, || {
                format!("n={n} k={k}: engine {engine}, expansion {oracle}, (nk)!/(k!)^n {closed}")
            })?;
            ensure(dyson_constant_term(n as u32, k) == BigInt::from(closed), || {
                format!("n={n} k={k}: library formula")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} cases, up to CT(A3, k=3) = {}", factorial(12) / factorial(3).pow(4)))
}

fn c04_equal_parameter() -> Check {
    let degrees = [("A2", [2u64, 3]), ("B2", [2, 4]), ("G2", [2, 6])];
    let mut shown = Vec::new();
    for (name, d) in degrees {
        let sys = build_root_system(fam(name)).unwrap();
        let nr = build_nonreduced(fam(name), MultiplicityFunction::new()).unwrap();
        for k in 1..=2u32 {
            let roots: Vec<_> = rank_two_roots(name).into_iter().map(|r| (r, k)).collect();
            let oracle = ct_by_expansion(2, &roots);
            let closed: u128 = d.iter().map(|&di| binomial(k as u64 * di, k as u64)).product();
            let engine = constant_term(&nr, &MultiplicityFunction::uniform(k), DEFAULT_TERM_BUDGET)
                .map_err(|e| e.to_string())?;
            let predicted = predict_equal_parameter(&sys, k);
            ensure(
                oracle as u128 == closed
                    && engine.to_string() == oracle.to_string()
                    && predicted.to_string() == closed.to_string(),
                || {
                    format!(
                        "{name} k={k}: expansion {oracle}, binomials {closed}, engine {engine}, library {predicted}"
                    )
                },
            )?;
            shown.push(format!("{name}/{k}={closed}"));
        }
    }
    Ok(shown.join(" "))
}

fn c05_general_formula() -> Check {
    let mut count = 0;
    // BC1: orbit order (long, double_long) = (e_1, 2e_1)
    for a in 0..=2u32 {
        for b in 0..=2u32 {
            if a + b == 0 {
                continue;
            }
            let sys = build_nonreduced(fam("BC1"), MultiplicityFunction::new()).unwrap();
            let k = MultiplicityFunction::new().with(Orbit::Long, a).with(Orbit::DoubleLong, b);
            let oracle = ct_by_expansion(1, &type_bc_roots(1, 0, a, b));
            let engine = constant_term(&sys, &k, DEFAULT_TERM_BUDGET).map_err(|e| e.to_string())?;
            let predicted = predict_general(&sys, &k).map_err(|e| e.to_string())?;
            ensure(engine.to_string() == oracle.to_string() && predicted == int(oracle as i64), || {
                format!("BC1 k=({a},{b}): expansion {oracle}, engine {engine}, formula {predicted}")
            })?;
            count += 1;
        }
    }
    for l in 0..=2u32 {
        for s in 0..=2u32 {
            for d in 0..=2u32 {
                if l + s + d == 0 {
                    continue;
                }
                let sys = build_nonreduced(fam("BC2"), MultiplicityFunction::new()).unwrap();
                let k =
                    MultiplicityFunction::new().with(Orbit::Long, l).with(Orbit::Short, s).with(Orbit::DoubleShort, d);
                let oracle = ct_by_expansion(2, &type_bc_roots(2, l, s, d));
                let engine = constant_term(&sys, &k, DEFAULT_TERM_BUDGET).map_err(|e| e.to_string())?;
                let predicted = predict_general(&sys, &k).map_err(|e| e.to_string())?;
                ensure(engine.to_string() == oracle.to_string() && predicted == int(oracle as i64), || {
                    format!("BC2 k=({l},{s},{d}): expansion {oracle}, engine {engine}, formula {predicted}")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} mixed multiplicity functions on BC1 and BC2"))
}

/// `∏ Γ(k d_i + 1) / (Γ(k + 1) Γ(k d_i − k + 1))` through statrs.
fn equal_parameter_oracle(degrees: &[u64], k: f64) -> f64 {
    use statrs::function::gamma::gamma;
    degrees.iter().map(|&d| gamma(k * d as f64 + 1.0) / (gamma(k + 1.0) * gamma(k * d as f64 - k + 1.0))).product()
}

fn c06_torus_half() -> Check {
    let mut shown = Vec::new();
    for (name, tol) in [("A1", 1e-8), ("A2", 1e-4), ("B2", 1e-4), ("G2", 1e-4)] {
        let sys = build_root_system(fam(name)).unwrap();
        let nr = build_nonreduced(fam(name), MultiplicityFunction::new()).unwrap();
        let est = torus_integral::<f64>(&nr, &MultiplicityFunction::uniform(rat(1, 2)), quad(64))
            .map_err(|e| e.to_string())?;
        let closed = macdonald_closed::<f64>(&sys, 0.5).map_err(|e| e.to_string())?.value;
        let oracle = equal_parameter_oracle(sys.degrees(), 0.5);
        ensure(rel(closed, oracle) < 1e-12, || format!("{name}: closed form {closed} vs statrs {oracle}"))?;
        ensure(rel(est.value, closed) < tol, || format!("{name}: quadrature {} vs {closed}", est.value))?;
        if name == "A1" {
            ensure(rel(est.value, 4.0 / PI) < 1e-8, || format!("A1: {} vs 4/pi", est.value))?;
        }
        shown.push(format!("{name} {:.1e}", rel(est.value, closed)));
    }
    Ok(format!("rel errors: {}", shown.join(", ")))
}

fn c07_tiling() -> Check {
    let tol = Tolerance { rel: 1e-4, ..Tolerance::default() };
    let mut shown = Vec::new();
    for name in ["A1", "A2", "B2", "G2"] {
        let sys = build_nonreduced(fam(name), MultiplicityFunction::uniform(int(1))).unwrap();
        let rep = tiling_check::<f64>(&sys, 64, tol).map_err(|e| e.to_string())?;
        ensure(rep.pass, || format!("{name}: box {} vs cells x region {}", rep.lhs, rep.rhs))?;
        if name == "A1" {
            ensure((rep.lhs - 2.0).abs() < 1e-12, || format!("A1 box integral {}", rep.lhs))?;
        }
        shown.push(format!("{name} {:.1e}", rep.rel_err));
    }
    Ok(format!("rel errors: {}", shown.join(", ")))
}

fn c08_split_dyson() -> Check {
    let tol = Tolerance { rel: 1e-4, ..Tolerance::default() };
    let mut shown = Vec::new();
    for name in ["A1", "A2", "B2", "G2"] {
        let sys = build_root_system(fam(name)).unwrap();
        let rep = verify_dyson_identity::<f64>(&sys, quad(64), tol).map_err(|e| e.to_string())?;
        ensure(rep.pass, || format!("{name}: {} vs {}", rep.lhs, rep.rhs))?;
        if name == "A1" {
            let s2 = 2f64.sqrt();
            ensure(rel(rep.lhs, s2) < 1e-10 && rel(rep.rhs, s2) < 1e-10, || {
                format!("A1: {} and {} vs sqrt 2", rep.lhs, rep.rhs)
            })?;
        }
        shown.push(format!("{name} {:.1e}", rep.rel_err));
    }
    Ok(format!("rel errors: {}", shown.join(", ")))
}

/// `∫` over the rank-one region of `sin^a(s) sin^b(2s)`, divided by
/// `|α| = √2`, from the beta function.
fn rank_one_oracle(a: f64, b: f64) -> f64 {
    use statrs::function::beta::beta;
    let region = if b == 0.0 {
        beta((a + 1.0) / 2.0, 0.5)
    } else {
        2f64.powf(b - 1.0) * beta((a + b + 1.0) / 2.0, (b + 1.0) / 2.0)
    };
    region / 2f64.sqrt()
}

fn c09_restricted() -> Check {
    let n = |v| ParameterBinding::new().with("n", v);
    // (label, binding, m_lambda, m_2lambda)
    let rank_one = [
        ("AIV", n(2), 2, 1),
        ("AIV", n(3), 4, 1),
        ("BII", n(2), 3, 0),
        ("BII", n(3), 5, 0),
        ("DII", n(2), 2, 0),
        ("DII", n(3), 4, 0),
        ("FII", ParameterBinding::new(), 8, 7),
    ];
    let tight = Tolerance { rel: 1e-6, ..Tolerance::default() };
    let mut shown = Vec::new();
    for (label, b, ml, m2) in rank_one {
        let entry = lookup(label, &b).map_err(|e| e.to_string())?;
        ensure(entry.m_lambda == vec![ml] && entry.m_2lambda == vec![m2], || {
            format!("{label} {b}: multiplicities {:?} {:?}", entry.m_lambda, entry.m_2lambda)
        })?;
        let rep = verify_restricted_identity::<f64>(&entry, quad(64), tight).map_err(|e| e.to_string())?;
        let oracle = rank_one_oracle(ml as f64, m2 as f64);
        ensure(rep.pass, || format!("{label} {b}: {} vs {}", rep.lhs, rep.rhs))?;
        ensure(rel(rep.lhs, oracle) < 1e-10, || format!("{label} {b}: region {} vs beta oracle {oracle}", rep.lhs))?;
        shown.push(format!(
            "{label}{} {:.0e}",
            if b.is_empty() { String::new() } else { format!("({b})") },
            rep.rel_err
        ));
    }
    let loose = Tolerance { rel: 1e-4, ..Tolerance::default() };
    for label in ["EIV", "EIII"] {
        let entry = lookup(label, &ParameterBinding::new()).map_err(|e| e.to_string())?;
        let rep = verify_restricted_identity::<f64>(&entry, quad(64), loose).map_err(|e| e.to_string())?;
        ensure(rep.pass, || format!("{label}: {} vs {}", rep.lhs, rep.rhs))?;
        shown.push(format!("{label} {:.0e}", rep.rel_err));
    }
    Ok(shown.join(", "))
}

fn c10_classical() -> Check {
    use statrs::function::beta::beta;
    for (a, b) in [(0.5, 0.5), (1.0, 1.0), (2.5, 1.5), (3.0, 7.25), (0.3, 4.0)] {
        let s = selberg_closed(1, a, b, 0.7).map_err(|e| e.to_string())?.value;
        let oracle = beta(a, b);
        ensure(rel(s, oracle) < 1e-12, || format!("Selberg n=1 a={a} b={b}: {s} vs beta {oracle}"))?;
    }
    let f2 = mehta_closed(2, 1.0f64).map_err(|e| e.to_string())?.value;
    ensure((f2 - 2.0).abs() < 1e-12, || format!("F2(1) closed form {f2}"))?;
    let plan = SamplingPlan::new(1_000_000, 42, 4);
    let mut sig = Vec::new();
    for (n, exact) in [(2usize, 2.0), (3, 12.0)] {
        let est = mehta_mc(n, 1.0f64, plan).map_err(|e| e.to_string())?;
        let closed = mehta_closed(n, 1.0f64).map_err(|e| e.to_string())?.value;
        ensure(rel(closed, exact) < 1e-12, || format!("F{n}(1) closed form {closed}"))?;
        let z = (est.value - exact).abs() / est.std_error;
        ensure(z <= 3.0, || format!("F{n}(1): {} +- {} is {z:.2} sigma from {exact}", est.value, est.std_error))?;
        sig.push(format!("F{n} {z:.2}sigma"));
    }
    let c2 = circular_numeric(2, 1.0f64, quad(64)).map_err(|e| e.to_string())?.value;
    ensure((c2 - 2.0).abs() < 1e-8, || format!("C2(1) = {c2}"))?;
    let c2_closed = circular_closed(2, 1.0f64).map_err(|e| e.to_string())?.value;
    ensure((c2_closed - 2.0).abs() < 1e-12, || format!("C2(1) closed form {c2_closed}"))?;
    let a2 = build_nonreduced(fam("A2"), MultiplicityFunction::new()).unwrap();
    let ct = constant_term(&a2, &MultiplicityFunction::new().with(Orbit::Long, 2), DEFAULT_TERM_BUDGET)
        .map_err(|e| e.to_string())?;
    let c3 = circular_numeric(3, 2.0f64, quad(64)).map_err(|e| e.to_string())?.value;
    let oracle = factorial(6) / factorial(2).pow(3);
    ensure(ct.to_string() == "90" && oracle == 90 && rel(c3, 90.0) < 1e-8, || {
        format!("C3(2) quadrature {c3}, CT {ct}, 6!/(2!)^3 {oracle}")
    })?;
    Ok(format!("Selberg n=1 = beta to 1e-12; {}; C2(1) = {c2:.12}; C3(2) = {c3:.10} = CT(A2,2) = 90", sig.join(", ")))
}

fn c11_catalog() -> Check {
    let rows = Catalog::builtin().rows();
    ensure(rows.len() == 29, || format!("{} rows", rows.len()))?;
    let records = catalog_audit();
    let failing: Vec<String> = records
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            let bad: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            format!("{} {}: {}", r.label, r.binding, bad.join(","))
        })
        .collect();
    ensure(failing.is_empty(), || failing.join("; "))?;
    for label in ["AIII_a", "BII", "CII_a"] {
        let row = Catalog::builtin().row(label).map_err(|e| e.to_string())?;
        ensure(!row.source_notes.is_empty(), || format!("{label} has no source note"))?;
    }
    let noted = rows.iter().filter(|r| !r.source_notes.is_empty()).count();
    Ok(format!("{} rows, {} row/binding audits pass, {noted} rows carry source notes", rows.len(), records.len()))
}

fn c12_determinism() -> Check {
    let config = RunConfig { samples: 200_000, ..RunConfig::default() };
    let mut shown = Vec::new();
    for suite in [Suite::Classical, Suite::Split, Suite::Restricted] {
        let a = serde_json::to_string(&run_suite(suite, config).without_timing()).map_err(|e| e.to_string())?;
        let b = serde_json::to_string(&run_suite(suite, config).without_timing()).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("suite {suite} differs between runs"))?;
        shown.push(format!("{suite} {} bytes", a.len()));
    }
    let reseeded = RunConfig { seed: 43, ..config };
    let a = serde_json::to_string(&run_suite(Suite::Classical, config).without_timing()).unwrap();
    let c = serde_json::to_string(&run_suite(Suite::Classical, reseeded).without_timing()).unwrap();
    ensure(a != c, || "changing the seed did not change the Monte Carlo records".into())?;
    Ok(format!("identical reruns: {}", shown.join(", ")))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 12] = [
        ("relation |W| = |Z| r! prod n over A1-A8, B2-B8, C3-C8, D4-D8, E6-E8, F4, G2 (< 1 s)", c01_relation),
        ("Weyl enumeration equals prod d_i, rank <= 4 plus A5 and D4 (< 30 s)", c02_enumeration),
        ("Dyson constant term for A_(n-1), n <= 4, k <= 3", c03_dyson_ct),
        ("equal-parameter constant term for A2, B2, G2, k <= 2", c04_equal_parameter),
        ("general-parameter formula on BC1 and BC2, mixed k <= 2", c05_general_formula),
        ("J_1/2 torus quadrature vs product: A1 1e-8, A2/B2/G2 1e-4", c06_torus_half),
        ("tiling box = cells x region for A1, A2, B2, G2 at 1e-4", c07_tiling),
        ("split Dyson identity A1 (sqrt 2), A2, B2, G2 at 1e-4", c08_split_dyson),
        ("restricted identity rank one at 1e-6, EIV and EIII at 1e-4", c09_restricted),
        ("classical suite: Selberg, Mehta, circular", c10_classical),
        ("catalog audit with source notes", c11_catalog),
        ("deterministic JSON across runs", c12_determinism),
    ];
    let mut failures = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(detail) => format!("[PASS] {:02} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => format!("[FAIL] {:02} {name} ({secs:.2}s): {why}", i + 1),
        };
        // bypasses the test harness capture so the lines land in every log
        let _ = writeln!(std::io::stderr().lock(), "{line}");
        if outcome.is_err() {
            failures.push(line);
        }
    }
    assert!(failures.is_empty(), "{} criteria failed:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn family_letters_cover_every_criterion_system() {
    for (f, r) in
        [(Family::A, 8), (Family::B, 8), (Family::C, 8), (Family::D, 8), (Family::E, 8), (Family::F, 4), (Family::G, 2)]
    {
        assert!(RootFamily::new(f, r).is_ok());
    }
}
