use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use edl_core::geometry::EulerRangeReport;
use edl_core::root_systems::RootSystem;
use edl_core::symspace::{RowSpec, SymmetricSpaceEntry};
use edl_core::verify::{OutputFormat, VerificationReport};
use serde::Serialize;

pub fn write_report(out: &mut impl Write, report: &VerificationReport, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in &report.records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        OutputFormat::Text => out.write_all(report_text(report).as_bytes())?,
    }
    Ok(())
}

fn report_text(report: &VerificationReport) -> String {
    let mut s = String::new();
    for r in &report.records {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        let _ =
            write!(s, "{verdict}  {:<10} {:<28} expected={} computed={}", r.command, r.inputs, r.expected, r.computed);
        if r.tolerance != "exact" && !r.tolerance.is_empty() {
            let _ = write!(s, " rel_err={:.3e} [{}]", r.rel_err, r.tolerance);
        }
        if let Some(sig) = r.sigma {
            let _ = write!(s, " sigma={sig:.2}");
        }
        if !r.pass && !r.detail.is_empty() {
            let _ = write!(s, "  ({})", r.detail);
        }
        s.push('\n');
    }
    let passed = report.records.iter().filter(|r| r.pass).count();
    let _ = writeln!(s, "{passed}/{} records pass", report.records.len());
    s
}

pub fn roots_summary(sys: &RootSystem) -> String {
    let mut s = String::new();
    let fam = sys.family();
    let _ = writeln!(s, "root system {fam}");
    let _ = writeln!(s, "  rank                 {}", sys.rank());
    let _ = writeln!(s, "  positive roots       {}", sys.positive_roots().len());
    let _ = writeln!(s, "  group dimension      {}", sys.group_dimension());
    let _ = writeln!(s, "  degrees              {:?}", sys.degrees());
    let _ = writeln!(s, "  |W|                  {}", sys.weyl_order());
    let _ = writeln!(s, "  |Z|                  {}", sys.center_order());
    let _ = writeln!(s, "  highest root         {:?}", sys.highest_coeffs());
    let _ = writeln!(s, "  cells r! prod n      {}", sys.cell_count());
    let _ = writeln!(s, "  cartan matrix");
    for row in sys.cartan() {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>3}")).collect();
        let _ = writeln!(s, "    {}", cells.join(""));
    }
    s
}

#[derive(Serialize)]
struct ShowPayload<'a> {
    schema: u32,
    row: &'a RowSpec,
    entry: &'a SymmetricSpaceEntry,
    euler: &'a EulerRangeReport,
}

pub fn write_show(
    out: &mut impl Write,
    row: &RowSpec,
    entry: &SymmetricSpaceEntry,
    euler: &EulerRangeReport,
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Csv => anyhow::bail!("csv output is only available for verification records"),
        OutputFormat::Json => {
            let payload = ShowPayload { schema: edl_core::verify::REPORT_SCHEMA, row, entry, euler };
            serde_json::to_writer_pretty(&mut *out, &payload)?;
            writeln!(out)?;
        }
        OutputFormat::Text => out.write_all(show_text(entry, euler).as_bytes())?,
    }
    Ok(())
}

fn show_text(e: &SymmetricSpaceEntry, r: &EulerRangeReport) -> String {
    let mut s = String::new();
    let binding = if e.binding.is_empty() { String::new() } else { format!(" ({})", e.binding) };
    let _ = writeln!(s, "{}{binding}: {} / {}", e.label, e.g_compact, e.h_name);
    let _ = writeln!(s, "  noncompact form       {}", e.g_noncompact);
    let _ = writeln!(s, "  dim G / dim H / dim K {} / {} / {}", e.dim_g, e.dim_h, e.dim_k);
    let _ = writeln!(s, "  K                     {}", e.k_name);
    let _ = writeln!(s, "  center                {} (order {})", e.center, e.center_order);
    let _ = writeln!(
        s,
        "  restricted system     {} (listed {}{})",
        r.restricted_system, e.restricted_family, e.restricted_rank
    );
    let _ = writeln!(s, "  highest root          {:?}", e.highest_coeffs);
    let _ = writeln!(s, "  multiplicities        m_lambda {:?}, m_2lambda {:?}", e.m_lambda, e.m_2lambda);
    let ratio = |x: &edl_core::symspace::RootLengthRatio| x.text.clone();
    let _ = writeln!(
        s,
        "  root-length ratios    G/H {}, G/(G/H) {}, H/K {}",
        ratio(&e.ratio_g_h),
        ratio(&e.ratio_g_gh),
        ratio(&e.ratio_h_k)
    );
    let _ = writeln!(s, "euler parametrization");
    let _ = writeln!(s, "  coordinates           {} x, {} y, {} z", r.x_count, r.y_count, r.z_count);
    let _ = writeln!(s, "  y range               {}", r.region_description);
    let _ = writeln!(s, "  region volume         {}", r.region_volume);
    let _ = writeln!(s, "  cells                 {}", r.cells);
    if let Some(g) = r.discrete_k_order {
        let _ = writeln!(s, "  |Gamma|               {g}");
    }
    for p in &r.periods {
        let values: Vec<String> = p
            .values
            .iter()
            .map(|v| match v.index {
                Some(i) => format!("[{i}] {} = {:.6}", v.exact, v.value),
                None => format!("{} = {:.6}", v.exact, v.value),
            })
            .collect();
        let shown = if values.is_empty() { p.note.clone().unwrap_or_default() } else { values.join(", ") };
        let _ = writeln!(s, "  period {} ({})  {}  {}", p.name, p.factor, p.text, shown);
    }
    for n in &r.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    s
}
