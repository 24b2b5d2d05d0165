//! Census output as JSON, CSV, or a Markdown table laid out like the
//! printed tables.

use serde::Serialize;

use super::build::{Census, CensusRow};
use super::cy::DeltaConvention;
use super::errata::ErrataReport;
use crate::error::{Error, Result};

#[derive(Serialize)]
struct JsonDocument<'a> {
    census: &'a Census,
    delta_convention: DeltaConvention,
    #[serde(skip_serializing_if = "Option::is_none")]
    errata: Option<&'a ErrataReport>,
}

pub fn to_json(census: &Census, convention: DeltaConvention, errata: Option<&ErrataReport>) -> Result<String> {
    let doc = JsonDocument { census, delta_convention: convention, errata };
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn order_cell(row: &CensusRow) -> String {
    row.group_order.as_ref().map_or("∞".into(), |o| o.to_string())
}

fn euler_cell(row: &CensusRow) -> String {
    row.e_universal.as_ref().map(|e| e.to_string()).unwrap_or_default()
}

fn coverings_cell(row: &CensusRow) -> String {
    row.coverings
        .iter()
        .map(|e| match e.target_row {
            Some(t) => format!("{}{{{t}}}", e.suborbifold.render()),
            None => format!("{}→{}", e.suborbifold.render(), e.target.render_machine()),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn to_csv(census: &Census, convention: DeltaConvention) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["row", "d", "signature", "e", "e_source", "pi1", "delta", "delta_linear_system", "coverings", "flags"])
        .map_err(io)?;
    for r in &census.rows {
        let source = serde_json::to_value(r.e_source)?["kind"].as_str().unwrap_or_default().to_string();
        w.write_record([
            r.row.to_string(),
            r.degree.to_string(),
            r.signature.render_machine(),
            euler_cell(r),
            source,
            r.group_order.as_ref().map_or("infinite".into(), |o| o.to_string()),
            r.delta(convention).to_string(),
            r.delta_linear_system.to_string(),
            coverings_cell(r),
            r.flags.join(" "),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn to_markdown(census: &Census, convention: DeltaConvention) -> String {
    let mut out = format!(
        "| ℙ{} | d | orbifold | e | \\|π₁\\| | δ | sub-orbifolds and coverings |\n|---|---|---|---:|---:|---:|---|\n",
        superscript(census.dim)
    );
    for r in &census.rows {
        out.push_str(&format!(
            "| **{}** | {} | {} | {} | {} | {} | {} |\n",
            r.row,
            r.degree,
            r.signature.render_human(),
            euler_cell(r),
            order_cell(r),
            r.delta(convention),
            coverings_cell(r)
        ));
    }
    out
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}
