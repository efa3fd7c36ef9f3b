//! Parameter table rows: one generated and analysed family per field size.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::correlation::{family_correlation, Method};
use crate::error::Result;
use crate::family::build_family;
use crate::gf2n::FieldContext;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table2Row {
    pub field_size: u64,
    pub seq_length: usize,
    pub family_size: usize,
    pub max_correlation: u32,
    pub bound: u32,
    pub balanced_count: usize,
    pub modulus: u32,
    pub a: u32,
    pub b: u32,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Builds the family for GF(2^n) with default choices and measures it.
pub fn table2_row(n: u32) -> Result<Table2Row> {
    let start = Instant::now();
    let ctx = FieldContext::new(n, None)?;
    let family = build_family(&ctx, None)?;
    let report = family_correlation(&family.sequences, family.bound, Method::Packed);
    Ok(Table2Row {
        field_size: ctx.q() as u64,
        seq_length: report.length,
        family_size: report.family_size,
        max_correlation: report.cor,
        bound: report.bound,
        balanced_count: report.balanced_count,
        modulus: ctx.modulus(),
        a: family.modulus.a().bits(),
        b: family.modulus.b().bits(),
        wall_time: start.elapsed(),
    })
}

pub fn table2(n_min: u32, n_max: u32) -> Result<Vec<Table2Row>> {
    (n_min..=n_max).map(table2_row).collect()
}

const HEADER: [&str; 9] = [
    "q", "length", "size", "cor", "bound", "balanced", "modulus", "(a,b)", "time_s",
];

fn cells(r: &Table2Row) -> [String; 9] {
    [
        r.field_size.to_string(),
        r.seq_length.to_string(),
        r.family_size.to_string(),
        r.max_correlation.to_string(),
        r.bound.to_string(),
        r.balanced_count.to_string(),
        format!("{:#x}", r.modulus),
        format!("({},{})", r.a, r.b),
        format!("{:.3}", r.wall_time.as_secs_f64()),
    ]
}

/// Right-aligned text table.
pub fn format_aligned(rows: &[Table2Row]) -> String {
    let body: Vec<[String; 9]> = rows.iter().map(cells).collect();
    let widths: Vec<usize> = (0..HEADER.len())
        .map(|c| {
            body.iter()
                .map(|r| r[c].len())
                .chain([HEADER[c].len()])
                .max()
                .unwrap()
        })
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, row: &[&str]| {
        let parts: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
    };
    line(&mut out, &HEADER);
    for r in &body {
        line(&mut out, &r.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

pub fn format_csv(rows: &[Table2Row]) -> String {
    let mut out =
        String::from("field_size,seq_length,family_size,max_correlation,bound,balanced_count,modulus,a,b,wall_time_s\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.6}",
            r.field_size,
            r.seq_length,
            r.family_size,
            r.max_correlation,
            r.bound,
            r.balanced_count,
            r.modulus,
            r.a,
            r.b,
            r.wall_time.as_secs_f64()
        )
        .unwrap();
    }
    out
}
