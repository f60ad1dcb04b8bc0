//! CSV and JSON serialization with 17 significant digits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::Result;
use crate::model::SolverMethod;

/// Formats `x` with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-5..=16).contains(&exponent) {
        return format!("{x:.16e}");
    }
    format!("{:.*}", (16 - exponent).max(0) as usize, x)
}

/// JSON formatter writing floats through [`fmt_sig17`].
#[derive(Debug, Default, Clone, Copy)]
pub struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` as compact JSON with 17-digit floats and a trailing
/// newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(mut writer: W, value: &T) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut writer, Sig17Formatter);
    value.serialize(&mut ser)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    write_json(&mut buf, value)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// One (method, grid point) result, the unit of the sweep and curve exports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResultRow {
    pub method: SolverMethod,
    pub c: f64,
    pub phi: f64,
    pub se: f64,
    pub n_raw: f64,
    pub n: u64,
}

pub const RESULT_HEADER: [&str; 6] = ["method", "c", "phi", "se", "n_raw", "n"];

pub(crate) fn csv_writer<W: Write>(writer: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(writer)
}

/// Writes rows as CSV with the `method,c,phi,se,n_raw,n` header.
pub fn write_results_csv<W: Write>(writer: W, rows: &[ResultRow]) -> Result<()> {
    let mut out = csv_writer(writer);
    out.write_record(RESULT_HEADER)?;
    for row in rows {
        out.write_record([
            row.method.name().to_string(),
            fmt_sig17(row.c),
            fmt_sig17(row.phi),
            fmt_sig17(row.se),
            fmt_sig17(row.n_raw),
            row.n.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Writes rows as a JSON array of objects.
pub fn write_results_json<W: Write>(writer: W, rows: &[ResultRow]) -> Result<()> {
    write_json(writer, rows)
}
