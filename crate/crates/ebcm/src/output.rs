//! CSV serialization of tables, oracle curves and event records.
//!
//! Reals are written in plain decimal notation rounded to 12 significant
//! digits with trailing zeros removed; missing values are `undefined`.

use std::io::{Read, Write};

use csv::{ReaderBuilder, Terminator, WriterBuilder};
use ebcm_core::experiments::{Cell, EventRecord, Table};
use ebcm_core::oracles::OracleCurve;

use crate::CliError;

pub const UNDEFINED: &str = "undefined";

const SIGNIFICANT_DIGITS: i32 = 12;

/// Decimal rendering with 12 significant digits.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return UNDEFINED.to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS - 1 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub fn cell_text(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Real(v) => format_real(*v),
        Cell::Text(t) => t.clone(),
        Cell::Undefined => UNDEFINED.to_string(),
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(w)
}

pub fn write_table<W: Write>(w: W, table: &Table) -> Result<(), CliError> {
    let mut out = writer(w);
    out.write_record(&table.columns)?;
    for row in &table.rows {
        out.write_record(row.iter().map(cell_text))?;
    }
    out.flush()?;
    Ok(())
}

/// Sweep column followed by one column per oracle channel.
pub fn oracle_table(curve: &OracleCurve) -> Table {
    let mut columns = vec![curve.sweep_name.as_str()];
    columns.extend(curve.channel_names.iter().map(String::as_str));
    let mut t = Table::new(&columns);
    for (i, x) in curve.sweep.iter().enumerate() {
        let mut row = vec![Cell::Real(*x)];
        row.extend(curve.channels.iter().map(|c| Cell::Real(c[i])));
        t.push(row);
    }
    t
}

pub const RECORD_COLUMNS: [&str; 5] = ["event_index", "outcome", "time_tag", "setting", "sweep_value"];

/// Writes records of one station; the station itself is implied by the file.
pub fn write_records<W: Write>(w: W, records: &[EventRecord]) -> Result<(), CliError> {
    let mut out = writer(w);
    out.write_record(RECORD_COLUMNS)?;
    for r in records {
        out.write_record([
            r.event_index.to_string(),
            r.outcome.to_string(),
            format_real(r.time_tag),
            format_real(r.setting),
            format_real(r.sweep_value),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a record file written by [`write_records`], tagging every record with `station`.
pub fn read_records<R: Read>(r: R, station: u8) -> Result<Vec<EventRecord>, CliError> {
    let mut rdr = ReaderBuilder::new().from_reader(r);
    let header = rdr.headers()?.clone();
    if header.iter().ne(RECORD_COLUMNS) {
        return Err(CliError::Config(format!("event file header must be {}", RECORD_COLUMNS.join(","))));
    }
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        let bad = |what: &str| CliError::Config(format!("event file row {}: invalid {what}", line + 2));
        let real = |i: usize, what: &str| -> Result<f64, CliError> {
            row[i].parse::<f64>().map_err(|_| bad(what))
        };
        out.push(EventRecord {
            event_index: row[0].parse().map_err(|_| bad("event_index"))?,
            station,
            outcome: row[1].parse().map_err(|_| bad("outcome"))?,
            time_tag: real(2, "time_tag")?,
            setting: real(3, "setting")?,
            sweep_value: real(4, "sweep_value")?,
        });
    }
    Ok(out)
}
