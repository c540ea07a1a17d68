//! CSV and JSON serialization of fields, spectra and scaling studies.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a field read
//! back from CSV carries bit-identical sample values.

use std::io::{Read, Write};

use ndarray::Array2;
use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::deformation::SpectrumRow;
use crate::error::{Error, Result};
use crate::genvalue::{grid_json, num17};
use crate::phasespace::{integrate, Field, PhaseGrid};

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn f(x: f64) -> String {
    format!("{x:?}")
}

/// Writes `q,p,re,im` rows in grid index order (q index outer).
pub fn write_field_csv<W: Write>(field: &Field, out: W) -> Result<()> {
    let g = field.grid();
    let mut w = csv_writer(out);
    w.write_record(["q", "p", "re", "im"])?;
    for ((i, j), v) in field.values().indexed_iter() {
        w.write_record([f(g.q(i)), f(g.p(j)), f(v.re), f(v.im)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a field written by [`write_field_csv`]; the grid is rebuilt from the sample
/// coordinates with zero offset and the given `hbar`.
pub fn read_field_csv<R: Read>(input: R, hbar: f64, label: &str) -> Result<Field> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["q", "p", "re", "im"] {
        return Err(Error::Io(format!("expected header q,p,re,im, found {}", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let parse = |k: usize| -> Result<f64> {
            let text = record.get(k).unwrap_or("");
            text.trim()
                .parse()
                .map_err(|_| Error::Io(format!("row {}: column {} is not a number: `{text}`", line + 2, k + 1)))
        };
        rows.push([parse(0)?, parse(1)?, parse(2)?, parse(3)?]);
    }
    if rows.is_empty() {
        return Err(Error::Io("field CSV has no samples".into()));
    }
    let n_p = rows.iter().take_while(|r| r[0] == rows[0][0]).count();
    if n_p == 0 || rows.len() % n_p != 0 {
        return Err(Error::Io("field CSV is not a complete rectangular grid".into()));
    }
    let n_q = rows.len() / n_p;
    let grid = PhaseGrid::new(
        (rows[0][0], rows[rows.len() - 1][0]),
        (rows[0][1], rows[n_p - 1][1]),
        n_q,
        n_p,
        hbar,
        0.0,
    )?;
    let values = Array2::from_shape_fn((n_q, n_p), |(i, j)| {
        let r = rows[i * n_p + j];
        Complex64::new(r[2], r[3])
    });
    Field::new(grid, values, label)
}

/// Companion JSON describing a written field.
pub fn field_report(field: &Field) -> Value {
    let mut stats = Map::new();
    let integral = integrate(field);
    stats.insert("max_abs".into(), num17(field.max_abs()));
    stats.insert("imag_max".into(), num17(field.max_imag()));
    stats.insert("integral_re".into(), num17(integral.re));
    stats.insert("integral_im".into(), num17(integral.im));
    let mut m = Map::new();
    m.insert("label".into(), Value::from(field.label()));
    m.insert("grid".into(), grid_json(field.grid()));
    m.insert("stats".into(), Value::Object(stats));
    Value::Object(m)
}

pub fn write_spectrum_csv<W: Write>(rows: &[SpectrumRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["n", "energy"])?;
    for row in rows {
        w.write_record([row.n.to_string(), f(row.energy)])?;
    }
    w.flush()?;
    Ok(())
}

/// `hbar,defect,slope` rows; `slope` is `exact_zero` when every defect vanished.
pub fn write_assoc_csv<W: Write>(samples: &[(f64, f64)], slope: Option<f64>, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["hbar", "defect", "slope"])?;
    let slope = slope.map_or_else(|| "exact_zero".to_string(), f);
    for (hbar, defect) in samples {
        w.write_record([f(*hbar), f(*defect), slope.clone()])?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}
