//! File formats: complex matrices and vectors as CSV or JSON, real matrices
//! as CSV, intensity images as 16-bit PGM or PNG, and atomic writes.
//!
//! CSV convention for complex data: two adjacent columns (re, im) per entry,
//! so an N x N matrix is N rows of 2N numbers. JSON represents a complex
//! number as a `[re, im]` pair. Floats are written with Rust's shortest
//! round-trip formatting, which makes outputs byte-deterministic and
//! re-parses to the identical value.

use crate::error::{Error, Result};
use crate::gates::{GateMatrix, StateVector};
use crate::lattice::Field;
use num_complex::Complex64;
use std::io::Write;
use std::path::Path;

fn parse_f64(token: &str, path: &Path, line: usize) -> Result<f64> {
    token.trim().parse::<f64>().map_err(|_| {
        Error::Parse(format!(
            "{}:{}: '{}' is not a number",
            path.display(),
            line + 1,
            token.trim()
        ))
    })
}

/// Read numeric CSV: one row per line, comma-separated, blank lines skipped.
fn read_numeric_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|tok| parse_f64(tok, path, idx))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}

fn pairs_to_complex(row: &[f64], path: &Path) -> Result<Vec<Complex64>> {
    if !row.len().is_multiple_of(2) {
        return Err(Error::Parse(format!(
            "{}: odd number of columns; complex data needs (re, im) pairs",
            path.display()
        )));
    }
    Ok(row.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

/// Read a complex square matrix from `.json` ([[ [re, im], ... ], ...]) or
/// CSV (rows of re, im pairs), chosen by extension.
pub fn read_matrix(path: &Path) -> Result<GateMatrix> {
    let rows: Vec<Vec<Complex64>> = if is_json(path) {
        let text = std::fs::read_to_string(path)?;
        let raw: Vec<Vec<(f64, f64)>> = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|(re, im)| Complex64::new(re, im))
                    .collect()
            })
            .collect()
    } else {
        read_numeric_csv(path)?
            .iter()
            .map(|row| pairs_to_complex(row, path))
            .collect::<Result<_>>()?
    };
    GateMatrix::from_rows(rows).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Read a complex vector from `.json` ([[re, im], ...]) or CSV (one re, im
/// pair per line).
pub fn read_vector(path: &Path) -> Result<StateVector> {
    let coeffs: Vec<Complex64> = if is_json(path) {
        let text = std::fs::read_to_string(path)?;
        let raw: Vec<(f64, f64)> = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        raw.into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect()
    } else {
        let rows = read_numeric_csv(path)?;
        let mut coeffs = Vec::new();
        for row in &rows {
            coeffs.extend(pairs_to_complex(row, path)?);
        }
        coeffs
    };
    if coeffs.is_empty() {
        return Err(Error::Parse(format!("{}: empty vector", path.display())));
    }
    Ok(StateVector::new(coeffs))
}

fn is_json(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()) == Some("json")
}

/// Complex matrix as CSV text: rows of (re, im) pairs.
pub fn matrix_to_csv(m: &GateMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|c| format!("{},{}", c.re, c.im)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Complex vector as CSV text: one (re, im) pair per line.
pub fn vector_to_csv(u: &StateVector) -> String {
    let mut out = String::new();
    for c in u.coeffs() {
        out.push_str(&format!("{},{}\n", c.re, c.im));
    }
    out
}

/// Real matrix as CSV text.
pub fn real_matrix_to_csv(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Write bytes atomically: a temporary file in the destination directory is
/// persisted over the target only after the full write succeeds.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Serialize to pretty JSON and write atomically.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Max-normalized intensity of a field as 16-bit grayscale samples.
///
/// Returns the samples (row-major) and the intensity that was mapped to
/// full scale, so the physical scale can be recorded alongside the image.
pub fn intensity_to_u16(field: &Field) -> (Vec<u16>, f64) {
    let intensity = field.intensity();
    let max = intensity.iter().cloned().fold(0.0f64, f64::max);
    let samples = intensity
        .iter()
        .map(|&v| {
            if max > 0.0 {
                (v / max * 65535.0).round() as u16
            } else {
                0
            }
        })
        .collect();
    (samples, max)
}

/// Write the field's intensity as a binary 16-bit PGM (P5, big-endian).
///
/// Returns the intensity value mapped to full scale.
pub fn write_field_pgm(path: &Path, field: &Field) -> Result<f64> {
    let (samples, max) = intensity_to_u16(field);
    let g = field.grid_px();
    let mut bytes = format!("P5\n{g} {g}\n65535\n").into_bytes();
    for s in samples {
        bytes.extend_from_slice(&s.to_be_bytes());
    }
    write_atomic(path, &bytes)?;
    Ok(max)
}

/// Write the field's intensity as 16-bit grayscale PNG.
///
/// Returns the intensity value mapped to full scale.
pub fn write_field_png(path: &Path, field: &Field) -> Result<f64> {
    let (samples, max) = intensity_to_u16(field);
    let g = field.grid_px() as u32;
    let img: image::ImageBuffer<image::Luma<u16>, Vec<u16>> =
        image::ImageBuffer::from_vec(g, g, samples).expect("sample count matches dimensions");
    let mut bytes = std::io::Cursor::new(Vec::new());
    image::DynamicImage::ImageLuma16(img)
        .write_to(&mut bytes, image::ImageFormat::Png)
        .map_err(|e| Error::Parse(format!("encoding {}: {e}", path.display())))?;
    write_atomic(path, &bytes.into_inner())?;
    Ok(max)
}

/// Write the raw complex field as CSV: each line holds the (re, im) pairs of
/// one grid row.
pub fn write_field_csv(path: &Path, field: &Field) -> Result<()> {
    let g = field.grid_px();
    let mut out = String::new();
    for r in 0..g {
        let cells: Vec<String> = (0..g)
            .map(|c| {
                let v = field.amplitude()[[r, c]];
                format!("{},{}", v.re, v.im)
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Read a field written by [`write_field_csv`].
pub fn read_field_csv(path: &Path, px_pitch: f64) -> Result<Field> {
    let rows = read_numeric_csv(path)?;
    let complex_rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|row| pairs_to_complex(row, path))
        .collect::<Result<_>>()?;
    let g = complex_rows.len();
    if complex_rows.iter().any(|r| r.len() != g) {
        return Err(Error::Parse(format!(
            "{}: field CSV must be square",
            path.display()
        )));
    }
    let mut arr = ndarray::Array2::zeros((g, g));
    for (r, row) in complex_rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            arr[[r, c]] = *v;
        }
    }
    Field::new(arr, px_pitch)
}
