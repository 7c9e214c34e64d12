//! Orbital grid files.
//!
//! Text: `#` comments (a `# label = name` comment names the orbital), one
//! line with the nine cell numbers (rows are lattice vectors, Å), one line
//! with the three grid dimensions, then one value per line, `re` or `re im`,
//! z index fastest.
//!
//! Binary: the 8-byte magic `DSGRID01`, nine f64 cell numbers, three u64
//! dimensions, then `re, im` f64 pairs; all little-endian.

use std::fmt::Write;
use std::path::Path;

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::source_name;
use crate::error::{Error, Result};
use crate::zfs::GridOrbital;

pub const BINARY_MAGIC: &[u8; 8] = b"DSGRID01";

/// Largest number of grid points accepted from a file.
const MAX_POINTS: usize = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFormat {
    Text,
    Binary,
}

pub fn orbital_to_text(o: &GridOrbital) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# label = {}", o.label);
    let cell: Vec<String> = o.cell.transpose().iter().map(|v| format!("{v:?}")).collect();
    let _ = writeln!(out, "{}", cell.join(" "));
    let _ = writeln!(out, "{} {} {}", o.dims[0], o.dims[1], o.dims[2]);
    for v in &o.values {
        if v.im == 0.0 {
            let _ = writeln!(out, "{:?}", v.re);
        } else {
            let _ = writeln!(out, "{:?} {:?}", v.re, v.im);
        }
    }
    out
}

/// Numbers on one line, each with its 1-based column.
fn numbers(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

pub fn orbital_from_text(text: &str, source: &str, default_label: &str) -> Result<GridOrbital> {
    let mut label = default_label.to_string();
    let mut cell: Option<Matrix3<f64>> = None;
    let mut dims: Option<[usize; 3]> = None;
    let mut values = Vec::new();
    let mut expected = 0usize;
    let mut last_line = 1;
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        last_line = n;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                if k.trim() == "label" {
                    label = v.trim().to_string();
                }
            }
            continue;
        }
        let toks = numbers(line);
        let parse = |(col, tok): (usize, &str)| -> Result<f64> {
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(source, n, col, format!("`{tok}` is not a finite number")))
        };
        if cell.is_none() {
            if toks.len() != 9 {
                return Err(Error::parse(source, n, 1, format!("cell line needs 9 numbers (found {})", toks.len())));
            }
            let v: Vec<f64> = toks.into_iter().map(parse).collect::<Result<_>>()?;
            cell = Some(Matrix3::from_row_slice(&v));
        } else if dims.is_none() {
            if toks.len() != 3 {
                return Err(Error::parse(source, n, 1, format!("dimension line needs 3 integers (found {})", toks.len())));
            }
            let mut d = [0usize; 3];
            for (k, (col, tok)) in toks.into_iter().enumerate() {
                d[k] = tok
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| Error::parse(source, n, col, format!("`{tok}` is not a positive integer")))?;
            }
            expected = d.iter().try_fold(1usize, |a, &b| a.checked_mul(b)).filter(|&p| p <= MAX_POINTS).ok_or_else(|| {
                Error::parse(source, n, 1, format!("grid {}x{}x{} exceeds {MAX_POINTS} points", d[0], d[1], d[2]))
            })?;
            values.reserve(expected);
            dims = Some(d);
        } else {
            if values.len() == expected {
                return Err(Error::parse(source, n, 1, format!("more than {expected} values")));
            }
            let v = match toks.len() {
                1 => Complex64::new(parse(toks[0])?, 0.0),
                2 => Complex64::new(parse(toks[0])?, parse(toks[1])?),
                k => return Err(Error::parse(source, n, 1, format!("value lines hold `re` or `re im` (found {k} numbers)"))),
            };
            values.push(v);
        }
    }
    let (Some(cell), Some(dims)) = (cell, dims) else {
        return Err(Error::parse(source, last_line, 1, "missing cell or dimension line"));
    };
    if values.len() != expected {
        return Err(Error::parse(
            source,
            last_line,
            1,
            format!("expected {expected} values, found {}", values.len()),
        ));
    }
    GridOrbital::new(label, cell, dims, values).map_err(|e| Error::parse(source, 1, 1, e.to_string()))
}

pub fn orbital_to_binary(o: &GridOrbital) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 72 + 24 + 16 * o.values.len());
    out.extend_from_slice(BINARY_MAGIC);
    for v in o.cell.transpose().iter() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for d in o.dims {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for v in &o.values {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

/// Binary diagnostics use line 1 and the 1-based byte offset as column.
pub fn orbital_from_binary(bytes: &[u8], source: &str, label: &str) -> Result<GridOrbital> {
    let err = |offset: usize, m: String| Error::parse(source, 1, offset + 1, m);
    if bytes.len() < 8 || &bytes[..8] != BINARY_MAGIC {
        return Err(err(0, "missing DSGRID01 magic".into()));
    }
    let header = 8 + 72 + 24;
    if bytes.len() < header {
        return Err(err(bytes.len(), format!("truncated header ({} of {header} bytes)", bytes.len())));
    }
    let f = |off: usize| f64::from_le_bytes(bytes[off..off + 8].try_into().expect("8 bytes"));
    let u = |off: usize| u64::from_le_bytes(bytes[off..off + 8].try_into().expect("8 bytes"));
    let cell_v: Vec<f64> = (0..9).map(|k| f(8 + 8 * k)).collect();
    if let Some(k) = cell_v.iter().position(|v| !v.is_finite()) {
        return Err(err(8 + 8 * k, "non-finite cell entry".into()));
    }
    let mut dims = [0usize; 3];
    for (k, d) in dims.iter_mut().enumerate() {
        let v = u(80 + 8 * k);
        if v == 0 || v > MAX_POINTS as u64 {
            return Err(err(80 + 8 * k, format!("invalid grid dimension {v}")));
        }
        *d = v as usize;
    }
    let n = dims
        .iter()
        .try_fold(1usize, |a, &b| a.checked_mul(b))
        .filter(|&p| p <= MAX_POINTS)
        .ok_or_else(|| err(80, "grid too large".into()))?;
    let need = header + 16 * n;
    if bytes.len() != need {
        return Err(err(bytes.len().min(need), format!("expected {need} bytes, found {}", bytes.len())));
    }
    let values: Vec<Complex64> = (0..n).map(|i| Complex64::new(f(header + 16 * i), f(header + 16 * i + 8))).collect();
    if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(err(header + 16 * i, "non-finite value".into()));
    }
    GridOrbital::new(label, Matrix3::from_row_slice(&cell_v), dims, values).map_err(|e| err(0, e.to_string()))
}

/// Reads either format; binary is recognised by its magic.
pub fn read_orbital(path: &Path) -> Result<GridOrbital> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let source = source_name(path);
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("orbital");
    if bytes.starts_with(BINARY_MAGIC) {
        orbital_from_binary(&bytes, &source, stem)
    } else {
        let text = String::from_utf8(bytes).map_err(|e| Error::parse(&source, 1, 1, format!("not UTF-8 text: {e}")))?;
        orbital_from_text(&text, &source, stem)
    }
}

pub fn write_orbital(o: &GridOrbital, path: &Path, format: GridFormat) -> Result<()> {
    let bytes = match format {
        GridFormat::Text => orbital_to_text(o).into_bytes(),
        GridFormat::Binary => orbital_to_binary(o),
    };
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
