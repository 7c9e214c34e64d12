//! Two-column spectrum CSV with a `#`-prefixed metadata block, and the
//! ODMR stick table.

use std::fmt::Write;
use std::path::Path;

use super::{read_text, source_name, write_text};
use crate::error::{Error, Result};
use crate::spectrum::{Spectrum, SpectrumKind, SpectrumMeta};
use crate::spin::TransitionList;

/// Nine significant digits in scientific notation.
pub fn format_value(v: f64) -> String {
    format!("{v:.8e}")
}

pub fn spectrum_to_csv(s: &Spectrum) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# kind = {}", s.meta.kind);
    if let Some(t) = s.meta.temperature_k {
        let _ = writeln!(out, "# temperature_K = {t:?}");
    }
    let _ = writeln!(out, "# normalization = {}", s.meta.normalization);
    for (k, v) in &s.meta.extra {
        let _ = writeln!(out, "# {k} = {v}");
    }
    let _ = writeln!(out, "{},intensity", s.meta.kind.axis_label());
    for (x, y) in s.points() {
        let _ = writeln!(out, "{},{}", format_value(x), format_value(y));
    }
    out
}

pub fn emit_spectrum_csv(s: &Spectrum, path: &Path) -> Result<()> {
    write_text(path, &spectrum_to_csv(s))
}

pub fn read_spectrum_csv(path: &Path) -> Result<Spectrum> {
    parse_spectrum_csv(&read_text(path)?, &source_name(path))
}

pub fn parse_spectrum_csv(text: &str, source: &str) -> Result<Spectrum> {
    let mut meta: Option<SpectrumMeta> = None;
    let mut temperature = None;
    let mut normalization = None;
    let mut extra = Vec::new();
    let mut header_seen = false;
    let mut axis = Vec::new();
    let mut intensity = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if header_seen {
                return Err(Error::parse(source, n, 1, "metadata line after the column header"));
            }
            let Some((k, v)) = rest.split_once('=') else {
                return Err(Error::parse(source, n, 1, "metadata lines have the form `# key = value`"));
            };
            let (k, v) = (k.trim(), v.trim());
            match k {
                "kind" => {
                    let kind = v
                        .parse::<SpectrumKind>()
                        .map_err(|e| Error::parse(source, n, line.find(v).unwrap_or(0) + 1, e.to_string()))?;
                    meta = Some(SpectrumMeta::new(kind));
                }
                "temperature_K" => {
                    temperature = Some(v.parse::<f64>().map_err(|_| {
                        Error::parse(source, n, line.find(v).unwrap_or(0) + 1, format!("`{v}` is not a number"))
                    })?)
                }
                "normalization" => normalization = Some(v.to_string()),
                _ => extra.push((k.to_string(), v.to_string())),
            }
            continue;
        }
        if !header_seen {
            let Some(m) = &meta else {
                return Err(Error::parse(source, n, 1, "missing `# kind = ...` metadata before the header"));
            };
            let expected = format!("{},intensity", m.kind.axis_label());
            if trimmed != expected {
                return Err(Error::parse(source, n, 1, format!("expected header `{expected}`")));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::parse(source, n, 1, format!("expected 2 fields, found {}", fields.len())));
        }
        let mut col = 1;
        let mut vals = [0.0; 2];
        for (k, f) in fields.iter().enumerate() {
            vals[k] = f
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(source, n, col, format!("`{}` is not a finite number", f.trim())))?;
            col += f.len() + 1;
        }
        axis.push(vals[0]);
        intensity.push(vals[1]);
    }
    let Some(mut meta) = meta else {
        return Err(Error::parse(source, 1, 1, "missing `# kind = ...` metadata"));
    };
    if !header_seen {
        return Err(Error::parse(source, text.lines().count().max(1), 1, "missing column header"));
    }
    meta.temperature_k = temperature;
    if let Some(n) = normalization {
        meta.normalization = n;
    }
    meta.extra = extra;
    Spectrum::new(axis, intensity, meta).map_err(|e| Error::parse(source, 1, 1, e.to_string()))
}

/// `frequency_MHz,intensity,assignment`, sorted by frequency.
pub fn sticks_to_csv(sticks: &TransitionList) -> String {
    let mut list = sticks.clone();
    list.sort_by_frequency();
    let mut out = String::from("frequency_MHz,intensity,assignment\n");
    for t in &list.entries {
        let _ = writeln!(out, "{},{},{}", format_value(t.frequency_mhz), format_value(t.intensity), t.assignment());
    }
    out
}
