//! Spin-system files: TOML with `[system]`, `[[nucleus]]` and `[sweep]`.

use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::{read_text, source_name};
use crate::error::{Error, Result};
use crate::spin::{isotope_data, zfs_tensor, NucleusSpec, SpinSystem, SweepSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Numbers {
    Scalar(f64),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSection {
    #[serde(rename = "S")]
    s: f64,
    g: Numbers,
    #[serde(rename = "D_MHz", skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
    #[serde(rename = "E_MHz", skip_serializing_if = "Option::is_none")]
    e: Option<f64>,
    #[serde(rename = "D_tensor_MHz", skip_serializing_if = "Option::is_none")]
    d_tensor: Option<Vec<f64>>,
    #[serde(rename = "HStrain_MHz", skip_serializing_if = "Option::is_none")]
    h_strain: Option<Numbers>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NucleusSection {
    isotope: String,
    #[serde(default = "default_core")]
    core: bool,
    #[serde(rename = "A")]
    a: Vec<f64>,
    #[serde(rename = "I", skip_serializing_if = "Option::is_none")]
    spin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    g_n: Option<f64>,
}

fn default_core() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    #[serde(rename = "B_mT")]
    b: [f64; 3],
    #[serde(rename = "range_GHz")]
    range: [f64; 2],
    points: usize,
    #[serde(rename = "temperature_K", skip_serializing_if = "Option::is_none")]
    temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    euler_deg: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    system: SystemSection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    nucleus: Vec<NucleusSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<SweepSection>,
}

/// Parsed spin-system file.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinFile {
    pub system: SpinSystem,
    pub sweep: Option<SweepSpec>,
}

/// 1-based (line, column) of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    (line, col)
}

/// Position of `key` inside the `occurrence`-th `[section]`/`[[section]]`.
fn locate(text: &str, section: &str, occurrence: usize, key: &str) -> (usize, usize) {
    let mut current = String::new();
    let mut seen = 0usize;
    let mut header_line = 1;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('[') {
            current = t.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            if current == section {
                seen += 1;
                if seen == occurrence + 1 {
                    header_line = i + 1;
                }
            }
            continue;
        }
        if current == section && seen == occurrence + 1 {
            if let Some((k, _)) = t.split_once('=') {
                if k.trim() == key {
                    return (i + 1, line.find(key).unwrap_or(0) + 1);
                }
            }
        }
    }
    (header_line, 1)
}

fn matrix_from(values: &[f64], what: &str) -> std::result::Result<Matrix3<f64>, String> {
    match values.len() {
        1 => Ok(Matrix3::identity() * values[0]),
        3 => Ok(Matrix3::from_diagonal(&Vector3::new(values[0], values[1], values[2]))),
        9 => Ok(Matrix3::from_row_slice(values)),
        n => Err(format!("{what} needs 1, 3 or 9 values (got {n})")),
    }
}

fn hyperfine_from(values: &[f64]) -> std::result::Result<Matrix3<f64>, String> {
    match values.len() {
        4 => Ok(NucleusSpec::tensor_from_xx_yy_zz_xy(values[0], values[1], values[2], values[3])),
        9 => Ok(Matrix3::from_row_slice(values)),
        n => Err(format!("A needs 4 values (xx, yy, zz, xy) or 9 row-major values (got {n})")),
    }
}

fn build(raw: RawFile, text: &str, source: &str) -> Result<SpinFile> {
    let at = |section: &str, occ: usize, key: &str, msg: String| {
        let (line, col) = locate(text, section, occ, key);
        Error::parse(source, line, col, msg)
    };
    let sys = &raw.system;
    let two_s = 2.0 * sys.s;
    if !(two_s >= 1.0 && (two_s - two_s.round()).abs() < 1e-9) {
        return Err(at("system", 0, "S", format!("S must be a positive multiple of 1/2 (got {})", sys.s)));
    }
    let two_s = two_s.round() as u32;
    let g_values = match &sys.g {
        Numbers::Scalar(v) => vec![*v],
        Numbers::List(v) => v.clone(),
    };
    let g = matrix_from(&g_values, "g").map_err(|m| at("system", 0, "g", m))?;
    let zfs = match (sys.d, sys.e, &sys.d_tensor) {
        (Some(d), e, None) => {
            let e = e.unwrap_or(0.0);
            if e.abs() > d.abs() / 3.0 + 1e-12 {
                return Err(at("system", 0, "E_MHz", format!("|E| = {} exceeds |D|/3 = {}", e.abs(), d.abs() / 3.0)));
            }
            zfs_tensor(d, e)
        }
        (None, None, Some(t)) => {
            if t.len() != 9 {
                return Err(at("system", 0, "D_tensor_MHz", format!("D_tensor_MHz needs 9 values (got {})", t.len())));
            }
            Matrix3::from_row_slice(t)
        }
        (None, None, None) => return Err(at("system", 0, "D_MHz", "missing D_MHz (or D_tensor_MHz)".into())),
        _ => {
            return Err(at(
                "system",
                0,
                "D_tensor_MHz",
                "give either D_MHz/E_MHz or D_tensor_MHz, not both".into(),
            ))
        }
    };
    let mut system = SpinSystem::with_tensor(two_s, g, zfs).map_err(|e| at("system", 0, "D_tensor_MHz", e.to_string()))?;
    if let Some(h) = &sys.h_strain {
        let h = match h {
            Numbers::Scalar(v) => [*v; 3],
            Numbers::List(v) if v.len() == 3 => [v[0], v[1], v[2]],
            Numbers::List(v) => {
                return Err(at("system", 0, "HStrain_MHz", format!("HStrain_MHz needs 1 or 3 values (got {})", v.len())))
            }
        };
        system = system.with_h_strain(h).map_err(|e| at("system", 0, "HStrain_MHz", e.to_string()))?;
    }

    let mut nuclei = Vec::with_capacity(raw.nucleus.len());
    for (k, n) in raw.nucleus.iter().enumerate() {
        let a = hyperfine_from(&n.a).map_err(|m| at("nucleus", k, "A", m))?;
        let (two_i, g_n) = match (n.spin, n.g_n, isotope_data(&n.isotope)) {
            (Some(i), Some(g), _) => {
                let t = 2.0 * i;
                if !(t >= 1.0 && (t - t.round()).abs() < 1e-9) {
                    return Err(at("nucleus", k, "I", format!("I must be a positive multiple of 1/2 (got {i})")));
                }
                (t.round() as u32, g)
            }
            (None, None, Some(d)) => d,
            (None, None, None) => {
                return Err(at(
                    "nucleus",
                    k,
                    "isotope",
                    format!("unknown isotope `{}`; give I and g_n explicitly", n.isotope),
                ))
            }
            _ => return Err(at("nucleus", k, "I", "I and g_n must be given together".into())),
        };
        let spec = NucleusSpec::new(n.isotope.clone(), two_i, g_n, a, n.core).map_err(|e| at("nucleus", k, "A", e.to_string()))?;
        nuclei.push(spec);
    }
    system = system.with_nuclei(nuclei);

    let sweep = match &raw.sweep {
        None => None,
        Some(s) => {
            let spec = SweepSpec {
                b_mt: Vector3::from(s.b),
                range_ghz: (s.range[0], s.range[1]),
                n_points: s.points,
                temperature_k: s.temperature,
                euler_deg: s.euler_deg.unwrap_or([0.0; 3]),
            };
            spec.validate().map_err(|e| at("sweep", 0, "range_GHz", e.to_string()))?;
            Some(spec)
        }
    };
    Ok(SpinFile { system, sweep })
}

pub fn parse_spin_system(path: &Path, overrides: &[(String, String)]) -> Result<SpinFile> {
    parse_spin_system_str(&read_text(path)?, &source_name(path), overrides)
}

/// Parses a spin-system file after applying `section.key = value`
/// overrides, where each value is a TOML literal.
pub fn parse_spin_system_str(text: &str, source: &str, overrides: &[(String, String)]) -> Result<SpinFile> {
    let syntax = |e: toml::de::Error| {
        let (line, col) = e.span().map(|s| position(text, s.start)).unwrap_or((1, 1));
        Error::parse(source, line, col, e.message().to_string())
    };
    let raw: RawFile = if overrides.is_empty() {
        toml::from_str(text).map_err(syntax)?
    } else {
        let mut table: toml::Table = toml::from_str(text).map_err(syntax)?;
        for (key, value) in overrides {
            apply_override(&mut table, key, value)?;
        }
        table
            .try_into()
            .map_err(|e: toml::de::Error| Error::parse(source, 1, 1, format!("after overrides: {}", e.message())))?
    };
    build(raw, text, source)
}

fn apply_override(table: &mut toml::Table, key: &str, value: &str) -> Result<()> {
    let bad = |m: String| Error::invalid(format!("override `{key}={value}`: {m}"));
    let parsed: toml::Table = toml::from_str(&format!("v = {value}")).map_err(|e| bad(e.message().to_string()))?;
    let v = parsed["v"].clone();
    let parts: Vec<&str> = key.split('.').collect();
    let (last, path) = parts.split_last().ok_or_else(|| bad("empty key".into()))?;
    let mut cur = table;
    for p in path {
        cur = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| bad(format!("`{p}` is not a table")))?;
    }
    cur.insert(last.to_string(), v);
    Ok(())
}

fn scalar_g(g: &Matrix3<f64>) -> Numbers {
    if *g == Matrix3::identity() * g[(0, 0)] {
        Numbers::Scalar(g[(0, 0)])
    } else if *g == Matrix3::from_diagonal(&g.diagonal()) {
        Numbers::List(g.diagonal().iter().copied().collect())
    } else {
        Numbers::List(g.transpose().iter().copied().collect())
    }
}

/// Writes a file that parses back to the identical system and sweep.
pub fn serialize_spin_system(system: &SpinSystem, sweep: Option<&SweepSpec>) -> Result<String> {
    let z = &system.zfs;
    let d = 1.5 * z[(2, 2)];
    let e = 0.5 * (z[(0, 0)] - z[(1, 1)]);
    let (d, e, d_tensor) = if zfs_tensor(d, e) == *z {
        (Some(d), Some(e), None)
    } else {
        (None, None, Some(z.transpose().iter().copied().collect()))
    };
    let h = system.h_strain;
    let raw = RawFile {
        system: SystemSection {
            s: system.two_s as f64 / 2.0,
            g: scalar_g(&system.g),
            d,
            e,
            d_tensor,
            h_strain: Some(if h[0] == h[1] && h[1] == h[2] {
                Numbers::Scalar(h[0])
            } else {
                Numbers::List(h.to_vec())
            }),
        },
        nucleus: system
            .nuclei
            .iter()
            .map(|n| {
                let a = &n.a;
                let four = a[(0, 2)] == 0.0 && a[(1, 2)] == 0.0;
                let builtin = isotope_data(&n.isotope) == Some((n.two_i, n.g_n));
                NucleusSection {
                    isotope: n.isotope.clone(),
                    core: n.core,
                    a: if four {
                        vec![a[(0, 0)], a[(1, 1)], a[(2, 2)], a[(0, 1)]]
                    } else {
                        a.transpose().iter().copied().collect()
                    },
                    spin: (!builtin).then(|| n.two_i as f64 / 2.0),
                    g_n: (!builtin).then_some(n.g_n),
                }
            })
            .collect(),
        sweep: sweep.map(|s| SweepSection {
            b: [s.b_mt.x, s.b_mt.y, s.b_mt.z],
            range: [s.range_ghz.0, s.range_ghz.1],
            points: s.n_points,
            temperature: s.temperature_k,
            euler_deg: (s.euler_deg != [0.0; 3]).then_some(s.euler_deg),
        }),
    };
    toml::to_string(&raw).map_err(|e| Error::invalid(format!("cannot serialize spin system: {e}")))
}
