//! Phonon mode tables.
//!
//! Header `index,energy_meV` followed by exactly one of `hr_factor`,
//! `q_amu_half_angstrom`, `alpha` or `force_meV`; `symmetry` is optional.

use std::collections::HashMap;
use std::fmt::Write;
use std::path::Path;

use super::table::Table;
use super::{read_text, source_name};
use crate::error::{Error, Result};
use crate::lineshape::{hr_from_displacement, Displacement, PhononMode, Symmetry};

const DISPLACEMENT_COLUMNS: [&str; 4] = ["hr_factor", "q_amu_half_angstrom", "alpha", "force_meV"];

pub fn parse_mode_table(path: &Path) -> Result<Vec<PhononMode>> {
    parse_mode_table_str(&read_text(path)?, &source_name(path))
}

pub fn parse_mode_table_str(text: &str, source: &str) -> Result<Vec<PhononMode>> {
    let t = Table::parse(text, source)?;
    let idx = t.require("index")?;
    let energy = t.require("energy_meV")?;
    let present: Vec<(usize, &str)> = DISPLACEMENT_COLUMNS
        .iter()
        .filter_map(|name| t.column(name).map(|c| (c, *name)))
        .collect();
    let (coupling, kind) = match present.as_slice() {
        [one] => *one,
        [] => {
            return Err(Error::parse(
                source,
                t.header_line,
                1,
                "header needs one of hr_factor, q_amu_half_angstrom, alpha, force_meV",
            ))
        }
        _ => {
            return Err(Error::parse(
                source,
                t.header_line,
                1,
                "header lists more than one displacement representation",
            ))
        }
    };
    let symmetry = t.column("symmetry");
    if let Some(unknown) = t
        .headers
        .iter()
        .find(|h| !["index", "energy_meV", "symmetry"].contains(&h.as_str()) && !DISPLACEMENT_COLUMNS.contains(&h.as_str()))
    {
        return Err(Error::parse(source, t.header_line, 1, format!("unknown column `{unknown}`")));
    }

    let mut modes = Vec::with_capacity(t.rows.len());
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for row in &t.rows {
        let index = t.usize(row, idx)?;
        if let Some(first) = seen.insert(index, row.line) {
            return Err(t.error(row, idx, format!("duplicate mode index {index} (first defined on line {first})")));
        }
        let e = t.f64(row, energy)?;
        if e <= 0.0 {
            return Err(t.error(row, energy, format!("mode energy must be positive (got {e} meV)")));
        }
        let value = t.f64(row, coupling)?;
        let s = match kind {
            "hr_factor" => value,
            "q_amu_half_angstrom" => hr_from_displacement(e, Displacement::MassWeighted(value))?,
            "alpha" => hr_from_displacement(e, Displacement::Dimensionless(value))?,
            _ => hr_from_displacement(e, Displacement::Force(value))?,
        };
        let sym = match symmetry {
            Some(c) => row.fields[c]
                .parse::<Symmetry>()
                .map_err(|err| t.error(row, c, err.to_string()))?,
            None => Symmetry::Unknown,
        };
        let mode = PhononMode::new(index, e, s, sym).map_err(|err| t.error(row, coupling, err.to_string()))?;
        modes.push(mode);
    }
    if modes.is_empty() {
        return Err(Error::parse(source, t.header_line, 1, "mode table has no rows"));
    }
    Ok(modes)
}

/// Canonical `index,energy_meV,hr_factor,symmetry` form with shortest
/// round-trip decimals.
pub fn serialize_mode_table(modes: &[PhononMode]) -> String {
    let mut out = String::from("index,energy_meV,hr_factor,symmetry\n");
    for m in modes {
        let _ = writeln!(out, "{},{:?},{:?},{}", m.index, m.energy_mev, m.hr_factor, m.symmetry);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Vec<PhononMode>> {
        parse_mode_table_str(text, "t.csv")
    }

    #[test]
    fn both_headers() {
        let a = parse("index,energy_meV,hr_factor,symmetry\n0,20,1.5,E\n1,60,0.5,A1\n").unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a[1].symmetry, Symmetry::A1);
        let b = parse("# comment\nindex,energy_meV,q_amu_half_angstrom\n0,20,0.3\n").unwrap();
        assert!(b[0].hr_factor > 0.0);
        assert_eq!(b[0].symmetry, Symmetry::Unknown);
    }

    #[test]
    fn diagnostics() {
        match parse("index,energy_meV,hr_factor\n0,20,1\n1,3x,1\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
        match parse("index,energy_meV,hr_factor\n4,20,1\n4,30,1\n") {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("duplicate mode index 4"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("index,energy_meV,hr_factor\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse("index,energy_meV,hr_factor\n0,-5,1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse("index,energy_meV\n0,5\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn round_trip() {
        let a = parse("index,energy_meV,hr_factor,symmetry\n0,20.1,1.25,E\n7,61.3,0.1,A1\n").unwrap();
        let b = parse(&serialize_mode_table(&a)).unwrap();
        assert_eq!(a, b);
    }
}
