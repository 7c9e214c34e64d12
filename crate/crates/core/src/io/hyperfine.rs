//! Hyperfine tables with header `site,A_xx,A_yy,A_zz,A_xy` (MHz).

use std::fmt::Write;
use std::path::Path;

use super::table::Table;
use super::{read_text, source_name};
use crate::error::Result;
use crate::spin::NucleusSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct HyperfineRow {
    pub site: String,
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
    pub xy: f64,
}

impl HyperfineRow {
    /// Nucleus with A_xz = A_yz = 0.
    pub fn to_nucleus(&self, isotope: &str, core: bool) -> Result<NucleusSpec> {
        NucleusSpec::from_isotope(
            isotope,
            NucleusSpec::tensor_from_xx_yy_zz_xy(self.xx, self.yy, self.zz, self.xy),
            core,
        )
    }
}

pub fn parse_hyperfine_rows(text: &str, source: &str) -> Result<Vec<HyperfineRow>> {
    let t = Table::parse(text, source)?;
    let site = t.require("site")?;
    let cols = [t.require("A_xx")?, t.require("A_yy")?, t.require("A_zz")?, t.require("A_xy")?];
    let mut out = Vec::with_capacity(t.rows.len());
    for row in &t.rows {
        let v: Vec<f64> = cols.iter().map(|&c| t.f64(row, c)).collect::<Result<_>>()?;
        out.push(HyperfineRow {
            site: row.fields[site].clone(),
            xx: v[0],
            yy: v[1],
            zz: v[2],
            xy: v[3],
        });
    }
    Ok(out)
}

/// All rows of a table as nuclei of one isotope.
pub fn parse_hyperfine_table(path: &Path, isotope: &str, core: bool) -> Result<Vec<NucleusSpec>> {
    let rows = parse_hyperfine_rows(&read_text(path)?, &source_name(path))?;
    rows.iter().map(|r| r.to_nucleus(isotope, core)).collect()
}

pub fn serialize_hyperfine_rows(rows: &[HyperfineRow]) -> String {
    let mut out = String::from("site,A_xx,A_yy,A_zz,A_xy\n");
    for r in rows {
        let _ = writeln!(out, "{},{:?},{:?},{:?},{:?}", r.site, r.xx, r.yy, r.zz, r.xy);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_published_row() {
        let rows = parse_hyperfine_rows("site,A_xx,A_yy,A_zz,A_xy\nN1,80.566,57.865,48.304,19.670\n", "h.csv").unwrap();
        let n = rows[0].to_nucleus("14N", true).unwrap();
        assert_eq!(n.a[(0, 1)], 19.670);
        assert_eq!(n.a[(1, 0)], 19.670);
        assert_eq!(n.a[(0, 2)], 0.0);
        assert_eq!(n.a[(2, 2)], 48.304);
        assert_eq!(parse_hyperfine_rows(&serialize_hyperfine_rows(&rows), "x").unwrap(), rows);
    }
}
