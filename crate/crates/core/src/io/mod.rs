//! File formats: phonon mode tables, hyperfine tables, spin-system files,
//! spectrum and stick CSV, orbital grids and SVG plots.
//!
//! Every parser reports failures as [`Error::Parse`] with a 1-based line and
//! character column. The grammar of each format is in `docs/formats.md`.

mod grid_file;
mod hyperfine;
mod modes;
mod spectrum_csv;
mod spin_file;
mod svg;
mod table;

use std::path::Path;

pub use grid_file::{
    orbital_from_binary, orbital_from_text, orbital_to_binary, orbital_to_text, read_orbital, write_orbital,
    GridFormat, BINARY_MAGIC,
};
pub use hyperfine::{parse_hyperfine_rows, parse_hyperfine_table, serialize_hyperfine_rows, HyperfineRow};
pub use modes::{parse_mode_table, parse_mode_table_str, serialize_mode_table};
pub use spectrum_csv::{emit_spectrum_csv, format_value, parse_spectrum_csv, read_spectrum_csv, spectrum_to_csv, sticks_to_csv};
pub use spin_file::{parse_spin_system, parse_spin_system_str, serialize_spin_system, SpinFile};
pub use svg::{emit_svg, Series, SvgPlot};

use crate::error::{Error, Result};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn source_name(path: &Path) -> String {
    path.display().to_string()
}
