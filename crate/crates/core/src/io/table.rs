//! Shared CSV reading with positions for diagnostics.

use crate::error::{Error, Result};

pub(crate) struct Row {
    pub line: usize,
    pub raw: String,
    pub fields: Vec<String>,
}

pub(crate) struct Table {
    pub source: String,
    pub header_line: usize,
    pub headers: Vec<String>,
    pub rows: Vec<Row>,
}

/// 1-based character column of field `idx` in an unquoted CSV line.
pub(crate) fn field_column(raw: &str, idx: usize) -> usize {
    let mut col = 1;
    for (i, part) in raw.split(',').enumerate() {
        if i == idx {
            let lead = part.chars().take_while(|c| c.is_whitespace()).count();
            return col + lead;
        }
        col += part.chars().count() + 1;
    }
    col
}

impl Table {
    pub fn parse(text: &str, source: &str) -> Result<Table> {
        let lines: Vec<&str> = text.lines().collect();
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header_err = |e: csv::Error| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(1);
            Error::parse(source, line, 1, format!("unreadable header: {e}"))
        };
        let headers: Vec<String> = reader.headers().map_err(header_err)?.iter().map(str::to_string).collect();
        let header_line = lines
            .iter()
            .position(|l| {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            })
            .map(|i| i + 1)
            .unwrap_or(1);
        if headers.iter().all(|h| h.is_empty()) {
            return Err(Error::parse(source, header_line, 1, "missing header row"));
        }
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                let column = match e.kind() {
                    csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                        let raw = lines.get(line.saturating_sub(1)).copied().unwrap_or("");
                        field_column(raw, (*expected_len).min(*len) as usize)
                    }
                    _ => 1,
                };
                let msg = match e.kind() {
                    csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                        format!("expected {expected_len} fields, found {len}")
                    }
                    _ => e.to_string(),
                };
                Error::parse(source, line, column, msg)
            })?;
            let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
            rows.push(Row {
                line,
                raw: lines.get(line.saturating_sub(1)).copied().unwrap_or("").to_string(),
                fields: rec.iter().map(str::to_string).collect(),
            });
        }
        Ok(Table {
            source: source.to_string(),
            header_line,
            headers,
            rows,
        })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.column(name).ok_or_else(|| {
            Error::parse(&self.source, self.header_line, 1, format!("missing column `{name}` in header"))
        })
    }

    pub fn error(&self, row: &Row, idx: usize, msg: impl Into<String>) -> Error {
        Error::parse(&self.source, row.line, field_column(&row.raw, idx), msg)
    }

    pub fn f64(&self, row: &Row, idx: usize) -> Result<f64> {
        let s = &row.fields[idx];
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(row, idx, format!("`{s}` is not a finite number ({})", self.headers[idx]))),
        }
    }

    pub fn usize(&self, row: &Row, idx: usize) -> Result<usize> {
        let s = &row.fields[idx];
        s.parse::<usize>()
            .map_err(|_| self.error(row, idx, format!("`{s}` is not a non-negative integer ({})", self.headers[idx])))
    }
}
