//! Comma-separated tables with `#` metadata, flat summaries and the
//! eigenvalue strip image.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

/// A table with `name [unit]` column headers.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<(&'static str, &'static str)>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[(&'static str, &'static str)]) -> Self {
        Self { metadata: Vec::new(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let header: Vec<String> = self.columns.iter().map(|(n, u)| format!("{n} [{u}]")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// Fixed-width scientific format used for every float in reports.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.12e}")
    } else {
        format!("{x}")
    }
}

/// Flat `key = value` summary.
pub fn render_summary(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// One row per channel, one tick per eigenvalue, energies mapped linearly
/// across `window`.
pub fn eigenvalue_strip(channels: &[(String, Vec<f64>)], window: (f64, f64)) -> String {
    let (left, width, row_h, label_w) = (10.0, 600.0, 14.0, 90.0);
    let height = row_h * channels.len() as f64 + 30.0;
    let total_w = label_w + width + 2.0 * left;
    let x_of = |e: f64| label_w + left + (e - window.0) / (window.1 - window.0) * width;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{height}" viewBox="0 0 {total_w} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, (label, values)) in channels.iter().enumerate() {
        let y = 10.0 + row_h * i as f64;
        let _ = writeln!(s, r#"<text x="4" y="{:.1}" font-size="10" font-family="monospace">{label}</text>"#, y + 10.0);
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.1}" x2="{:.2}" y2="{:.1}" stroke="#ccc"/>"##,
            x_of(window.0),
            y + row_h / 2.0,
            x_of(window.1),
            y + row_h / 2.0
        );
        for &e in values {
            let x = x_of(e);
            let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{:.1}" x2="{x:.2}" y2="{:.1}" stroke="black"/>"#, y + 1.0, y + row_h - 1.0);
        }
    }
    let base = 14.0 + row_h * channels.len() as f64;
    for (e, anchor) in [(window.0, "start"), (window.1, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.1}" font-size="10" font-family="monospace" text-anchor="{anchor}">{e}</text>"#,
            x_of(e),
            base + 10.0
        );
    }
    s.push_str("</svg>\n");
    s
}
