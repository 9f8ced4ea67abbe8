use crate::args::{Format, OutputArgs};
use crate::fail::Fail;
use serde::Serialize;
use std::fmt::Write as _;

/// Ordered `key = value` lines.
#[derive(Default)]
pub struct KvBlock {
    lines: Vec<(String, String)>,
}

impl KvBlock {
    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let width = self.lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(out, "{k:<width$} = {v}");
        }
        out
    }
}

/// Plain text table with right-aligned columns.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        cells
            .iter()
            .zip(&width)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

pub fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.digits$}"))
}

/// Prints `table` or the JSON of `value` on stdout, and writes the JSON file
/// if one was asked for.
pub fn emit<T: Serialize>(
    out: &OutputArgs,
    value: &T,
    table: impl FnOnce() -> String,
) -> Result<(), Fail> {
    let json = serde_json::to_string_pretty(value)? + "\n";
    match out.format {
        Format::Json => print!("{json}"),
        Format::Table => print!("{}", table()),
    }
    if let Some(path) = &out.json {
        std::fs::write(path, &json)
            .map_err(|e| Fail::from(e).context(format!("writing {}", path.display())))?;
    }
    Ok(())
}
