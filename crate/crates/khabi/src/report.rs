//! Deterministic table rendering: CSV (17 significant digits), JSON
//! (one object with config, rows, residuals), and a padded human format.

use serde::Serialize;
use std::collections::BTreeMap;

/// 17 significant digits, enough to reproduce any f64 bit pattern.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Default)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let fmt_row = |cells: &[String], widths: &[usize]| {
            cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        out.push_str(&fmt_row(&self.headers, &widths));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&fmt_row(row, &widths));
            out.push('\n');
        }
        out
    }
}

/// The single JSON document every command emits.
pub fn json_document<C: Serialize, R: Serialize>(
    config: &C,
    rows: &R,
    residuals: &BTreeMap<String, f64>,
) -> String {
    let doc = serde_json::json!({
        "config": config,
        "rows": rows,
        "residuals": residuals,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json serialization cannot fail");
    s.push('\n');
    s
}
