use std::io::Write;

use num_complex::Complex;
use serde_json::Value;
use tsallis::scalar::render_complex;
use tsallis::series::CMatrix;
use tsallis::{MatrixSeries, Real, TruncatedSeries};

use crate::config::{CliError, OutputFormat, RunConfig};

/// A command result in both output forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub json: Value,
    pub table: Table,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        // Writing into a Vec cannot fail.
        w.write_record(&self.headers).unwrap();
        for row in &self.rows {
            w.write_record(row).unwrap();
        }
        w.into_inner().unwrap()
    }
}

pub fn render_json(json: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(json).expect("JSON values always serialize");
    bytes.push(b'\n');
    bytes
}

pub fn emit(cfg: &RunConfig, doc: &Document) -> Result<(), CliError> {
    let bytes = match cfg.output {
        OutputFormat::Json => render_json(&doc.json),
        OutputFormat::Csv => doc.table.to_csv(),
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

pub fn complex_cell<R: Real>(z: &Complex<R>) -> String {
    render_complex(z)
}

pub fn series_table<R: Real>(f: &TruncatedSeries<R>) -> Table {
    let mut t = Table::new(&["k", "coeff"]);
    for (k, c) in f.coeffs().iter().enumerate() {
        t.push(vec![k.to_string(), complex_cell(c)]);
    }
    t
}

pub fn matrix_series_table<R: Real>(f: &MatrixSeries<R>) -> Table {
    let mut t = Table::new(&["k", "i", "j", "coeff"]);
    for (k, m) in f.coeffs().iter().enumerate() {
        push_matrix(&mut t, Some(k), m);
    }
    t
}

pub fn matrix_table<R: Real>(m: &CMatrix<R>) -> Table {
    let mut t = Table::new(&["i", "j", "entry"]);
    push_matrix(&mut t, None, m);
    t
}

fn push_matrix<R: Real>(t: &mut Table, k: Option<usize>, m: &CMatrix<R>) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let mut row: Vec<String> = k.iter().map(|k| k.to_string()).collect();
            row.extend([i.to_string(), j.to_string(), complex_cell(&m[(i, j)])]);
            t.push(row);
        }
    }
}
