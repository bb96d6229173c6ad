use std::fmt::Write as _;

use crate::params::Params;

#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // shortest representation that parses back to the same double
            Cell::Float(x) => format!("{x:?}"),
            Cell::Int(x) => x.to_string(),
            Cell::Text(x) => x.clone(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Everything one run produces; rendered as CSV (with a commented header) or JSON.
pub struct Report {
    pub command: &'static str,
    pub params: Params,
    /// Scalar results echoed as header lines in CSV.
    pub summary: Vec<(&'static str, String)>,
    pub table: Table,
    pub json: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.to_json(),
        }
    }

    fn csv(&self) -> Result<String, String> {
        let mut head = String::new();
        writeln!(head, "# ucshock {}", self.command).unwrap();
        for (k, v) in &self.params.0 {
            writeln!(head, "# {k} = {v}").unwrap();
        }
        for (k, v) in &self.summary {
            writeln!(head, "# {k}: {v}").unwrap();
        }
        let mut w = csv::Writer::from_writer(head.into_bytes());
        let io = |e: csv::Error| e.to_string();
        w.write_record(self.columns_owned()).map_err(io)?;
        for row in &self.table.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())
    }

    fn columns_owned(&self) -> Vec<String> {
        self.table.columns.iter().map(|c| c.to_string()).collect()
    }

    fn to_json(&self) -> Result<String, String> {
        let params: serde_json::Map<String, serde_json::Value> = self
            .params
            .0
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let doc = serde_json::json!({
            "command": self.command,
            "parameters": params,
            "result": self.json,
        });
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
        s.push('\n');
        Ok(s)
    }
}
