//! Long-format result tables: CSV with a `#` metadata block, or JSON with the
//! same content.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(_) => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
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

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

/// 17 significant digits; enough to reproduce every f64 exactly.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { metadata: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn meta_f64(&mut self, key: &str, value: f64) {
        self.meta(key, format_float(value));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn get_meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells"));
        out
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.metadata {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({ "metadata": meta, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    /// Parses the output of [`Table::to_csv`]. Integers, floats and text are
    /// told apart by their spelling.
    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut metadata = Vec::new();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("# ") {
                let (k, v) = rest.split_once(": ").ok_or_else(|| format!("bad metadata line: {line}"))?;
                metadata.push((k.to_string(), v.to_string()));
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let columns = r.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| e.to_string())?;
            rows.push(rec.iter().map(infer_cell).collect());
        }
        Ok(Table { metadata, columns, rows })
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let metadata = doc["metadata"]
            .as_object()
            .ok_or("missing metadata")?
            .iter()
            .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
            .collect();
        let columns = doc["columns"]
            .as_array()
            .ok_or("missing columns")?
            .iter()
            .map(|c| c.as_str().unwrap_or_default().to_string())
            .collect();
        let rows = doc["rows"]
            .as_array()
            .ok_or("missing rows")?
            .iter()
            .map(|r| {
                r.as_array()
                    .map(|cells| {
                        cells
                            .iter()
                            .map(|c| match c {
                                Value::Null => Cell::Float(f64::NAN),
                                Value::Number(n) if n.is_i64() => Cell::Int(n.as_i64().unwrap_or_default()),
                                Value::Number(n) => Cell::Float(n.as_f64().unwrap_or(f64::NAN)),
                                Value::String(s) => Cell::Text(s.clone()),
                                other => Cell::Text(other.to_string()),
                            })
                            .collect()
                    })
                    .ok_or_else(|| "row is not an array".to_string())
            })
            .collect::<Result<_, _>>()?;
        Ok(Table { metadata, columns, rows })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }

    pub fn f64_column(&self, name: &str) -> Result<Vec<f64>, String> {
        let i = self.column_index(name).ok_or_else(|| format!("no column '{name}'"))?;
        self.rows.iter().map(|r| cell_f64(&r[i])).collect()
    }

    pub fn int_column(&self, name: &str) -> Result<Vec<i64>, String> {
        let i = self.column_index(name).ok_or_else(|| format!("no column '{name}'"))?;
        self.rows.iter().map(|r| cell_int(&r[i])).collect()
    }

    pub fn text_column(&self, name: &str) -> Result<Vec<String>, String> {
        let i = self.column_index(name).ok_or_else(|| format!("no column '{name}'"))?;
        Ok(self.rows.iter().map(|r| match &r[i] {
            Cell::Text(s) => s.clone(),
            other => other.csv(),
        }).collect())
    }

    pub fn meta_number(&self, key: &str) -> Result<f64, String> {
        let v = self.get_meta(key).ok_or_else(|| format!("no metadata '{key}'"))?;
        parse_f64(v)
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    match s {
        "nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse().map_err(|_| format!("not a number: '{s}'")),
    }
}

fn infer_cell(s: &str) -> Cell {
    if let Ok(i) = s.parse::<i64>() {
        Cell::Int(i)
    } else if let Ok(x) = parse_f64(s) {
        Cell::Float(x)
    } else {
        Cell::Text(s.to_string())
    }
}

fn cell_f64(c: &Cell) -> Result<f64, String> {
    match c {
        Cell::Float(x) => Ok(*x),
        Cell::Int(i) => Ok(*i as f64),
        Cell::Text(s) => parse_f64(s),
    }
}

fn cell_int(c: &Cell) -> Result<i64, String> {
    match c {
        Cell::Int(i) => Ok(*i),
        Cell::Float(x) if x.fract() == 0.0 => Ok(*x as i64),
        Cell::Text(s) => s.parse().map_err(|_| format!("not an integer: '{s}'")),
        other => Err(format!("not an integer: {other:?}")),
    }
}

/// Writes through a temporary file in the same directory and renames, so a
/// failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}
