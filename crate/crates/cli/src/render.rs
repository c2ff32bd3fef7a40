use clap::ValueEnum;
use serde_json::Value;
use vbcm_core::cmmod::{catalog_csv, catalog_markdown, CMModuleDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

/// A command result. Descriptor lists keep their own table layout.
pub enum Output {
    Value(Value),
    Descriptors(Vec<CMModuleDescriptor>),
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Value(v), Format::Json) => json_line(v),
            (Output::Value(v), Format::Csv) => table(v).csv(),
            (Output::Value(v), Format::Markdown) => table(v).markdown(),
            (Output::Descriptors(d), Format::Json) => json_line(&Value::Array(d.iter().map(|x| x.to_json()).collect())),
            (Output::Descriptors(d), Format::Csv) => catalog_csv(d),
            (Output::Descriptors(d), Format::Markdown) => catalog_markdown(d),
        }
    }
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn table(v: &Value) -> Table {
    match v {
        Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
            let mut header: Vec<String> = Vec::new();
            for item in items {
                for k in item.as_object().unwrap().keys() {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            let rows = items.iter().map(|item| header.iter().map(|k| item.get(k).map(cell).unwrap_or_default()).collect()).collect();
            Table { header, rows }
        }
        Value::Array(items) => Table { header: vec!["value".into()], rows: items.iter().map(|x| vec![cell(x)]).collect() },
        Value::Object(map) => Table {
            header: vec!["key".into(), "value".into()],
            rows: map.iter().map(|(k, x)| vec![k.clone(), cell(x)]).collect(),
        },
        scalar => Table { header: vec!["value".into()], rows: vec![vec![cell(scalar)]] },
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Table {
    fn csv(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&row.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    fn markdown(&self) -> String {
        let line = |row: &[String]| format!("| {} |\n", row.iter().map(|c| c.replace('|', "\\|")).collect::<Vec<_>>().join(" | "));
        let mut out = line(&self.header);
        out.push_str(&format!("|{}\n", "---|".repeat(self.header.len())));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }
}
