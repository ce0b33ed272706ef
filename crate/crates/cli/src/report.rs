//! One report value per run, rendered as a table, JSON or CSV from the same numbers.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub title: String,
    /// Scalar results, shown above the table.
    pub summary: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// Full structured result of the underlying computation (JSON only).
    pub detail: Value,
}

pub fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize to JSON")
}

impl Report {
    pub fn new(command: &str, title: impl Into<String>) -> Self {
        Report {
            command: command.to_string(),
            title: title.into(),
            summary: vec![],
            columns: vec![],
            rows: vec![],
            detail: Value::Null,
        }
    }

    pub fn field(mut self, key: &str, value: impl Serialize) -> Self {
        self.summary.push((key.to_string(), to_value(&value)));
        self
    }

    pub fn columns(mut self, names: &[&str]) -> Self {
        self.columns = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<Value>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn detail(mut self, detail: impl Serialize) -> Self {
        self.detail = to_value(&detail);
        self
    }

    pub fn to_json(&self) -> Value {
        let summary: Map<String, Value> = self.summary.iter().cloned().collect();
        let mut out = Map::new();
        out.insert("command".into(), Value::String(self.command.clone()));
        out.insert("title".into(), Value::String(self.title.clone()));
        out.insert("summary".into(), Value::Object(summary));
        out.insert("columns".into(), to_value(&self.columns));
        out.insert("rows".into(), Value::Array(self.rows.iter().map(|r| Value::Array(r.clone())).collect()));
        if !self.detail.is_null() {
            out.insert("detail".into(), self.detail.clone());
        }
        Value::Object(out)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values always print");
                s.push('\n');
                Ok(s)
            }
            Format::Table => Ok(self.table()),
            Format::Csv => self.csv(),
        }
    }

    fn table(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for (k, v) in &self.summary {
            out.push_str(&format!("{k}: {}\n", cell(v)));
        }
        if self.rows.is_empty() {
            return out;
        }
        let text: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| text.iter().map(|r| r[j].chars().count()).chain([self.columns[j].chars().count()]).max().unwrap())
            .collect();
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            format!("{}\n", padded.join("  ").trim_end())
        };
        out.push('\n');
        out.push_str(&line(&self.columns));
        out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
        for r in &text {
            out.push_str(&line(r));
        }
        out
    }

    /// The table as CSV; reports without table rows list their summary as `key,value` rows.
    fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(vec![]);
        let fail = |e: csv::Error| CliError::Computation { message: format!("csv output: {e}") };
        if self.rows.is_empty() {
            w.write_record(["key", "value"]).map_err(fail)?;
            for (k, v) in &self.summary {
                w.write_record([k.clone(), cell(v)]).map_err(fail)?;
            }
        } else {
            w.write_record(&self.columns).map_err(fail)?;
            for r in &self.rows {
                w.write_record(r.iter().map(cell)).map_err(fail)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Computation { message: format!("csv output: {e}") })?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Cell text: strings bare, missing values as `-`, everything else exactly as JSON prints it.
pub fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new("demo", "demo run").field("alpha", 2.5).columns(&["n", "value"]);
        r.row(vec![json!(1), json!(0.1)]);
        r.row(vec![json!(2), Value::Null]);
        r
    }

    #[test]
    fn table_is_aligned() {
        let t = sample().render(Format::Table).unwrap();
        assert_eq!(t, "demo run\nalpha: 2.5\n\nn  value\n-  -----\n1  0.1\n2  -\n");
    }

    #[test]
    fn csv_has_header_and_rows() {
        assert_eq!(sample().render(Format::Csv).unwrap(), "n,value\n1,0.1\n2,-\n");
    }

    #[test]
    fn json_keys_are_sorted() {
        let j = sample().render(Format::Json).unwrap();
        let (c, s) = (j.find("\"columns\"").unwrap(), j.find("\"summary\"").unwrap());
        assert!(c < s);
    }
}
