//! Report envelopes and their serialization.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn combine(statuses: impl IntoIterator<Item = Status>) -> Status {
        let mut out = Status::Pass;
        for s in statuses {
            match s {
                Status::Fail => return Status::Fail,
                Status::Inconclusive => out = Status::Inconclusive,
                Status::Pass => {}
            }
        }
        out
    }
}

/// Rows for CSV output; every cell is already rendered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// A two-column `n,value` table.
    pub fn sequence(offset: usize, values: &[i64], value_name: &str) -> Self {
        let mut t = Table::new(&["n", value_name]);
        for (i, v) in values.iter().enumerate() {
            t.push(vec![(offset + i).to_string(), v.to_string()]);
        }
        t
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportEnvelope {
    pub claim_id: String,
    pub tool_version: String,
    pub parameters: BTreeMap<String, Value>,
    pub status: Status,
    pub evidence: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip)]
    pub table: Option<Table>,
    #[serde(skip)]
    pub text: Option<String>,
}

impl ReportEnvelope {
    pub fn new(claim_id: impl Into<String>, status: Status, evidence: Value) -> Self {
        Self {
            claim_id: claim_id.into(),
            tool_version: TOOL_VERSION.to_string(),
            parameters: BTreeMap::new(),
            status,
            evidence,
            elapsed_ms: None,
            table: None,
            text: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameters serialize"),
        );
        self
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EmitError {
    #[error("CSV output needs a tabular payload, and {0} has none")]
    NotTabular(String),
    #[error("text output is not available for {0}; use json")]
    NoText(String),
}

pub fn emit(report: &ReportEnvelope, format: Format) -> Result<String, EmitError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let table = report
                .table
                .as_ref()
                .ok_or_else(|| EmitError::NotTabular(report.claim_id.clone()))?;
            let mut s = table.header.join(",");
            s.push('\n');
            for row in &table.rows {
                s.push_str(&row.join(","));
                s.push('\n');
            }
            Ok(s)
        }
        Format::Text => {
            let text = report
                .text
                .as_ref()
                .ok_or_else(|| EmitError::NoText(report.claim_id.clone()))?;
            Ok(format!("{text}\n"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_has_stable_field_order() {
        let r = ReportEnvelope::new("x", Status::Pass, json!({"b": 1, "a": 2}))
            .param("z", 1)
            .param("k", "v");
        let s = emit(&r, Format::Json).unwrap();
        assert!(s.contains("\"status\": \"pass\""));
        let pos = |needle: &str| s.find(needle).unwrap();
        assert!(pos("claim_id") < pos("tool_version"));
        assert!(pos("\"k\"") < pos("\"z\""));
        assert!(pos("\"a\"") < pos("\"b\""));
        assert!(!s.contains("elapsed_ms"));
    }

    #[test]
    fn csv_needs_a_table() {
        let r = ReportEnvelope::new("x", Status::Pass, json!(null));
        assert_eq!(
            emit(&r, Format::Csv),
            Err(EmitError::NotTabular("x".into()))
        );
        let r = r.with_table(Table::sequence(1, &[2, 4], "value"));
        assert_eq!(emit(&r, Format::Csv).unwrap(), "n,value\n1,2\n2,4\n");
    }

    #[test]
    fn statuses_combine() {
        use Status::*;
        assert_eq!(Status::combine([Pass, Inconclusive, Pass]), Inconclusive);
        assert_eq!(Status::combine([Inconclusive, Fail]), Fail);
        assert_eq!(Status::combine([]), Pass);
        assert_eq!(
            (Pass.exit_code(), Fail.exit_code(), Inconclusive.exit_code()),
            (0, 1, 2)
        );
    }
}
