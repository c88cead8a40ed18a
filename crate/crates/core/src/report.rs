//! Structured verification reports.
//!
//! A report is a single self-describing JSON document. Items are emitted in a
//! fixed order and numeric fields are stored in ordered maps so that identical
//! runs produce byte-identical output. Wall-clock time is only recorded when
//! explicitly requested.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

pub const SCHEMA: &str = "wick-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Pass/fail decided by `pass`, downgraded to inconclusive when the
    /// evidence is not sharp enough.
    pub fn gated(pass: bool, conclusive: bool) -> Self {
        if !conclusive {
            Verdict::Inconclusive
        } else {
            Self::from_pass(pass)
        }
    }

    /// The worse of two verdicts (fail > inconclusive > pass).
    pub fn and(self, other: Self) -> Self {
        self.max(other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Item {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub dims: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub flags: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Item {
    pub fn new(name: impl Into<String>, verdict: Verdict) -> Self {
        Self {
            name: name.into(),
            verdict,
            metrics: BTreeMap::new(),
            dims: BTreeMap::new(),
            flags: BTreeMap::new(),
            note: None,
        }
    }

    pub fn metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }

    pub fn dim(mut self, key: &str, value: usize) -> Self {
        self.dims.insert(key.to_string(), value);
        self
    }

    pub fn flag(mut self, key: &str, value: bool) -> Self {
        self.flags.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Item for a residual compared against a tolerance.
    pub fn residual(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self::new(name, Verdict::from_pass(residual <= tolerance))
            .metric("residual", residual)
            .metric("tolerance", tolerance)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: serde_json::Value,
    pub items: Vec<Item>,
    pub summary: Summary,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Report {
    pub fn new(command: serde_json::Value) -> Self {
        Self {
            schema: SCHEMA,
            tool_version: TOOL_VERSION,
            command,
            items: Vec::new(),
            summary: Summary::default(),
            verdict: Verdict::Pass,
            elapsed_ms: None,
        }
    }

    pub fn push(&mut self, item: Item) {
        match item.verdict {
            Verdict::Pass => self.summary.pass += 1,
            Verdict::Fail => self.summary.fail += 1,
            Verdict::Inconclusive => self.summary.inconclusive += 1,
        }
        self.verdict = self.verdict.and(item.verdict);
        self.items.push(item);
    }

    pub fn extend(&mut self, items: impl IntoIterator<Item = Item>) {
        for item in items {
            self.push(item);
        }
    }

    /// 0 all pass, 1 any fail, 3 inconclusive without failures.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let width = self.items.iter().map(|i| i.name.len()).max().unwrap_or(4);
        for item in &self.items {
            let _ = write!(out, "{:<width$}  {:<12}", item.name, item.verdict.as_str());
            for (k, v) in &item.dims {
                let _ = write!(out, " {k}={v}");
            }
            for (k, v) in &item.flags {
                let _ = write!(out, " {k}={v}");
            }
            for (k, v) in &item.metrics {
                let _ = write!(out, " {k}={v:.3e}");
            }
            if let Some(note) = &item.note {
                let _ = write!(out, "  # {note}");
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "-- {} pass, {} fail, {} inconclusive: {}",
            self.summary.pass,
            self.summary.fail,
            self.summary.inconclusive,
            self.verdict.as_str()
        );
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "-- elapsed {ms:.1} ms");
        }
        out
    }
}
