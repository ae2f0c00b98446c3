//! Plain `key=value` reports.

use gmlogic::controls::Certificate;
use gmlogic::semantics::FragmentReport;
use gmlogic::theories::{classify, Classification, Theory};
use std::fmt::Write as _;
use std::time::Duration;

/// Ordered `key=value` lines; `elapsed_ms` is appended by [`Report::render`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn lines(&self) -> &[(String, String)] {
        &self.lines
    }

    /// First value recorded under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Every value recorded under `key`, in order.
    pub fn all(&self, key: &str) -> Vec<&str> {
        self.lines.iter().filter(|(k, _)| k == key).map(|(_, v)| v.as_str()).collect()
    }

    /// The deterministic part of the report.
    pub fn body(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    pub fn render(&self, elapsed: Duration) -> String {
        format!("{}elapsed_ms={}\n", self.body(), elapsed.as_millis())
    }

    /// Appends the fragment block: size, matching theories and separators.
    pub fn push_fragment(&mut self, report: &FragmentReport) -> Classification {
        let class = classify(report);
        self.push("fragment_size", format!("{}/{}", report.size(), report.formulas.len()));
        self.push("matches", theory_list(class.matches.iter().copied()));
        for (t, s) in &class.separators {
            let side = if s.in_fragment { "fragment" } else { "theory" };
            self.push(format!("separator.{}", t.name()), &s.formula);
            self.push(format!("separator.{}.valid_in", t.name()), side);
        }
        class
    }

    /// Appends the controls block, or `none` for both keys.
    pub fn push_controls(&mut self, cert: Option<&Certificate>) {
        match cert {
            Some(c) => {
                self.push("controls.buttons", formula_list(&c.family.buttons));
                self.push("controls.switches", formula_list(&c.family.switches));
            }
            None => {
                self.push("controls.buttons", "none");
                self.push("controls.switches", "none");
            }
        }
    }
}

/// Comma-separated theory names, or `none`.
pub fn theory_list(ts: impl IntoIterator<Item = Theory>) -> String {
    let names: Vec<&str> = ts.into_iter().map(Theory::name).collect();
    if names.is_empty() {
        "none".into()
    } else {
        names.join(",")
    }
}

/// Semicolon-separated formulas; an empty list prints as `-`.
pub fn formula_list(fs: &[gmlogic::Formula]) -> String {
    if fs.is_empty() {
        "-".into()
    } else {
        fs.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")
    }
}
