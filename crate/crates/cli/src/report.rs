//! Check reports and their renderings.

use serde::Serialize;
use wforms_tensor::{to_latex, to_text, Status};

use crate::config::Format;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckReport {
    pub check: String,
    /// `zero`, `relation-span` or `residue`.
    pub status: String,
    pub certificate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub latex: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn from_status(check: &str, status: &Status) -> Self {
        let (certificate, latex) = match status {
            Status::Zero => ("0".to_string(), None),
            Status::RelationSpan(combo) => (
                combo
                    .iter()
                    .map(|(l, r)| format!("({l}) * [{}]", to_text(r)))
                    .collect::<Vec<_>>()
                    .join(" + "),
                None,
            ),
            Status::Residue(r) => (to_text(r), Some(to_latex(r))),
        };
        CheckReport {
            check: check.into(),
            status: status.label().into(),
            certificate,
            latex,
            notes: Vec::new(),
        }
    }

    /// A non-expression check: `zero` when it holds, otherwise `residue`
    /// with `detail` as the certificate.
    pub fn boolean(check: &str, holds: bool, detail: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            status: if holds { "zero" } else { "residue" }.into(),
            certificate: detail.into(),
            latex: None,
            notes: Vec::new(),
        }
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.status != "residue"
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(CheckReport::holds)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Text => {
                let mut s = format!("suite {}\n", self.suite);
                for c in &self.checks {
                    s += &format!("  [{}] {}\n      {}\n", c.status, c.check, c.certificate);
                    for n in &c.notes {
                        s += &format!("      note: {n}\n");
                    }
                }
                s
            }
            Format::Latex => {
                let mut s = format!("\\section*{{{}}}\n\\begin{{itemize}}\n", self.suite);
                for c in &self.checks {
                    s += &format!("\\item \\texttt{{{}}}: {}", c.check, c.status);
                    if let Some(l) = &c.latex {
                        s += &format!("\n\\[ {l} \\]");
                    }
                    s += "\n";
                }
                s + "\\end{itemize}\n"
            }
        }
    }
}
