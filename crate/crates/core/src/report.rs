//! Structured pass/fail reports: every checked statement becomes a clause
//! with a theorem anchor, a status, and a human-readable detail line.  Text
//! and JSON renderings carry identical content.

use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Informational line that does not affect the overall verdict.
    Note,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "PASS"),
            Status::Fail => write!(f, "FAIL"),
            Status::Note => write!(f, "NOTE"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Clause {
    /// Theorem anchor, e.g. "Thm 1.9".
    pub anchor: String,
    pub detail: String,
    pub status: Status,
}

impl Clause {
    pub fn pass(anchor: &str, detail: impl Into<String>) -> Clause {
        Clause { anchor: anchor.into(), detail: detail.into(), status: Status::Pass }
    }
    pub fn fail(anchor: &str, detail: impl Into<String>) -> Clause {
        Clause { anchor: anchor.into(), detail: detail.into(), status: Status::Fail }
    }
    pub fn note(anchor: &str, detail: impl Into<String>) -> Clause {
        Clause { anchor: anchor.into(), detail: detail.into(), status: Status::Note }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub title: String,
    pub clauses: Vec<Clause>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), clauses: Vec::new() }
    }

    pub fn push(&mut self, clause: Clause) {
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, clauses: impl IntoIterator<Item = Clause>) {
        self.clauses.extend(clauses);
    }

    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.status != Status::Fail)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.title));
        for c in &self.clauses {
            out.push_str(&format!("[{}] {}: {}\n", c.status, c.anchor, c.detail));
        }
        out.push_str(&format!(
            "verdict: {}\n",
            if self.all_pass() { "PASS" } else { "FAIL" }
        ));
        out
    }

    pub fn render_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            title: &'a str,
            clauses: &'a [Clause],
            verdict: &'a str,
        }
        let doc = Doc {
            title: &self.title,
            clauses: &self.clauses,
            verdict: if self.all_pass() { "PASS" } else { "FAIL" },
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}
