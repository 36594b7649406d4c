//! Per-directive verdicts, rendered as text or as one JSON record per line.

use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Records,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub line: usize,
    pub col: usize,
    /// `flag`, `postulate`, `def`, `check` or `derive`
    pub directive: &'static str,
    pub accepted: bool,
    /// the summary of what was judged
    pub judgment: String,
    /// the rule that failed, empty on acceptance
    pub rule: String,
    /// the path to the failing subterm, empty on acceptance
    pub position: String,
    pub message: String,
}

impl Record {
    pub fn verdict(&self) -> &'static str {
        if self.accepted {
            "accept"
        } else {
            "reject"
        }
    }

    pub fn to_json(&self) -> String {
        json!({
            "line": self.line,
            "col": self.col,
            "directive": self.directive,
            "verdict": self.verdict(),
            "judgment": self.judgment,
            "rule": self.rule,
            "position": self.position,
            "message": self.message,
        })
        .to_string()
    }

    pub fn to_text(&self, color: bool) -> String {
        let verdict = match (color, self.accepted) {
            (false, _) => self.verdict().to_string(),
            (true, true) => format!("\x1b[32m{}\x1b[0m", self.verdict()),
            (true, false) => format!("\x1b[31m{}\x1b[0m", self.verdict()),
        };
        let mut s = format!("{}:{}: {verdict} {}", self.line, self.col, self.judgment);
        if !self.accepted {
            if self.rule.is_empty() {
                s.push_str(&format!("\n    {}", self.message));
            } else {
                s.push_str(&format!("\n    {} at {}: {}", self.rule, self.position, self.message));
            }
        }
        s
    }
}

pub fn render(records: &[Record], format: Format, color: bool) -> String {
    let mut out = String::new();
    for r in records {
        match format {
            Format::Text => out.push_str(&r.to_text(color)),
            Format::Records => out.push_str(&r.to_json()),
        }
        out.push('\n');
    }
    if format == Format::Text {
        let bad = records.iter().filter(|r| !r.accepted).count();
        out.push_str(&format!("{} directive(s), {} rejected\n", records.len(), bad));
    }
    out
}

/// `IDPATH_COLOR=1` turns on coloured verdicts; anything else leaves them plain.
pub fn color_from_env() -> bool {
    std::env::var("IDPATH_COLOR").map(|v| v == "1").unwrap_or(false)
}
