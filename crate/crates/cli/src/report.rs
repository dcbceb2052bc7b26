use serde::Serialize;
use serde_json::Value;
use zcat_core::Verdict;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: String,
    pub verdict: Verdict,
    pub summary: Vec<String>,
    pub details: Value,
}

impl Check {
    pub fn new(name: &str, kind: &str, verdict: Verdict, summary: Vec<String>, details: impl Serialize) -> Check {
        Check {
            name: name.to_string(),
            kind: kind.to_string(),
            verdict,
            summary,
            details: serde_json::to_value(details).expect("reports serialize"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, checks: Vec<Check>) -> Report {
        let failed = checks.iter().any(|c| c.verdict == Verdict::Fail);
        let unverifiable = checks.iter().any(|c| c.verdict == Verdict::Unverifiable);
        Report { command: command.to_string(), verdict: Verdict::summarize(failed, unverifiable), checks }
    }

    pub fn text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for c in &self.checks {
            out.push_str(&format!("[{}] {} {}\n", c.verdict, c.kind, c.name));
            for s in &c.summary {
                out.push_str(&format!("    {s}\n"));
            }
        }
        out.push_str(&format!("overall: {}\n", self.verdict));
        out
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
