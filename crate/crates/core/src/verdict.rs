use std::fmt;

use serde::Serialize;

/// Outcome of one axiom or probe.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Data needed to decide (usually a declared pullback) is missing.
    Unverifiable,
    /// A precondition was not met, so the check was not run.
    Skipped,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// `Fail` if anything failed, else `Unverifiable` if anything was, else `Pass`.
    pub fn summarize(failed: bool, unverifiable: bool) -> Verdict {
        match (failed, unverifiable) {
            (true, _) => Verdict::Fail,
            (false, true) => Verdict::Unverifiable,
            (false, false) => Verdict::Pass,
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unverifiable => "unverifiable",
            Verdict::Skipped => "skipped",
        })
    }
}
