//! Verification reports: a versioned JSON schema and a text rendering of
//! the same data.

use std::fmt::Write;

use serde::Serialize;

use crate::oracle::Audit;

pub const SCHEMA: u32 = 1;
/// Residuals are printed with at most this many monomials.
pub const RESIDUAL_TERMS: usize = 200;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Comparison of a printed display with the direct computation.
#[derive(Clone, Debug, Serialize)]
pub struct Printed {
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub id: String,
    pub identity: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Audit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed: Option<Printed>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Entry {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn oracle_disagrees(&self) -> bool {
        self.oracle.as_ref().is_some_and(|a| !a.agrees())
    }
}

/// The run parameters echoed into the report.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub command: String,
    pub dim: usize,
    pub jet_cap: usize,
    pub vsym_cap: usize,
    pub points: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub oracle_disagreements: usize,
    pub printed_discrepancies: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub config: ConfigEcho,
    pub entries: Vec<Entry>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl Report {
    pub fn new(config: ConfigEcho, entries: Vec<Entry>, wall_ms: Option<u64>) -> Self {
        let passed = entries.iter().filter(|e| e.passed()).count();
        let summary = Summary {
            total: entries.len(),
            passed,
            failed: entries.len() - passed,
            oracle_disagreements: entries.iter().filter(|e| e.oracle_disagrees()).count(),
            printed_discrepancies: entries
                .iter()
                .filter(|e| e.printed.as_ref().is_some_and(|p| !p.agrees))
                .count(),
        };
        Report {
            schema: SCHEMA,
            config,
            entries,
            summary,
            wall_ms,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn entry(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = write!(
            out,
            "varbic {}  dim={} jet-cap={} vsym-cap={} points={} seed={}",
            c.command, c.dim, c.jet_cap, c.vsym_cap, c.points, c.seed
        );
        if let Some(k) = c.k {
            let _ = write!(out, " k={k}");
        }
        out.push('\n');
        for f in &c.fields {
            let _ = writeln!(out, "field: {f}");
        }
        for e in &self.entries {
            let tag = if e.passed() { "PASS" } else { "FAIL" };
            let _ = write!(out, "{tag}  {:<34} {}", e.id, e.identity);
            let mut extra = Vec::new();
            if let Some(a) = &e.oracle {
                let verdict = if a.agrees() { "agrees" } else { "DISAGREES" };
                extra.push(format!("oracle {verdict} at {} points", a.points));
            }
            if let Some(ms) = e.wall_ms {
                extra.push(format!("{ms} ms"));
            }
            if !extra.is_empty() {
                let _ = write!(out, "  ({})", extra.join(", "));
            }
            out.push('\n');
            if let Some(n) = &e.note {
                let _ = writeln!(out, "      note: {n}");
            }
            if let Some(p) = &e.printed {
                if p.agrees {
                    let _ = writeln!(out, "      printed display agrees");
                } else {
                    let _ = writeln!(out, "      printed display differs");
                    if let Some(r) = &p.residual {
                        let _ = writeln!(out, "      printed residual: {r}");
                    }
                }
            }
            if let Some(r) = &e.residual {
                let _ = writeln!(out, "      residual: {r}");
            }
            if let Some(p) = e.oracle.as_ref().and_then(|a| a.failing_point.as_ref()) {
                let _ = writeln!(out, "      oracle nonzero at {p}");
            }
        }
        let s = &self.summary;
        let _ = write!(
            out,
            "summary: {} passed, {} failed, {} oracle disagreements, {} printed discrepancies",
            s.passed, s.failed, s.oracle_disagreements, s.printed_discrepancies
        );
        if let Some(ms) = self.wall_ms {
            let _ = write!(out, ", {ms} ms");
        }
        out.push('\n');
        out
    }
}
