//! Text and JSON reports.
//!
//! Polynomials are printed with their canonical string under the `(X > U)`
//! block order, which on parameter-only polynomials is degrevlex on the
//! parameters.

use std::fmt::Write as _;

use discvar_core::{ComponentLabel, ComponentStatus, DiscriminantVarietyResult, Polynomial, VarietyComponent};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::oracle::OracleReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Status of a component that was not requested.
pub const NOT_REQUESTED: &str = "not_requested";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentEntry {
    #[serde(skip)]
    pub label: &'static str,
    pub status: &'static str,
    /// Empty and assumed-empty components carry the generator `1`.
    pub generators: Vec<String>,
    #[serde(skip)]
    pub empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components(pub Vec<ComponentEntry>);

impl Serialize for Components {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for c in &self.0 {
            map.serialize_entry(c.label, c)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleRun {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    pub requested: u64,
    pub used: u64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    #[serde(skip)]
    pub name: &'static str,
    pub status: &'static str,
    #[serde(skip)]
    pub summary: String,
    pub runs: Vec<OracleRun>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleChecks(pub Vec<OracleCheck>);

impl Serialize for OracleChecks {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for c in &self.0 {
            map.serialize_entry(c.name, c)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleSection {
    pub primes: Vec<u64>,
    pub seed: u64,
    pub checks: OracleChecks,
}

/// Everything a report prints, as strings, in output order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub delta: i64,
    pub saturated_ideal: Vec<String>,
    pub projection_closure: Vec<String>,
    pub components: Components,
    pub discriminant_variety: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn entry(c: &VarietyComponent, warnings: &[String]) -> ComponentEntry {
    let warning = (c.status == ComponentStatus::AssumedEmpty)
        .then(|| warnings.first().cloned())
        .flatten();
    ComponentEntry {
        label: c.label.as_str(),
        status: c.status.as_str(),
        generators: strings(&c.generators),
        empty: c.is_empty(),
        warning,
    }
}

impl Report {
    /// Builds the report. Components missing from `result` are listed as
    /// not requested.
    pub fn new(result: &DiscriminantVarietyResult, oracle: Option<&OracleReport>) -> Report {
        let components = ComponentLabel::ALL
            .iter()
            .map(|&label| match result.component(label) {
                Some(c) => entry(c, &result.warnings),
                None => ComponentEntry {
                    label: label.as_str(),
                    status: NOT_REQUESTED,
                    generators: Vec::new(),
                    empty: true,
                    warning: None,
                },
            })
            .collect();
        let pre = &result.preprocess;
        Report {
            delta: pre.delta,
            saturated_ideal: strings(pre.basis.elements()),
            projection_closure: strings(pre.projection_closure.elements()),
            components: Components(components),
            discriminant_variety: result.w_d.iter().map(|c| strings(c)).collect(),
            oracle: oracle.map(|o| OracleSection {
                primes: o.primes.clone(),
                seed: o.seed,
                checks: OracleChecks(
                    o.checks
                        .iter()
                        .map(|c| OracleCheck {
                            name: c.name,
                            status: c.outcome.status(),
                            summary: c.outcome.describe(),
                            runs: c
                                .runs
                                .iter()
                                .map(|r| OracleRun {
                                    k: r.k,
                                    requested: r.requested,
                                    used: r.used,
                                    passed: r.passed,
                                })
                                .collect(),
                        })
                        .collect(),
                ),
            }),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let list = |v: &[String]| format!("[{}]", v.join(", "));
        let mut out = String::new();
        let _ = writeln!(out, "delta: {}", self.delta);
        let _ = writeln!(out, "saturated_ideal: {}", list(&self.saturated_ideal));
        let _ = writeln!(out, "projection_closure: {}", list(&self.projection_closure));
        let _ = writeln!(out, "components:");
        for c in &self.components.0 {
            let _ = write!(out, "  {}: {}", c.label, c.status);
            if !c.empty {
                let _ = write!(out, " {}", list(&c.generators));
            }
            out.push('\n');
            if let Some(w) = &c.warning {
                let _ = writeln!(out, "    warning: {w}");
            }
        }
        if self.discriminant_variety.is_empty() {
            let _ = writeln!(out, "discriminant_variety: (empty)");
        } else {
            let _ = writeln!(out, "discriminant_variety:");
            for c in &self.discriminant_variety {
                let _ = writeln!(out, "  {}", list(c));
            }
        }
        if let Some(o) = &self.oracle {
            let primes: Vec<String> = o.primes.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "oracle (primes {}, seed {}):", primes.join(","), o.seed);
            for c in &o.checks.0 {
                let _ = writeln!(out, "  {}: {}", c.name, c.summary);
            }
        }
        out
    }
}
