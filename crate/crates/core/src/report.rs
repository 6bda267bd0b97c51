//! Certificate reports: deterministic JSON, aligned text and root graphs.
//!
//! Certificates decide the exit code; diagnostics only inform. Timings are
//! collected per stage but never serialized, so repeated runs on the same
//! input produce byte-identical JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// A proof obligation; any non-pass makes the run fail.
    Certificate,
    /// An observation; never affects the exit code.
    Diagnostic,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Certificate => "certificate",
            Kind::Diagnostic => "diagnostic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub stage: &'static str,
    pub kind: Kind,
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    entries: Vec<Entry>,
    facts: BTreeMap<&'static str, Map<String, Value>>,
    timings: Vec<(&'static str, u128)>,
    graph: Option<String>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(
        &mut self,
        stage: &'static str,
        kind: Kind,
        name: impl Into<String>,
        status: Status,
        witness: Option<String>,
    ) {
        self.entries.push(Entry {
            stage,
            kind,
            name: name.into(),
            status,
            witness,
        });
    }

    /// A certificate passing exactly when no violation is reported.
    pub fn certificate(
        &mut self,
        stage: &'static str,
        name: impl Into<String>,
        violation: Option<String>,
    ) {
        let status = if violation.is_none() {
            Status::Pass
        } else {
            Status::Fail
        };
        self.push(stage, Kind::Certificate, name, status, violation);
    }

    /// Marks a stage that could not run because an earlier one failed.
    pub fn skip_stage(&mut self, stage: &'static str, reason: impl Into<String>) {
        self.push(
            stage,
            Kind::Certificate,
            "stage prerequisites",
            Status::Inconclusive,
            Some(reason.into()),
        );
    }

    pub fn fact(&mut self, stage: &'static str, key: &str, value: Value) {
        self.facts
            .entry(stage)
            .or_default()
            .insert(key.to_string(), value);
    }

    pub fn add_timing(&mut self, stage: &'static str, micros: u128) {
        self.timings.push((stage, micros));
    }

    pub fn set_graph(&mut self, dot: String) {
        self.graph = Some(dot);
    }

    pub fn graph(&self) -> Option<&str> {
        self.graph.as_deref()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn timings(&self) -> &[(&'static str, u128)] {
        &self.timings
    }

    pub fn all_certificates_pass(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.kind != Kind::Certificate || e.status == Status::Pass)
    }

    /// 0 when every certificate passed, 1 otherwise. Input errors never
    /// reach a report; callers map those to 2 themselves.
    pub fn exit_code(&self) -> u8 {
        u8::from(!self.all_certificates_pass())
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "stage": e.stage,
                    "kind": e.kind.as_str(),
                    "name": e.name,
                    "status": e.status.as_str(),
                    "witness": e.witness,
                })
            })
            .collect();
        let mut facts = Map::new();
        for (stage, values) in &self.facts {
            facts.insert((*stage).to_string(), Value::Object(values.clone()));
        }
        let certs = self
            .entries
            .iter()
            .filter(|e| e.kind == Kind::Certificate)
            .count();
        let failed = self
            .entries
            .iter()
            .filter(|e| e.kind == Kind::Certificate && e.status == Status::Fail)
            .count();
        let inconclusive = self
            .entries
            .iter()
            .filter(|e| e.kind == Kind::Certificate && e.status == Status::Inconclusive)
            .count();
        json!({
            "entries": entries,
            "facts": facts,
            "summary": {
                "certificates": certs,
                "failed": failed,
                "inconclusive": inconclusive,
                "all_pass": self.all_certificates_pass(),
            },
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let tag = match e.kind {
                Kind::Certificate => "cert",
                Kind::Diagnostic => "diag",
            };
            let status = match e.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Inconclusive => "????",
            };
            let _ = writeln!(out, "{status} {tag} [{}] {}", e.stage, e.name);
            if let Some(w) = &e.witness {
                let _ = writeln!(out, "          {w}");
            }
        }
        let certs = self
            .entries
            .iter()
            .filter(|e| e.kind == Kind::Certificate)
            .count();
        let failed = self
            .entries
            .iter()
            .filter(|e| e.kind == Kind::Certificate && e.status != Status::Pass)
            .count();
        let _ = writeln!(
            out,
            "\n{} of {} certificates passed",
            certs - failed,
            certs
        );
        for (stage, values) in &self.facts {
            for (key, value) in values {
                let _ = writeln!(out, "  {stage}.{key} = {value}");
            }
        }
        out
    }
}

/// Renders a root graph in DOT form: one node per root, colored by class,
/// one edge per connected pair.
pub fn root_graph(nodes: &[String], class_of: &[usize], edges: &[(usize, usize)]) -> String {
    const PALETTE: [&str; 8] = [
        "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc949", "#9c755f",
    ];
    let mut s = String::from(
        "graph roots {\n  layout=neato;\n  overlap=false;\n  node [style=filled, fontname=\"monospace\"];\n",
    );
    for (i, label) in nodes.iter().enumerate() {
        let color = PALETTE[class_of[i] % PALETTE.len()];
        let _ = writeln!(s, "  \"{label}\" [fillcolor=\"{color}\"];");
    }
    for (i, j) in edges {
        let _ = writeln!(s, "  \"{}\" -- \"{}\";", nodes[*i], nodes[*j]);
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new();
        r.certificate("validate", "the identity holds", None);
        r.certificate("roots", "the family splits", Some("defect line".into()));
        r.push(
            "roots",
            Kind::Diagnostic,
            "the algebra is simple",
            Status::Fail,
            Some("a proper ideal exists".into()),
        );
        r.skip_stage("decompose", "roots failed");
        r.fact("roots", "module_roots", json!(["(2)", "(-2)"]));
        r.add_timing("validate", 1234);
        r
    }

    #[test]
    fn failing_certificates_set_the_exit_code_and_diagnostics_do_not() {
        let r = sample();
        assert_eq!(r.exit_code(), 1);

        let mut ok = Report::new();
        ok.certificate("validate", "fine", None);
        ok.push(
            "validate",
            Kind::Diagnostic,
            "not simple",
            Status::Fail,
            None,
        );
        assert_eq!(ok.exit_code(), 0);
        assert!(ok.all_certificates_pass());
    }

    #[test]
    fn json_is_stable_and_carries_no_timing() {
        let a = sample().to_json_string();
        let b = sample().to_json_string();
        assert_eq!(a, b);
        assert!(!a.contains("1234"));
        assert!(a.contains("\"inconclusive\""));
        assert!(a.contains("\"module_roots\""));
    }

    #[test]
    fn text_lists_every_entry_with_its_witness() {
        let t = sample().to_text();
        assert!(t.contains("PASS cert [validate] the identity holds"));
        assert!(t.contains("FAIL cert [roots] the family splits"));
        assert!(t.contains("defect line"));
        assert!(t.contains("diag [roots]"));
        assert!(t.contains("1 of 3 certificates passed"));
    }

    #[test]
    fn the_root_graph_colors_nodes_by_class() {
        let nodes = vec!["(2)".to_string(), "(-2)".to_string(), "(3)".to_string()];
        let dot = root_graph(&nodes, &[0, 0, 1], &[(0, 1)]);
        assert!(dot.contains("\"(2)\" [fillcolor=\"#4e79a7\"]"));
        assert!(dot.contains("\"(3)\" [fillcolor=\"#f28e2b\"]"));
        assert!(dot.contains("\"(2)\" -- \"(-2)\";"));
    }
}
