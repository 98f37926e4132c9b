use std::collections::BTreeSet;
use std::path::PathBuf;

use coalflow::metapolicy::CompositionDecision;
use coalflow::{CommonRepresentation, Flow, GrantResult};
use serde::Serialize;

/// Envelope for every JSON report. `diagnostics` are warnings only.
#[derive(Debug, Serialize)]
pub struct Report<T> {
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub outcome: T,
    pub diagnostics: Vec<String>,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &'static str, inputs: &[PathBuf], outcome: T) -> Self {
        Report {
            command,
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            outcome,
            diagnostics: Vec::new(),
        }
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        let message = message.into();
        eprintln!("warning: {message}");
        self.diagnostics.push(message);
    }
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub conflicting: bool,
    pub conflicts: BTreeSet<Flow>,
    pub common_flows: BTreeSet<Flow>,
    pub diffs: BTreeSet<Flow>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "query", rename_all = "lowercase")]
pub enum QueryResult {
    Grant {
        from: String,
        to: String,
        result: GrantResult,
    },
    Reachable {
        from: String,
        to: String,
        result: bool,
    },
    Lively {
        result: bool,
        components: usize,
    },
}

#[derive(Debug, Serialize)]
pub struct RuleComposition {
    /// One decision per fold step.
    pub decisions: Vec<CompositionDecision>,
    pub result: Option<CommonRepresentation>,
}
