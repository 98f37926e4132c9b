//! Compositionality rules: a condition over the conflicts between two
//! graphs picks the composite used to combine them.
//!
//! The rule file format is JSON, for example
//!
//! ```json
//! {"condition": {"conflicts_complementary_in": "first"}, "then": "merge", "else": "append"}
//! ```
//!
//! which combines `A` and `B` by merge when every conflict is the inverse
//! of a flow of `A`, and by append otherwise. Graphs sharing no interfaces
//! never conflict, so `no_conflicts` holds for them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analyze::conflicts;
use crate::compose::{append, append_strict, merge};
use crate::cr::{CommonRepresentation, Flow};

/// Deepest condition tree accepted by [`CompositionRule::from_json`]. A
/// leaf has depth 1.
pub const MAX_CONDITION_DEPTH: usize = 16;

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("malformed rule JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid rule: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Condition {
    NoConflicts,
    /// Every conflict is the inverse of a flow of the given operand.
    ConflictsComplementaryIn(Side),
    ConflictCountAtMost(u64),
    And(Vec<Condition>),
    Not(Box<Condition>),
}

impl Condition {
    pub fn depth(&self) -> usize {
        match self {
            Condition::And(cs) => 1 + cs.iter().map(Condition::depth).max().unwrap_or(0),
            Condition::Not(c) => 1 + c.depth(),
            _ => 1,
        }
    }

    fn check(&self) -> Result<(), RuleError> {
        match self {
            Condition::And(cs) if cs.is_empty() => {
                Err(RuleError::Invalid("\"and\" needs at least one condition".into()))
            }
            Condition::And(cs) => cs.iter().try_for_each(Condition::check),
            Condition::Not(c) => c.check(),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, a: &CommonRepresentation, b: &CommonRepresentation) -> bool {
        self.eval_with(&conflicts(a, b), a, b)
    }

    fn eval_with(&self, found: &BTreeSet<Flow>, a: &CommonRepresentation, b: &CommonRepresentation) -> bool {
        match self {
            Condition::NoConflicts => found.is_empty(),
            Condition::ConflictsComplementaryIn(side) => {
                let host = match side {
                    Side::First => a,
                    Side::Second => b,
                };
                found.iter().all(|f| host.contains_flow(&f.inverse()))
            }
            Condition::ConflictCountAtMost(n) => (found.len() as u64) <= *n,
            Condition::And(cs) => cs.iter().all(|c| c.eval_with(found, a, b)),
            Condition::Not(c) => !c.eval_with(found, a, b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Merge,
    Append,
    AppendStrict,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionRule {
    pub condition: Condition,
    #[serde(rename = "then")]
    pub then_action: Action,
    #[serde(rename = "else")]
    pub else_action: Action,
}

/// Outcome of [`CompositionRule::apply`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionDecision {
    pub action_taken: Action,
    pub condition_held: bool,
    /// Absent exactly when the action is [`Action::Reject`].
    pub result: Option<CommonRepresentation>,
    /// The conflict set the condition was evaluated against.
    pub evidence: BTreeSet<Flow>,
}

impl CompositionRule {
    pub fn validate(&self) -> Result<(), RuleError> {
        if self.then_action == self.else_action {
            return Err(RuleError::Invalid("\"then\" and \"else\" must differ".into()));
        }
        let depth = self.condition.depth();
        if depth > MAX_CONDITION_DEPTH {
            return Err(RuleError::Invalid(format!(
                "condition nesting depth {depth} exceeds {MAX_CONDITION_DEPTH}"
            )));
        }
        self.condition.check()
    }

    pub fn from_json(s: &str) -> Result<Self, RuleError> {
        let rule: CompositionRule = serde_json::from_str(s)?;
        rule.validate()?;
        Ok(rule)
    }

    pub fn apply(&self, a: &CommonRepresentation, b: &CommonRepresentation) -> CompositionDecision {
        let evidence = conflicts(a, b);
        let condition_held = self.condition.eval_with(&evidence, a, b);
        let action_taken = if condition_held {
            self.then_action
        } else {
            self.else_action
        };
        let result = match action_taken {
            Action::Merge => Some(merge(a, b)),
            Action::Append => Some(append(a, b)),
            Action::AppendStrict => Some(append_strict(a, b)),
            Action::Reject => None,
        };
        CompositionDecision {
            action_taken,
            condition_held,
            result,
            evidence,
        }
    }
}
