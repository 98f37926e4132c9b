//! The common representation: a directed graph whose vertices are
//! interfaces and whose edges are permitted information flows.
//!
//! A flow `(from, to)` always means information moves from `from` to `to`.
//! For an explicit interface `(e, R)` is the port through which `e`'s
//! content leaves and `(e, W)` the port through which content enters `e`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Access mode of an explicit interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mode {
    R,
    W,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::R => "R",
            Mode::W => "W",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A vertex of the graph.
///
/// The derived ordering (variant, then names, then mode) is the canonical
/// order used for serialization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InterfaceId {
    /// A resource accessed in a given mode.
    Explicit { entity: String, mode: Mode },
    /// A mode-less agent port; one agent may own many, told apart by label.
    Implicit { agent: String, label: String },
}

impl InterfaceId {
    pub fn explicit(entity: impl Into<String>, mode: Mode) -> Self {
        InterfaceId::Explicit {
            entity: entity.into(),
            mode,
        }
    }

    pub fn implicit(agent: impl Into<String>, label: impl Into<String>) -> Self {
        InterfaceId::Implicit {
            agent: agent.into(),
            label: label.into(),
        }
    }

    fn has_empty_name(&self) -> bool {
        match self {
            InterfaceId::Explicit { entity, .. } => entity.is_empty(),
            InterfaceId::Implicit { agent, label } => agent.is_empty() || label.is_empty(),
        }
    }
}

/// Renders `entity.R`, `entity.W` or `agent#label`.
impl fmt::Display for InterfaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterfaceId::Explicit { entity, mode } => write!(f, "{entity}.{mode}"),
            InterfaceId::Implicit { agent, label } => write!(f, "{agent}#{label}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse interface {0:?}: expected ENTITY.R, ENTITY.W or AGENT#LABEL")]
pub struct ParseInterfaceError(pub String);

/// Parses the [`Display`](fmt::Display) form. The first `#` separates agent
/// from label; otherwise the last `.` separates entity from mode.
impl FromStr for InterfaceId {
    type Err = ParseInterfaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseInterfaceError(s.to_string());
        if let Some((agent, label)) = s.split_once('#') {
            if agent.is_empty() || label.is_empty() {
                return Err(err());
            }
            return Ok(InterfaceId::implicit(agent, label));
        }
        let (entity, mode) = s.rsplit_once('.').ok_or_else(err)?;
        if entity.is_empty() {
            return Err(err());
        }
        let mode = match mode {
            "R" => Mode::R,
            "W" => Mode::W,
            _ => return Err(err()),
        };
        Ok(InterfaceId::explicit(entity, mode))
    }
}

/// A directed edge. Never a self-loop on a single interface.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Flow {
    from: InterfaceId,
    to: InterfaceId,
}

impl Flow {
    pub fn new(from: InterfaceId, to: InterfaceId) -> Result<Self, CrError> {
        if from == to {
            return Err(CrError::SelfFlow(from));
        }
        Ok(Flow { from, to })
    }

    pub fn from(&self) -> &InterfaceId {
        &self.from
    }

    pub fn to(&self) -> &InterfaceId {
        &self.to
    }

    pub fn inverse(&self) -> Flow {
        Flow {
            from: self.to.clone(),
            to: self.from.clone(),
        }
    }

    pub fn is_complementary(&self, other: &Flow) -> bool {
        self.from == other.to && self.to == other.from
    }
}

impl fmt::Display for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.from, self.to)
    }
}

#[derive(Debug, Error)]
pub enum CrError {
    #[error("flow from {0} to itself")]
    SelfFlow(InterfaceId),
    #[error("unknown interface {0}")]
    UnknownInterface(InterfaceId),
    #[error("malformed common representation JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid common representation: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A well-formedness problem found by [`CommonRepresentation::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DanglingEndpoint { flow: (InterfaceId, InterfaceId), endpoint: InterfaceId },
    EmptyName(InterfaceId),
    SelfFlow(InterfaceId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingEndpoint { flow, endpoint } => write!(
                f,
                "flows: endpoint {endpoint} of ({}, {}) is not a declared interface",
                flow.0, flow.1
            ),
            Violation::EmptyName(i) => write!(f, "interfaces: {i:?} has an empty name"),
            Violation::SelfFlow(i) => write!(f, "flows: flow from {i} to itself"),
        }
    }
}

/// Answer of [`CommonRepresentation::grant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GrantResult {
    Permit,
    Deny,
    /// The graph is not authoritative over one of the interfaces.
    Undefined,
}

impl fmt::Display for GrantResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrantResult::Permit => "permit",
            GrantResult::Deny => "deny",
            GrantResult::Undefined => "undefined",
        })
    }
}

/// Interfaces and flows. Both sets are ordered canonically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CommonRepresentation {
    interfaces: BTreeSet<InterfaceId>,
    flows: BTreeSet<Flow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlow {
    from: InterfaceId,
    to: InterfaceId,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCr {
    interfaces: Vec<InterfaceId>,
    flows: Vec<RawFlow>,
}

impl CommonRepresentation {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a graph without checking that flow endpoints are declared.
    /// Use [`validate`](Self::validate) or [`try_new`](Self::try_new) when
    /// that matters.
    pub fn new(
        interfaces: impl IntoIterator<Item = InterfaceId>,
        flows: impl IntoIterator<Item = Flow>,
    ) -> Self {
        CommonRepresentation {
            interfaces: interfaces.into_iter().collect(),
            flows: flows.into_iter().collect(),
        }
    }

    pub fn try_new(
        interfaces: impl IntoIterator<Item = InterfaceId>,
        flows: impl IntoIterator<Item = Flow>,
    ) -> Result<Self, CrError> {
        let cr = Self::new(interfaces, flows);
        let violations = cr.validate();
        if violations.is_empty() {
            Ok(cr)
        } else {
            Err(CrError::Invalid(violations))
        }
    }

    pub fn interfaces(&self) -> &BTreeSet<InterfaceId> {
        &self.interfaces
    }

    pub fn flows(&self) -> &BTreeSet<Flow> {
        &self.flows
    }

    pub fn contains_interface(&self, i: &InterfaceId) -> bool {
        self.interfaces.contains(i)
    }

    pub fn contains_flow(&self, f: &Flow) -> bool {
        self.flows.contains(f)
    }

    pub fn is_empty(&self) -> bool {
        self.interfaces.is_empty() && self.flows.is_empty()
    }

    /// One entry per malformed name and per undeclared flow endpoint.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in &self.interfaces {
            if i.has_empty_name() {
                out.push(Violation::EmptyName(i.clone()));
            }
        }
        for f in &self.flows {
            for endpoint in [&f.from, &f.to] {
                if !self.interfaces.contains(endpoint) {
                    out.push(Violation::DanglingEndpoint {
                        flow: (f.from.clone(), f.to.clone()),
                        endpoint: endpoint.clone(),
                    });
                }
            }
        }
        out
    }

    pub fn grant(&self, from: &InterfaceId, to: &InterfaceId) -> GrantResult {
        if !self.interfaces.contains(from) || !self.interfaces.contains(to) {
            return GrantResult::Undefined;
        }
        let permitted = self
            .flows
            .iter()
            .any(|f| &f.from == from && &f.to == to);
        if permitted {
            GrantResult::Permit
        } else {
            GrantResult::Deny
        }
    }

    /// Undirected graph with one edge for every complementary pair of flows.
    /// One-way flows contribute nothing.
    pub fn availability_graph(&self) -> AvailabilityGraph {
        let edges = self
            .flows
            .iter()
            .filter(|f| f.from < f.to && self.flows.contains(&f.inverse()))
            .map(|f| (f.from.clone(), f.to.clone()))
            .collect();
        AvailabilityGraph {
            vertices: self.interfaces.clone(),
            edges,
        }
    }

    /// Holds when the availability graph has exactly one connected
    /// component. The empty graph has none, so it is not lively.
    pub fn is_lively(&self) -> bool {
        self.availability_graph().component_count() == 1
    }

    /// Whether a directed walk leads from `src` to `dst`. Every interface
    /// reaches itself.
    pub fn reachable(&self, src: &InterfaceId, dst: &InterfaceId) -> Result<bool, CrError> {
        for i in [src, dst] {
            if !self.interfaces.contains(i) {
                return Err(CrError::UnknownInterface(i.clone()));
            }
        }
        let mut succ: BTreeMap<&InterfaceId, Vec<&InterfaceId>> = BTreeMap::new();
        for f in &self.flows {
            succ.entry(&f.from).or_default().push(&f.to);
        }
        let mut seen = BTreeSet::from([src]);
        let mut queue = VecDeque::from([src]);
        while let Some(cur) = queue.pop_front() {
            if cur == dst {
                return Ok(true);
            }
            for &next in succ.get(cur).into_iter().flatten() {
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        Ok(false)
    }

    /// Parses and validates the JSON interchange form.
    pub fn from_json(s: &str) -> Result<Self, CrError> {
        let raw: RawCr = serde_json::from_str(s)?;
        let mut violations = Vec::new();
        let mut flows = Vec::with_capacity(raw.flows.len());
        for f in raw.flows {
            match Flow::new(f.from, f.to) {
                Ok(flow) => flows.push(flow),
                Err(CrError::SelfFlow(i)) => violations.push(Violation::SelfFlow(i)),
                Err(e) => unreachable!("{e}"),
            }
        }
        let cr = Self::new(raw.interfaces, flows);
        violations.extend(cr.validate());
        if violations.is_empty() {
            Ok(cr)
        } else {
            Err(CrError::Invalid(violations))
        }
    }

    /// Canonical JSON: sorted arrays, pretty-printed, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("CR serialization is infallible");
        s.push('\n');
        s
    }
}

/// Undirected graph derived from complementary flow pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityGraph {
    vertices: BTreeSet<InterfaceId>,
    // stored with the smaller endpoint first
    edges: BTreeSet<(InterfaceId, InterfaceId)>,
}

impl AvailabilityGraph {
    pub fn vertices(&self) -> &BTreeSet<InterfaceId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(InterfaceId, InterfaceId)> {
        &self.edges
    }

    pub fn has_edge(&self, a: &InterfaceId, b: &InterfaceId) -> bool {
        let key = if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        self.edges.contains(&key)
    }

    pub fn component_count(&self) -> usize {
        let mut adj: BTreeMap<&InterfaceId, Vec<&InterfaceId>> = BTreeMap::new();
        for (a, b) in &self.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for v in &self.vertices {
            if !seen.insert(v) {
                continue;
            }
            count += 1;
            let mut stack = vec![v];
            while let Some(cur) = stack.pop() {
                for &n in adj.get(cur).into_iter().flatten() {
                    if seen.insert(n) {
                        stack.push(n);
                    }
                }
            }
        }
        count
    }
}
