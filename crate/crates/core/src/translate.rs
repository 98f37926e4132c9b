//! Translation of source access-control policies into common
//! representations.
//!
//! * ACLs and capability lists give each entity two explicit interfaces,
//!   `(e, R)` and `(e, W)`. A subject allowed to write an object yields
//!   `((s, R), (o, W))`; a subject allowed to read yields `((o, R), (s, W))`.
//! * Lattice policies give each entity one implicit interface labelled
//!   `lbac`, with a flow from every entity to every other entity whose label
//!   dominates its own.
//! * Role-based policies close the role hierarchy (senior, junior), gather
//!   each role's privileges and pair read with write privileges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closure::Closure;
use crate::cr::{CommonRepresentation, Flow, InterfaceId, Mode};

/// Label given to implicit interfaces produced by [`LatticePolicy::to_cr`].
pub const LBAC_LABEL: &str = "lbac";

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("malformed policy JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("unknown role {0:?}")]
    UnknownRole(String),
    #[error("unknown RBAC semantics {0:?}, expected literal or cross-object")]
    UnknownSemantics(String),
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> PolicyError {
    PolicyError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

fn check_names<'a>(field: &str, names: impl IntoIterator<Item = &'a String>) -> Result<(), PolicyError> {
    if names.into_iter().any(String::is_empty) {
        return Err(invalid(field, "empty name"));
    }
    Ok(())
}

fn check_disjoint(objects: &BTreeSet<String>, subjects: &BTreeSet<String>) -> Result<(), PolicyError> {
    if let Some(both) = objects.intersection(subjects).next() {
        return Err(invalid(
            "subjects",
            format!("{both:?} is declared both as an object and as a subject"),
        ));
    }
    Ok(())
}

fn explicit_pair(e: &str) -> [InterfaceId; 2] {
    [InterfaceId::explicit(e, Mode::R), InterfaceId::explicit(e, Mode::W)]
}

fn flow(from: InterfaceId, to: InterfaceId) -> Flow {
    Flow::new(from, to).expect("translation never pairs an interface with itself")
}

/// `(subject, mode)` element of an ACL entry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AclEntry {
    pub subject: String,
    pub mode: Mode,
}

/// `(object, mode)` element of a capability list or role assignment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Privilege {
    pub object: String,
    pub mode: Mode,
}

impl Privilege {
    pub fn new(object: impl Into<String>, mode: Mode) -> Self {
        Privilege {
            object: object.into(),
            mode,
        }
    }
}

/// Access control list: object → set of (subject, mode).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AclPolicy {
    pub objects: BTreeSet<String>,
    pub subjects: BTreeSet<String>,
    #[serde(default)]
    pub entries: BTreeMap<String, BTreeSet<AclEntry>>,
}

impl AclPolicy {
    pub fn validate(&self) -> Result<(), PolicyError> {
        check_names("objects", &self.objects)?;
        check_names("subjects", &self.subjects)?;
        check_disjoint(&self.objects, &self.subjects)?;
        for (object, perms) in &self.entries {
            if !self.objects.contains(object) {
                return Err(invalid(format!("entries.{object}"), "object is not declared"));
            }
            for p in perms {
                if !self.subjects.contains(&p.subject) {
                    return Err(invalid(
                        format!("entries.{object}"),
                        format!("subject {:?} is not declared", p.subject),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> CapabilityPolicy {
        let mut entries: BTreeMap<String, BTreeSet<Privilege>> = BTreeMap::new();
        for (object, perms) in &self.entries {
            for p in perms {
                entries
                    .entry(p.subject.clone())
                    .or_default()
                    .insert(Privilege::new(object.clone(), p.mode));
            }
        }
        CapabilityPolicy {
            objects: self.objects.clone(),
            subjects: self.subjects.clone(),
            entries,
        }
    }

    pub fn to_cr(&self) -> Result<CommonRepresentation, PolicyError> {
        self.validate()?;
        let interfaces = self
            .objects
            .iter()
            .chain(&self.subjects)
            .flat_map(|e| explicit_pair(e));
        let mut flows = Vec::new();
        for (object, perms) in &self.entries {
            for p in perms {
                let f = match p.mode {
                    Mode::W => flow(
                        InterfaceId::explicit(&p.subject, Mode::R),
                        InterfaceId::explicit(object, Mode::W),
                    ),
                    Mode::R => flow(
                        InterfaceId::explicit(object, Mode::R),
                        InterfaceId::explicit(&p.subject, Mode::W),
                    ),
                };
                flows.push(f);
            }
        }
        Ok(CommonRepresentation::new(interfaces, flows))
    }
}

/// Capability list: subject → set of (object, mode).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapabilityPolicy {
    pub objects: BTreeSet<String>,
    pub subjects: BTreeSet<String>,
    #[serde(default)]
    pub entries: BTreeMap<String, BTreeSet<Privilege>>,
}

impl CapabilityPolicy {
    pub fn validate(&self) -> Result<(), PolicyError> {
        check_names("objects", &self.objects)?;
        check_names("subjects", &self.subjects)?;
        check_disjoint(&self.objects, &self.subjects)?;
        for (subject, privs) in &self.entries {
            if !self.subjects.contains(subject) {
                return Err(invalid(format!("entries.{subject}"), "subject is not declared"));
            }
            for p in privs {
                if !self.objects.contains(&p.object) {
                    return Err(invalid(
                        format!("entries.{subject}"),
                        format!("object {:?} is not declared", p.object),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Regroups the entries by object.
    pub fn transpose(&self) -> AclPolicy {
        let mut entries: BTreeMap<String, BTreeSet<AclEntry>> = BTreeMap::new();
        for (subject, privs) in &self.entries {
            for p in privs {
                entries.entry(p.object.clone()).or_default().insert(AclEntry {
                    subject: subject.clone(),
                    mode: p.mode,
                });
            }
        }
        AclPolicy {
            objects: self.objects.clone(),
            subjects: self.subjects.clone(),
            entries,
        }
    }

    pub fn to_cr(&self) -> Result<CommonRepresentation, PolicyError> {
        self.validate()?;
        self.transpose().to_cr()
    }
}

/// Labelled entities over a partially ordered set of labels. `order` holds
/// cover pairs `(lower, higher)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticePolicy {
    pub labels: BTreeSet<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    pub entities: BTreeSet<String>,
    pub labelling: BTreeMap<String, String>,
}

impl LatticePolicy {
    fn dominance(&self) -> Closure {
        Closure::transitive(
            self.labels.iter().map(String::as_str),
            self.order.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        )
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        check_names("labels", &self.labels)?;
        check_names("entities", &self.entities)?;
        for (lo, hi) in &self.order {
            for l in [lo, hi] {
                if !self.labels.contains(l) {
                    return Err(invalid("order", format!("label {l:?} is not declared")));
                }
            }
        }
        let closure = self.dominance();
        // (l, l) pairs are harmless; a cycle through distinct labels is not
        let cyclic: Vec<String> = closure
            .cyclic()
            .into_iter()
            .filter(|l| closure.successors(l).iter().any(|m| m != l && closure.related(m, l)))
            .collect();
        if !cyclic.is_empty() {
            return Err(invalid(
                "order",
                format!("not antisymmetric: labels {cyclic:?} dominate each other"),
            ));
        }
        for (entity, label) in &self.labelling {
            if !self.entities.contains(entity) {
                return Err(invalid(format!("labelling.{entity}"), "entity is not declared"));
            }
            if !self.labels.contains(label) {
                return Err(invalid(
                    format!("labelling.{entity}"),
                    format!("label {label:?} is not declared"),
                ));
            }
        }
        if let Some(e) = self.entities.iter().find(|e| !self.labelling.contains_key(*e)) {
            return Err(invalid("labelling", format!("entity {e:?} has no label")));
        }
        Ok(())
    }

    /// Whether `lower ≤ higher` in the reflexive-transitive closure of the
    /// declared order.
    pub fn dominates(&self, lower: &str, higher: &str) -> Result<bool, PolicyError> {
        self.validate()?;
        for l in [lower, higher] {
            if !self.labels.contains(l) {
                return Err(PolicyError::UnknownLabel(l.to_string()));
            }
        }
        Ok(self.dominance().related_or_equal(lower, higher))
    }

    pub fn to_cr(&self) -> Result<CommonRepresentation, PolicyError> {
        self.validate()?;
        let closure = self.dominance();
        let iface = |e: &str| InterfaceId::implicit(e, LBAC_LABEL);
        let mut flows = Vec::new();
        for (a, la) in &self.labelling {
            for (b, lb) in &self.labelling {
                if a != b && closure.related_or_equal(la, lb) {
                    flows.push(flow(iface(a), iface(b)));
                }
            }
        }
        Ok(CommonRepresentation::new(self.entities.iter().map(|e| iface(e)), flows))
    }
}

/// How read and write privileges of one role are paired into flows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum RbacSemantics {
    /// `((o, R), (o, W))` for each role holding both modes on the same object.
    #[default]
    Literal,
    /// `((o1, R), (o2, W))` for each role holding read on `o1` and write on `o2`.
    CrossObject,
}

impl FromStr for RbacSemantics {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(RbacSemantics::Literal),
            "cross-object" => Ok(RbacSemantics::CrossObject),
            other => Err(PolicyError::UnknownSemantics(other.to_string())),
        }
    }
}

impl fmt::Display for RbacSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RbacSemantics::Literal => "literal",
            RbacSemantics::CrossObject => "cross-object",
        })
    }
}

/// Role assignments plus a hierarchy of `(senior, junior)` pairs; a senior
/// role inherits the privileges of its juniors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RbacPolicy {
    pub roles: BTreeSet<String>,
    #[serde(default)]
    pub assignments: BTreeMap<String, BTreeSet<Privilege>>,
    #[serde(default)]
    pub hierarchy: Vec<(String, String)>,
}

impl RbacPolicy {
    fn hierarchy_closure(&self) -> Closure {
        Closure::transitive(
            self.roles.iter().map(String::as_str),
            self.hierarchy.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        )
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        check_names("roles", &self.roles)?;
        for (role, privs) in &self.assignments {
            if !self.roles.contains(role) {
                return Err(invalid(format!("assignments.{role}"), "role is not declared"));
            }
            check_names(&format!("assignments.{role}"), privs.iter().map(|p| &p.object))?;
        }
        for (senior, junior) in &self.hierarchy {
            for r in [senior, junior] {
                if !self.roles.contains(r) {
                    return Err(invalid("hierarchy", format!("role {r:?} is not declared")));
                }
            }
        }
        let cyclic = self.hierarchy_closure().cyclic();
        if !cyclic.is_empty() {
            return Err(invalid("hierarchy", format!("cycle through roles {cyclic:?}")));
        }
        Ok(())
    }

    fn checked_role(&self, role: &str) -> Result<(), PolicyError> {
        self.validate()?;
        if !self.roles.contains(role) {
            return Err(PolicyError::UnknownRole(role.to_string()));
        }
        Ok(())
    }

    /// Transitive closure of the hierarchy.
    pub fn closure(&self) -> Result<BTreeSet<(String, String)>, PolicyError> {
        self.validate()?;
        Ok(self.hierarchy_closure().pairs())
    }

    /// Every role junior to `role`, directly or transitively.
    pub fn seniority(&self, role: &str) -> Result<BTreeSet<String>, PolicyError> {
        self.checked_role(role)?;
        Ok(self.hierarchy_closure().successors(role))
    }

    /// The role's own assignment together with those of all its juniors.
    pub fn privileges(&self, role: &str) -> Result<BTreeSet<Privilege>, PolicyError> {
        self.checked_role(role)?;
        Ok(self.privileges_with(&self.hierarchy_closure(), role))
    }

    fn privileges_with(&self, closure: &Closure, role: &str) -> BTreeSet<Privilege> {
        std::iter::once(role.to_string())
            .chain(closure.successors(role))
            .filter_map(|r| self.assignments.get(&r))
            .flatten()
            .cloned()
            .collect()
    }

    pub fn to_cr(&self, semantics: RbacSemantics) -> Result<CommonRepresentation, PolicyError> {
        self.validate()?;
        let closure = self.hierarchy_closure();
        let interfaces = self
            .assignments
            .values()
            .flatten()
            .flat_map(|p| explicit_pair(&p.object));
        let mut flows = BTreeSet::new();
        for role in &self.roles {
            let privs = self.privileges_with(&closure, role);
            let reads = privs.iter().filter(|p| p.mode == Mode::R);
            for r in reads {
                let writes = privs.iter().filter(|p| p.mode == Mode::W);
                for w in writes {
                    if semantics == RbacSemantics::Literal && r.object != w.object {
                        continue;
                    }
                    flows.insert(flow(
                        InterfaceId::explicit(&r.object, Mode::R),
                        InterfaceId::explicit(&w.object, Mode::W),
                    ));
                }
            }
        }
        Ok(CommonRepresentation::new(interfaces, flows))
    }
}

/// Any supported source policy, as read from a policy file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourcePolicy {
    Acl(AclPolicy),
    Capabilities(CapabilityPolicy),
    Lbac(LatticePolicy),
    Rbac(RbacPolicy),
}

impl SourcePolicy {
    /// Parses and validates a policy file.
    pub fn from_json(s: &str) -> Result<Self, PolicyError> {
        let p: SourcePolicy = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        match self {
            SourcePolicy::Acl(p) => p.validate(),
            SourcePolicy::Capabilities(p) => p.validate(),
            SourcePolicy::Lbac(p) => p.validate(),
            SourcePolicy::Rbac(p) => p.validate(),
        }
    }

    /// `semantics` only affects role-based policies.
    pub fn to_cr(&self, semantics: RbacSemantics) -> Result<CommonRepresentation, PolicyError> {
        match self {
            SourcePolicy::Acl(p) => p.to_cr(),
            SourcePolicy::Capabilities(p) => p.to_cr(),
            SourcePolicy::Lbac(p) => p.to_cr(),
            SourcePolicy::Rbac(p) => p.to_cr(semantics),
        }
    }
}
