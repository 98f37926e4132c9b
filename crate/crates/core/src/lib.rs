//! Access-control policies as information-flow graphs.
//!
//! A [`CommonRepresentation`] is a directed graph of interfaces and
//! permitted flows. Policies from the usual models (ACLs, capability lists,
//! security lattices, role hierarchies) translate into it; graphs can then
//! be combined with [`compose::merge`] or [`compose::append`], compared with
//! the functions in [`analyze`], and combined under a declarative
//! [`metapolicy::CompositionRule`].

pub mod analyze;
pub mod closure;
pub mod compose;
pub mod cr;
pub mod dot;
pub mod metapolicy;
pub mod translate;

#[cfg(test)]
mod testutil;

pub use cr::{
    AvailabilityGraph, CommonRepresentation, CrError, Flow, GrantResult, InterfaceId, Mode, Violation,
};
pub use translate::{
    AclEntry, AclPolicy, CapabilityPolicy, LatticePolicy, PolicyError, Privilege, RbacPolicy, RbacSemantics,
    SourcePolicy,
};
