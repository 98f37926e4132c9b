//! The two composites over common representations.
//!
//! [`merge`] is the permit-favouring union. [`append`] favours deny: the
//! first operand keeps every flow, and a flow of the second survives only
//! when the first holds neither it nor its inverse. Neither operation binds
//! tighter than the other, so callers always spell out grouping.

use thiserror::Error;

use crate::cr::{CommonRepresentation, Flow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot compose an empty sequence of common representations")]
pub struct EmptySequence;

pub fn merge(a: &CommonRepresentation, b: &CommonRepresentation) -> CommonRepresentation {
    CommonRepresentation::new(
        a.interfaces().union(b.interfaces()).cloned(),
        a.flows().union(b.flows()).cloned(),
    )
}

pub fn append(a: &CommonRepresentation, b: &CommonRepresentation) -> CommonRepresentation {
    let admitted = b
        .flows()
        .iter()
        .filter(|f| !a.contains_flow(f) && !a.contains_flow(&f.inverse()));
    combine(a, b, admitted)
}

/// Stricter priority composite: a flow of `b` is dropped whenever both of
/// its endpoints are interfaces of `a`, so `b` can only add flows that touch
/// an interface `a` does not know.
pub fn append_strict(a: &CommonRepresentation, b: &CommonRepresentation) -> CommonRepresentation {
    let admitted = b
        .flows()
        .iter()
        .filter(|f| !(a.contains_interface(f.from()) && a.contains_interface(f.to())));
    combine(a, b, admitted)
}

fn combine<'a>(
    a: &'a CommonRepresentation,
    b: &CommonRepresentation,
    admitted: impl Iterator<Item = &'a Flow>,
) -> CommonRepresentation {
    CommonRepresentation::new(
        a.interfaces().union(b.interfaces()).cloned(),
        a.flows().iter().chain(admitted).cloned(),
    )
}

fn fold(
    crs: &[CommonRepresentation],
    op: fn(&CommonRepresentation, &CommonRepresentation) -> CommonRepresentation,
) -> Result<CommonRepresentation, EmptySequence> {
    let (first, rest) = crs.split_first().ok_or(EmptySequence)?;
    Ok(rest.iter().fold(first.clone(), |acc, cr| op(&acc, cr)))
}

/// Merge of every element. Order does not matter.
pub fn merge_all(crs: &[CommonRepresentation]) -> Result<CommonRepresentation, EmptySequence> {
    fold(crs, merge)
}

/// Left fold of [`append`]: earlier elements take priority.
pub fn append_all(crs: &[CommonRepresentation]) -> Result<CommonRepresentation, EmptySequence> {
    fold(crs, append)
}

pub fn append_strict_all(crs: &[CommonRepresentation]) -> Result<CommonRepresentation, EmptySequence> {
    fold(crs, append_strict)
}
