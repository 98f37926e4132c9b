//! Conflict and difference analysis between two common representations.

use std::collections::BTreeSet;

use crate::cr::{CommonRepresentation, Flow};

/// Flows over interfaces shared by both graphs that exactly one of them
/// permits. Symmetric in its arguments.
pub fn conflicts(a: &CommonRepresentation, b: &CommonRepresentation) -> BTreeSet<Flow> {
    let shared = |f: &Flow| {
        a.contains_interface(f.from())
            && a.contains_interface(f.to())
            && b.contains_interface(f.from())
            && b.contains_interface(f.to())
    };
    a.flows()
        .symmetric_difference(b.flows())
        .filter(|f| shared(f))
        .cloned()
        .collect()
}

/// The conflicts that `a` permits and `b` denies.
pub fn one_sided_conflicts(a: &CommonRepresentation, b: &CommonRepresentation) -> BTreeSet<Flow> {
    conflicts(a, b)
        .into_iter()
        .filter(|f| a.contains_flow(f))
        .collect()
}

pub fn conflicting(a: &CommonRepresentation, b: &CommonRepresentation) -> bool {
    !conflicts(a, b).is_empty()
}

pub fn common_flows(a: &CommonRepresentation, b: &CommonRepresentation) -> BTreeSet<Flow> {
    a.flows().intersection(b.flows()).cloned().collect()
}

/// Symmetric difference of the flow sets, shared interfaces or not.
pub fn diffs(a: &CommonRepresentation, b: &CommonRepresentation) -> BTreeSet<Flow> {
    a.flows().symmetric_difference(b.flows()).cloned().collect()
}
