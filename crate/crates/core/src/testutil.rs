use std::collections::BTreeSet;

use crate::cr::{CommonRepresentation, Flow, InterfaceId};

pub fn i(name: &str) -> InterfaceId {
    InterfaceId::implicit(name, "x")
}

pub fn f(a: &str, b: &str) -> Flow {
    Flow::new(i(a), i(b)).unwrap()
}

pub fn flows(v: &[(&str, &str)]) -> BTreeSet<Flow> {
    v.iter().map(|(a, b)| f(a, b)).collect()
}

pub fn cr(is: &[&str], fs: &[(&str, &str)]) -> CommonRepresentation {
    CommonRepresentation::new(is.iter().map(|n| i(n)), fs.iter().map(|(a, b)| f(a, b)))
}
