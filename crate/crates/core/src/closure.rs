//! Transitive closure of a relation over named elements, by Warshall's
//! algorithm on a dense boolean matrix.

use std::collections::{BTreeMap, BTreeSet};

/// Closed relation over a fixed universe of names.
#[derive(Debug, Clone)]
pub struct Closure {
    index: BTreeMap<String, usize>,
    names: Vec<String>,
    matrix: Vec<bool>,
}

impl Closure {
    /// Closes `pairs` transitively. Names in `pairs` that are not part of
    /// `universe` are added to it.
    pub fn transitive<'a>(
        universe: impl IntoIterator<Item = &'a str>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Self {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let mut index = BTreeMap::new();
        let mut names = Vec::new();
        let mut intern = |s: &str| -> usize {
            *index.entry(s.to_string()).or_insert_with(|| {
                names.push(s.to_string());
                names.len() - 1
            })
        };
        for u in universe {
            intern(u);
        }
        let edges: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (intern(a), intern(b))).collect();

        let n = names.len();
        let mut m = vec![false; n * n];
        for (a, b) in edges {
            m[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !m[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if m[k * n + j] {
                        m[i * n + j] = true;
                    }
                }
            }
        }
        Closure {
            index,
            names,
            matrix: m,
        }
    }

    fn idx(&self, s: &str) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains_name(&self, s: &str) -> bool {
        self.index.contains_key(s)
    }

    /// Whether `(a, b)` is in the transitive closure.
    pub fn related(&self, a: &str, b: &str) -> bool {
        match (self.idx(a), self.idx(b)) {
            (Some(i), Some(j)) => self.matrix[i * self.names.len() + j],
            _ => false,
        }
    }

    /// Whether `(a, b)` is in the reflexive-transitive closure.
    pub fn related_or_equal(&self, a: &str, b: &str) -> bool {
        (a == b && self.contains_name(a)) || self.related(a, b)
    }

    pub fn successors(&self, a: &str) -> BTreeSet<String> {
        let Some(i) = self.idx(a) else {
            return BTreeSet::new();
        };
        let n = self.names.len();
        (0..n)
            .filter(|&j| self.matrix[i * n + j])
            .map(|j| self.names[j].clone())
            .collect()
    }

    pub fn pairs(&self) -> BTreeSet<(String, String)> {
        let n = self.names.len();
        let mut out = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if self.matrix[i * n + j] {
                    out.insert((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        out
    }

    /// Elements lying on a cycle, i.e. related to themselves.
    pub fn cyclic(&self) -> Vec<String> {
        let n = self.names.len();
        (0..n)
            .filter(|&i| self.matrix[i * n + i])
            .map(|i| self.names[i].clone())
            .collect()
    }
}
