//! Integer triples `(Δ, M, S)` and exact laws over sequences of them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// One point `(Δ_i, M_i, S_i)` of a triple path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub delta: i64,
    pub m: i64,
    pub s: i64,
}

impl Triple {
    pub const fn new(delta: i64, m: i64, s: i64) -> Self {
        Triple { delta, m, s }
    }

    /// The unique successor with derivative `delta_next`: `M' = M + Δ'`, `S' = S + M'`.
    pub const fn cascade(&self, delta_next: i64) -> Triple {
        let m = self.m + delta_next;
        Triple {
            delta: delta_next,
            m,
            s: self.s + m,
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.delta, self.m, self.s)
    }
}

/// Finite law over triple paths on the index window `[start, start + len - 1]`.
///
/// An empty law is the answer to conditioning on a null event.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathLaw {
    start: i64,
    paths: BTreeMap<Vec<Triple>, BigRational>,
}

impl PathLaw {
    pub fn empty(start: i64) -> Self {
        PathLaw {
            start,
            paths: BTreeMap::new(),
        }
    }

    /// Normalizes nonnegative integer weights into probabilities.
    pub fn from_weights(start: i64, weights: BTreeMap<Vec<Triple>, BigInt>) -> Self {
        let total: BigInt = weights.values().sum();
        if total.is_zero() {
            return PathLaw::empty(start);
        }
        let paths = weights
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(p, w)| (p, BigRational::new(w, total.clone())))
            .collect();
        PathLaw { start, paths }
    }

    pub(crate) fn from_probabilities(
        start: i64,
        paths: BTreeMap<Vec<Triple>, BigRational>,
    ) -> Self {
        PathLaw { start, paths }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn probability(&self, path: &[Triple]) -> BigRational {
        self.paths
            .get(path)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.paths
            .values()
            .fold(BigRational::zero(), |acc, p| acc + p)
    }

    /// `true` when the probabilities sum to exactly one.
    pub fn is_normalized(&self) -> bool {
        self.total().is_one()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Triple>, &BigRational)> {
        self.paths.iter()
    }
}
