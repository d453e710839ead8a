//! Exact law of the vertical profile of a uniform binary tree.
//!
//! The number of binary trees with profile `(m_ℓ, …, m_r)` is
//!
//! ```text
//! m_0 · C(m_{−1} + m_1, m_0 − 1) / (m_ℓ · m_r) · Π_{i ≠ 0} C(m_{i−1} + m_{i+1} − 1, m_i − 1)
//! ```
//!
//! with `m_{ℓ−1} = m_{r+1} = 0` and `C(a, b) = 0` when `b > a`. Everything in
//! this module is exact integer or rational arithmetic.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::{binomial, Integer};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::path_law::{PathLaw, Triple};
use crate::tree::{catalan, VerticalProfile, ENUMERATION_CAP, FORMAT_VERSION};

fn choose(a: u64, b: u64) -> BigUint {
    if b > a {
        BigUint::zero()
    } else {
        binomial(BigUint::from(a), BigUint::from(b))
    }
}

/// Number of binary trees whose vertical profile is `p`.
pub fn count_profile(p: &VerticalProfile) -> Result<BigUint> {
    if p.ell() > 0 || p.r() < 0 {
        return Err(Error::InvalidProfile(format!(
            "{p} has no vertex at abscissa 0"
        )));
    }
    let m = |i: i64| p.m(i);
    let m0 = m(0);
    let mut num = BigUint::from(m0) * choose(m(-1) + m(1), m0 - 1);
    for i in p.ell()..=p.r() {
        if i == 0 || num.is_zero() {
            continue;
        }
        // Inside the support a neighbour towards 0 is present, so the top is at least 0.
        num *= choose(m(i - 1) + m(i + 1) - 1, m(i) - 1);
    }
    let den = BigUint::from(m(p.ell())) * BigUint::from(m(p.r()));
    let (q, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::NonIntegral(format!(
            "count of {p}: {num} is not divisible by m_ℓ·m_r = {den}"
        )));
    }
    Ok(q)
}

/// Every profile of an `n`-vertex binary tree with its number of trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileDistribution {
    n: u64,
    counts: BTreeMap<VerticalProfile, BigUint>,
    total: BigUint,
}

impl ProfileDistribution {
    pub fn new(n: u64) -> Result<Self> {
        Self::with_cap(n, ENUMERATION_CAP as u64)
    }

    /// Builds the distribution from the product formula alone, without
    /// enumerating trees. Returns an error if the total is not `Cat(n)`.
    pub fn with_cap(n: u64, cap: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        check_cap(
            "n",
            n,
            cap,
            " (the number of compositions grows like n·2^n)",
        )?;
        let mut counts = BTreeMap::new();
        let mut total = BigUint::zero();
        let mut parts = Vec::with_capacity(n as usize);
        let mut err = None;
        compositions(n, &mut parts, &mut |parts| {
            for zero_at in 0..parts.len() {
                let p = VerticalProfile::new(-(zero_at as i64), parts.to_vec())
                    .expect("compositions have positive parts");
                match count_profile(&p) {
                    Ok(c) if c.is_zero() => {}
                    Ok(c) => {
                        total += &c;
                        counts.insert(p, c);
                    }
                    Err(e) => err = Some(e),
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if n <= 35 && total != BigUint::from(catalan(n)) {
            return Err(Error::IdentityViolated(format!(
                "profile counts for n = {n} sum to {total}, not Cat(n) = {}",
                catalan(n)
            )));
        }
        Ok(ProfileDistribution { n, counts, total })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, p: &VerticalProfile) -> BigUint {
        self.counts.get(p).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VerticalProfile, &BigUint)> {
        self.counts.iter()
    }

    /// JSON object `{"format_version", "n", "total", "profiles": {key: count}}`
    /// with keys `ℓ:r:m_ℓ,…,m_r` and counts as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let profiles: serde_json::Map<String, serde_json::Value> = self
            .counts
            .iter()
            .map(|(p, c)| (p.key(), serde_json::Value::String(c.to_string())))
            .collect();
        serde_json::json!({
            "format_version": FORMAT_VERSION,
            "n": self.n,
            "total": self.total.to_string(),
            "profiles": profiles,
        })
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, &self.to_json())?;
        Ok(())
    }

    /// Law of `(Z_{k1}, …, Z_{k2})` given `Z_{k1} = z1` and `Z_{k2} = z2`.
    pub fn conditional_path_law(&self, bc: &BoundaryCondition) -> Result<PathLaw> {
        bc.validate()?;
        let mut weights: BTreeMap<Vec<Triple>, BigInt> = BTreeMap::new();
        if bc.is_null(self.n) {
            return Ok(PathLaw::empty(bc.k1));
        }
        for (p, c) in &self.counts {
            if p.ell() > bc.k1.min(0) || p.r() < bc.k2.max(0) {
                continue;
            }
            let path = p.triple(bc.k1, bc.k2)?;
            let pts = path.points();
            if pts[0] == bc.z1 && pts[pts.len() - 1] == bc.z2 {
                *weights.entry(pts.to_vec()).or_default() += BigInt::from(c.clone());
            }
        }
        Ok(PathLaw::from_weights(bc.k1, weights))
    }

    /// All boundary conditions on windows `lo ≤ k1 < k2 ≤ hi` that have positive
    /// probability, where `hi` ranges up to the right end of each profile.
    pub fn positive_boundaries(&self, lo: i64) -> Vec<BoundaryCondition> {
        let mut seen = std::collections::BTreeSet::new();
        for p in self.counts.keys() {
            if p.r() < lo {
                continue;
            }
            let path = p.triple(lo, p.r()).expect("window is nonempty");
            let pts = path.points();
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    seen.insert((lo + a as i64, lo + b as i64, pts[a], pts[b]));
                }
            }
        }
        seen.into_iter()
            .map(|(k1, k2, z1, z2)| BoundaryCondition { k1, k2, z1, z2 })
            .collect()
    }
}

fn compositions(rest: u64, parts: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
    if rest == 0 {
        visit(parts);
        return;
    }
    for first in 1..=rest {
        parts.push(first);
        compositions(rest - first, parts, visit);
        parts.pop();
    }
}

pub fn profile_distribution(n: u64) -> Result<ProfileDistribution> {
    ProfileDistribution::new(n)
}

/// Prescribed triples at two abscissas on the same side of the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub k1: i64,
    pub k2: i64,
    pub z1: Triple,
    pub z2: Triple,
}

impl BoundaryCondition {
    /// Rejects windows that are empty or touch 0, and non-positive `m`.
    pub fn validate(&self) -> Result<()> {
        if self.k1 >= self.k2 {
            return Err(Error::InvalidArgument(format!(
                "need k1 < k2, got [{}, {}]",
                self.k1, self.k2
            )));
        }
        if self.k1 <= 0 && self.k2 >= 0 {
            return Err(Error::InvalidArgument(format!(
                "window [{}, {}] contains the root abscissa",
                self.k1, self.k2
            )));
        }
        if self.z1.m <= 0 || self.z2.m <= 0 {
            return Err(Error::InvalidArgument(
                "boundary profile values must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Conditions that no tree of size `n` can meet for simple reasons.
    pub fn is_null(&self, n: u64) -> bool {
        let n = n as i64;
        self.z2.s < self.z1.s || !(0..=n).contains(&self.z1.s) || !(0..=n).contains(&self.z2.s)
    }
}

/// Law of the triple between `bc.k1` and `bc.k2` for a uniform tree with `n`
/// vertices, conditioned on the boundary values. Empty when the event is null.
pub fn conditional_path_law(n: u64, bc: &BoundaryCondition) -> Result<PathLaw> {
    ProfileDistribution::new(n)?.conditional_path_law(bc)
}

/// `Σ_p count(p)` using the product formula only. Equals `Cat(n)`.
pub fn total_count(n: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    let mut parts = Vec::new();
    let mut err = None;
    compositions(n, &mut parts, &mut |parts| {
        for zero_at in 0..parts.len() {
            let p =
                VerticalProfile::new(-(zero_at as i64), parts.to_vec()).expect("positive parts");
            match count_profile(&p) {
                Ok(c) => total += c,
                Err(e) => err = Some(e),
            }
        }
    });
    err.map_or(Ok(total), Err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn count(key: &str) -> BigUint {
        count_profile(&key.parse().unwrap()).unwrap()
    }

    #[test]
    fn worked_profiles() {
        assert_eq!(count("(1,1;3,1)"), BigUint::from(3u32));
        assert_eq!(count("(;1,1,2,1,1)"), BigUint::from(1u32));
        assert_eq!(count("(;1)"), BigUint::from(1u32));
    }

    #[test]
    fn n_equals_two() {
        let d = profile_distribution(2).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.count(&"(;1,1)".parse().unwrap()), BigUint::one());
        assert_eq!(d.count(&"(1;1)".parse().unwrap()), BigUint::one());
    }

    #[test]
    fn totals_are_catalan() {
        let distinct = [1, 2, 5, 11, 24, 52, 108, 225];
        for n in 1..=8u64 {
            let d = profile_distribution(n).unwrap();
            assert_eq!(d.total(), &BigUint::from(catalan(n)));
            assert_eq!(d.len(), distinct[n as usize - 1]);
        }
        assert_eq!(total_count(12).unwrap(), BigUint::from(catalan(12)));
    }

    #[test]
    fn mirror_symmetry() {
        let d = profile_distribution(7).unwrap();
        for (p, c) in d.iter() {
            assert_eq!(&d.count(&p.mirror()), c);
        }
    }

    #[test]
    fn json_keys() {
        let j = profile_distribution(2).unwrap().to_json();
        assert_eq!(j["total"], "2");
        assert_eq!(j["profiles"]["-1:0:1,1"], "1");
        assert_eq!(j["profiles"]["0:1:1,1"], "1");
    }

    #[test]
    fn degenerate_window_is_forced() {
        let bc = BoundaryCondition {
            k1: 1,
            k2: 2,
            z1: Triple::new(0, 1, 3),
            z2: Triple::new(0, 1, 4),
        };
        let law = conditional_path_law(5, &bc).unwrap();
        assert_eq!(law.len(), 1);
        assert!(law.is_normalized());
    }

    #[test]
    fn impossible_boundary_gives_empty_law() {
        let bc = BoundaryCondition {
            k1: 1,
            k2: 3,
            z1: Triple::new(0, 1, 5),
            z2: Triple::new(0, 1, 4),
        };
        assert!(conditional_path_law(6, &bc).unwrap().is_empty());
    }

    #[test]
    fn boundary_validation() {
        let z = Triple::new(0, 1, 1);
        let bad = [
            BoundaryCondition {
                k1: 2,
                k2: 2,
                z1: z,
                z2: z,
            },
            BoundaryCondition {
                k1: -1,
                k2: 1,
                z1: z,
                z2: z,
            },
            BoundaryCondition {
                k1: 1,
                k2: 2,
                z1: Triple::new(0, 0, 1),
                z2: z,
            },
        ];
        for bc in bad {
            assert!(bc.validate().is_err());
        }
    }
}
