use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path_law::Triple;
use crate::tree::BinaryTree;

/// Version tag written as the first line of every CSV export.
pub const FORMAT_VERSION: u32 = 1;

/// Occupation counts `m_ℓ, …, m_r` of a binary tree by abscissa.
///
/// All counts on the support `[ℓ, r]` are positive and the support contains
/// 0 (the root), except for translated profiles, see [`VerticalProfile::translate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VerticalProfile {
    ell: i64,
    counts: Vec<u64>,
    n: u64,
}

impl VerticalProfile {
    /// Validates a profile of a tree: `ℓ ≤ 0 ≤ r` and every count positive.
    pub fn new(ell: i64, counts: Vec<u64>) -> Result<Self> {
        let p = Self::new_shifted(ell, counts)?;
        if ell > 0 || p.r() < 0 {
            return Err(Error::InvalidProfile(format!(
                "support [{}, {}] does not contain the root abscissa 0",
                ell,
                p.r()
            )));
        }
        Ok(p)
    }

    /// Like [`new`](Self::new) without requiring the support to contain 0.
    pub fn new_shifted(ell: i64, counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidProfile("empty support".into()));
        }
        if let Some(i) = counts.iter().position(|&m| m == 0) {
            return Err(Error::InvalidProfile(format!(
                "count at abscissa {} is zero; the support of a tree profile is an interval",
                ell + i as i64
            )));
        }
        let n = counts.iter().sum();
        Ok(VerticalProfile { ell, counts, n })
    }

    /// The profile of the single vertex, `(;1)`.
    pub fn single() -> Self {
        VerticalProfile {
            ell: 0,
            counts: vec![1],
            n: 1,
        }
    }

    pub fn of_tree(tree: &BinaryTree) -> Self {
        let x = tree.abscissas();
        let ell = *x.iter().min().expect("a tree is nonempty");
        let r = *x.iter().max().expect("a tree is nonempty");
        let mut counts = vec![0u64; (r - ell + 1) as usize];
        for a in x {
            counts[(a - ell) as usize] += 1;
        }
        VerticalProfile {
            ell,
            counts,
            n: tree.size() as u64,
        }
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn r(&self) -> i64 {
        self.ell + self.counts.len() as i64 - 1
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `m_ℓ, …, m_r`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `M_i`, zero outside the support.
    pub fn m(&self, i: i64) -> u64 {
        if i < self.ell || i > self.r() {
            0
        } else {
            self.counts[(i - self.ell) as usize]
        }
    }

    pub fn width(&self) -> usize {
        self.counts.len()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Shifts the support so that it starts at 0; the counts are unchanged.
    pub fn translate(&self) -> VerticalProfile {
        VerticalProfile {
            ell: 0,
            counts: self.counts.clone(),
            n: self.n,
        }
    }

    /// The profile of the mirrored tree.
    pub fn mirror(&self) -> VerticalProfile {
        let mut counts = self.counts.clone();
        counts.reverse();
        VerticalProfile {
            ell: -self.r(),
            counts,
            n: self.n,
        }
    }

    /// `(Δ_i, M_i, S_i)` for `i` in `[a, b]`, with `Δ_i = M_i − M_{i−1}` and `S_i = Σ_{j ≤ i} M_j`.
    pub fn triple(&self, a: i64, b: i64) -> Result<TriplePath> {
        if a > b {
            return Err(Error::InvalidArgument(format!("empty window [{a}, {b}]")));
        }
        let mut s: i64 = (self.ell..a).map(|j| self.m(j) as i64).sum();
        let mut prev = self.m(a - 1) as i64;
        let points = (a..=b)
            .map(|i| {
                let m = self.m(i) as i64;
                s += m;
                let z = Triple::new(m - prev, m, s);
                prev = m;
                z
            })
            .collect();
        Ok(TriplePath { start: a, points })
    }

    /// Triple on the support `[ℓ, r]`.
    pub fn triple_on_support(&self) -> TriplePath {
        self.triple(self.ell, self.r())
            .expect("support is a nonempty window")
    }

    /// Canonical text key `ℓ:r:m_ℓ,…,m_r`, e.g. `-2:1:1,1,3,1`.
    pub fn key(&self) -> String {
        let counts: Vec<String> = self.counts.iter().map(u64::to_string).collect();
        format!("{}:{}:{}", self.ell, self.r(), counts.join(","))
    }

    /// Writes `i,delta,m,s` rows for the support.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        self.triple_on_support().write_csv(out)
    }
}

/// `(m_ℓ,…,m_{-1};m_0,…,m_r)`: the semicolon sits just before abscissa 0.
impl fmt::Display for VerticalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        if self.ell <= 0 && self.r() >= 0 {
            let split = (-self.ell) as usize;
            write!(
                f,
                "({};{})",
                join(&self.counts[..split]),
                join(&self.counts[split..])
            )
        } else {
            write!(f, "[{}]@{}", join(&self.counts), self.ell)
        }
    }
}

impl FromStr for VerticalProfile {
    type Err = Error;

    /// Accepts the key form `ℓ:r:m_ℓ,…,m_r` (a Unicode minus is allowed) and
    /// the display form `(m_ℓ,…;m_0,…,m_r)`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim().replace('\u{2212}', "-");
        let parse_counts = |s: &str| -> Result<Vec<u64>> {
            if s.trim().is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|c| {
                    c.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::InvalidProfile(format!("bad count {c:?}")))
                })
                .collect()
        };
        if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let (left, right) = inner.split_once(';').ok_or_else(|| {
                Error::InvalidProfile("display form needs ';' before abscissa 0".into())
            })?;
            let mut counts = parse_counts(left)?;
            let ell = -(counts.len() as i64);
            counts.extend(parse_counts(right)?);
            return VerticalProfile::new(ell, counts);
        }
        let mut parts = text.splitn(3, ':');
        let (Some(l), Some(r), Some(ms)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::InvalidProfile(format!(
                "expected ℓ:r:counts, got {text:?}"
            )));
        };
        let int = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidProfile(format!("bad abscissa {s:?}")))
        };
        let (ell, r) = (int(l)?, int(r)?);
        let counts = parse_counts(ms)?;
        if r - ell + 1 != counts.len() as i64 {
            return Err(Error::InvalidProfile(format!(
                "support [{ell}, {r}] needs {} counts, got {}",
                r - ell + 1,
                counts.len()
            )));
        }
        VerticalProfile::new(ell, counts)
    }
}

/// Integer triples `(Δ_i, M_i, S_i)` on a window of consecutive abscissas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriplePath {
    start: i64,
    points: Vec<Triple>,
}

impl TriplePath {
    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.points.len() as i64 - 1
    }

    pub fn points(&self) -> &[Triple] {
        &self.points
    }

    pub fn at(&self, i: i64) -> Option<Triple> {
        if i < self.start {
            return None;
        }
        self.points.get((i - self.start) as usize).copied()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# format_version: {FORMAT_VERSION}")?;
        writeln!(out, "i,delta,m,s")?;
        for (k, z) in self.points.iter().enumerate() {
            writeln!(out, "{},{},{},{}", self.start + k as i64, z.delta, z.m, z.s)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_left() -> VerticalProfile {
        VerticalProfile::new(-2, vec![1, 1, 3, 1]).unwrap()
    }

    #[test]
    fn display_and_key() {
        assert_eq!(worked_left().to_string(), "(1,1;3,1)");
        assert_eq!(worked_left().key(), "-2:1:1,1,3,1");
        assert_eq!(VerticalProfile::single().to_string(), "(;1)");
        let right = VerticalProfile::new(0, vec![1, 1, 2, 1, 1]).unwrap();
        assert_eq!(right.to_string(), "(;1,1,2,1,1)");
    }

    #[test]
    fn parse_both_forms() {
        let p: VerticalProfile = "\u{2212}2:1:1,1,3,1".parse().unwrap();
        assert_eq!(p, worked_left());
        let q: VerticalProfile = "(1,1;3,1)".parse().unwrap();
        assert_eq!(q, worked_left());
        let s: VerticalProfile = "(;1)".parse().unwrap();
        assert_eq!(s, VerticalProfile::single());
        assert!("0:1:1".parse::<VerticalProfile>().is_err());
        assert!("1:2:1,1".parse::<VerticalProfile>().is_err());
        assert!("(1,0;1)".parse::<VerticalProfile>().is_err());
    }

    #[test]
    fn triple_of_worked_right_profile() {
        let p = VerticalProfile::new(0, vec![1, 1, 2, 1, 1]).unwrap();
        let t = p.triple(0, 4).unwrap();
        let d: Vec<i64> = t.points().iter().map(|z| z.delta).collect();
        let m: Vec<i64> = t.points().iter().map(|z| z.m).collect();
        let s: Vec<i64> = t.points().iter().map(|z| z.s).collect();
        assert_eq!(d, [1, 0, 1, -1, 0]);
        assert_eq!(m, [1, 1, 2, 1, 1]);
        assert_eq!(s, [1, 2, 4, 5, 6]);
    }

    #[test]
    fn triple_outside_support() {
        let p = worked_left();
        let left = p.triple(-9, -4).unwrap();
        assert!(left.points().iter().all(|z| *z == Triple::new(0, 0, 0)));
        let right = p.triple(3, 5).unwrap();
        assert!(right.points().iter().all(|z| *z == Triple::new(0, 0, 6)));
        assert_eq!(p.triple(2, 2).unwrap().points()[0], Triple::new(-1, 0, 6));
        assert!(p.triple(1, 0).is_err());
    }

    #[test]
    fn translate_and_mirror() {
        let t = worked_left().translate();
        assert_eq!((t.ell(), t.r()), (0, 3));
        assert_eq!(t.counts(), &[1, 1, 3, 1]);
        assert_eq!(t.translate(), t);
        assert_eq!(worked_left().mirror().to_string(), "(1;3,1,1)");
    }

    #[test]
    fn csv_single_vertex() {
        let mut buf = Vec::new();
        VerticalProfile::single().write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# format_version: 1\ni,delta,m,s\n0,1,1,1\n"
        );
    }
}
