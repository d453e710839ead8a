//! Exact finite-n moments of linear combinations of the profile.
//!
//! A moment `E[(Σ_j c_j M_{x_j})^p]` is computed two ways: by expanding the
//! power into ordered mark tuples weighted by marked counts from an
//! enumeration census, and by summing over the product-formula profile law.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::profile_law::ProfileDistribution;
use crate::tree::{catalan, enumerate_trees, VerticalProfile};

pub const MOMENT_N_CAP: u64 = 14;
pub const MOMENT_P_CAP: u32 = 6;

/// Multiplicity of every profile among the binary trees of a given size, by enumeration.
#[derive(Clone, Debug)]
pub struct TreeCensus {
    n: u64,
    profiles: Vec<(VerticalProfile, u128)>,
}

impl TreeCensus {
    pub fn new(n: u64) -> Result<Self> {
        check_cap("n", n, MOMENT_N_CAP, "census enumerates every tree")?;
        let mut groups: BTreeMap<VerticalProfile, u128> = BTreeMap::new();
        for tree in enumerate_trees(n as usize)? {
            *groups.entry(VerticalProfile::of_tree(&tree)).or_default() += 1;
        }
        Ok(TreeCensus {
            n,
            profiles: groups.into_iter().collect(),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn profiles(&self) -> &[(VerticalProfile, u128)] {
        &self.profiles
    }

    /// Number of trees with `marks.len()` numbered vertices, the `j`-th at abscissa `marks[j]`.
    pub fn marked_count(&self, marks: &[i64]) -> u128 {
        self.profiles
            .iter()
            .map(|(p, c)| marks.iter().fold(*c, |acc, &x| acc * p.m(x) as u128))
            .sum()
    }
}

/// Trees with numbered, possibly coinciding, marked vertices at prescribed abscissas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedCount {
    pub n: u64,
    pub marks: Vec<i64>,
    pub value: BigUint,
}

pub fn marked_count(n: u64, marks: &[i64]) -> Result<MarkedCount> {
    check_cap("marks", marks.len() as u64, MOMENT_P_CAP as u64, "")?;
    let census = TreeCensus::new(n)?;
    Ok(MarkedCount {
        n,
        marks: marks.to_vec(),
        value: BigUint::from(census.marked_count(marks)),
    })
}

/// A linear combination `Σ c_j M_{x_j}` of profile values, stored as `(x_j, c_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedMarks(pub Vec<(i64, i64)>);

impl SignedMarks {
    /// `Δ_{b+1} − Δ_{a+1} = M_a − M_{a+1} − M_b + M_{b+1}`.
    pub fn increment_difference(a: i64, b: i64) -> Self {
        SignedMarks(vec![(a, 1), (a + 1, -1), (b, -1), (b + 1, 1)])
    }

    /// `Δ_i = M_i − M_{i−1}`.
    pub fn increment(i: i64) -> Self {
        SignedMarks(vec![(i - 1, -1), (i, 1)])
    }

    pub fn evaluate(&self, p: &VerticalProfile) -> i64 {
        self.0.iter().map(|&(x, c)| c * p.m(x) as i64).sum()
    }
}

/// `Σ_trees (Σ c_j M_{x_j})^p` by expanding into `len^p` ordered mark tuples.
pub fn signed_moment_by_marks(census: &TreeCensus, marks: &SignedMarks, p: u32) -> Result<BigInt> {
    check_cap("p", p as u64, MOMENT_P_CAP as u64, "")?;
    let k = marks.0.len();
    let mut total = BigInt::zero();
    let mut idx = vec![0usize; p as usize];
    let mut xs = vec![0i64; p as usize];
    loop {
        let mut coef = 1i64;
        for (slot, &j) in idx.iter().enumerate() {
            let (x, c) = marks.0[j];
            coef *= c;
            xs[slot] = x;
        }
        if coef != 0 {
            total += BigInt::from(coef) * BigInt::from(census.marked_count(&xs));
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(total);
            }
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if k == 0 {
            return Ok(total);
        }
    }
}

/// `Σ_trees (Σ c_j M_{x_j})^p` from the product-formula profile law.
pub fn signed_moment_by_profiles(
    dist: &ProfileDistribution,
    marks: &SignedMarks,
    p: u32,
) -> Result<BigInt> {
    check_cap("p", p as u64, MOMENT_P_CAP as u64, "")?;
    Ok(dist
        .iter()
        .map(|(prof, c)| BigInt::from(c.clone()) * BigInt::from(marks.evaluate(prof)).pow(p))
        .sum())
}

fn expectation(count: BigInt, n: u64) -> BigRational {
    BigRational::new(count, BigInt::from(catalan(n)))
}

/// `E[(Δ_{b+1} − Δ_{a+1})^p]` over uniform binary trees with `n` vertices.
///
/// Both routes are evaluated and must agree.
pub fn moment_exact(n: u64, p: u32, a: i64, b: i64) -> Result<BigRational> {
    let marks = SignedMarks::increment_difference(a, b);
    let census = TreeCensus::new(n)?;
    let dist = ProfileDistribution::new(n)?;
    combination_moment(&census, &dist, &marks, p)
}

/// `E[Δ_i^p]` over uniform binary trees with `n` vertices, checked two ways.
pub fn increment_moment(n: u64, p: u32, i: i64) -> Result<BigRational> {
    let census = TreeCensus::new(n)?;
    let dist = ProfileDistribution::new(n)?;
    combination_moment(&census, &dist, &SignedMarks::increment(i), p)
}

/// Expectation of `(Σ c_j M_{x_j})^p` computed by both routes; disagreement is an error.
pub fn combination_moment(
    census: &TreeCensus,
    dist: &ProfileDistribution,
    marks: &SignedMarks,
    p: u32,
) -> Result<BigRational> {
    if census.n() != dist.n() {
        return Err(Error::InvalidArgument(
            "census and profile law have different sizes".into(),
        ));
    }
    let by_marks = signed_moment_by_marks(census, marks, p)?;
    let by_profiles = signed_moment_by_profiles(dist, marks, p)?;
    if by_marks != by_profiles {
        return Err(Error::IdentityViolated(format!(
            "moment of {marks:?} at p = {p}: {by_marks} by marks, {by_profiles} by profiles"
        )));
    }
    Ok(expectation(by_marks, census.n()))
}

/// One row of an exact moment grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentRow {
    pub n: u64,
    pub p: u32,
    pub a: i64,
    pub b: i64,
    pub value: BigRational,
}

/// `E[(Δ_{b+1} − Δ_{a+1})^p]` for every `(a, b)` in `pairs`, evaluated in parallel.
pub fn moment_grid(n: u64, p: u32, pairs: &[(i64, i64)]) -> Result<Vec<MomentRow>> {
    let census = TreeCensus::new(n)?;
    let dist = ProfileDistribution::new(n)?;
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let value =
                combination_moment(&census, &dist, &SignedMarks::increment_difference(a, b), p)?;
            Ok(MomentRow { n, p, a, b, value })
        })
        .collect()
}

pub fn write_moment_grid<W: Write>(mut out: W, rows: &[MomentRow]) -> Result<()> {
    writeln!(out, "# format_version: 1")?;
    writeln!(out, "n,p,a,b,value_num,value_den")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.p,
            r.a,
            r.b,
            r.value.numer(),
            r.value.denom()
        )?;
    }
    Ok(())
}

/// Largest value of `E[(Δ_{b+1} − Δ_{a+1})^4] / n² ÷ ((b − a)/n^{1/4})²` over a grid of rows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundFit {
    pub constant: f64,
    pub n: u64,
    pub a: i64,
    pub b: i64,
}

/// Every `(a, b)` with `1 ≤ b − a ≤ n^{1/4}` whose increments can be nonzero.
pub fn bound_pairs(n: u64) -> Vec<(i64, i64)> {
    let reach = n as i64;
    let max_gap = (n as f64).powf(0.25).floor() as i64;
    let mut pairs = Vec::new();
    for a in -reach - 1..reach {
        for q in 1..=max_gap {
            pairs.push((a, a + q));
        }
    }
    pairs
}

/// Smallest `C` with `E[((Δ_{b+1} − Δ_{a+1})/√n)^p] ≤ C ((b − a)/n^{1/4})^{p/2}` over `rows`.
pub fn fit_moment_bound(rows: &[MomentRow]) -> Option<BoundFit> {
    rows.iter()
        .filter(|r| r.b != r.a)
        .map(|r| {
            let n = r.n as f64;
            let lhs = ratio_f64(&r.value) / n.powf(r.p as f64 / 2.0);
            let gap = (r.b - r.a).abs() as f64 / n.powf(0.25);
            BoundFit {
                constant: lhs.abs() / gap.powf(r.p as f64 / 2.0),
                n: r.n,
                a: r.a,
                b: r.b,
            }
        })
        .max_by(|x, y| x.constant.total_cmp(&y.constant))
}

/// Both sides of `E[((Δ_{a+1} − Δ_{b+1})/√n)^{2r}] ≈ (2r − 1)!! μ^r E[(2M_a/n^{3/4})^r]`,
/// `μ = (b − a) n^{−1/4}`.
///
/// The powers of `n` cancel so `lhs`, `rhs` and `ratio` are exact. The
/// approximation is only expected for small `μ`; no upper bound on `μ` is enforced.
#[derive(Clone, Debug, PartialEq)]
pub struct SmallGapReport {
    pub n: u64,
    pub r: u32,
    pub a: i64,
    pub b: i64,
    pub mu: f64,
    /// `E[(Δ_{a+1} − Δ_{b+1})^{2r}] / n^r`
    pub lhs: BigRational,
    /// `(2r − 1)!! (b − a)^r 2^r E[M_a^r] / n^r`
    pub rhs: BigRational,
    /// `None` when the right side vanishes.
    pub ratio: Option<BigRational>,
}

impl SmallGapReport {
    pub fn ratio_f64(&self) -> Option<f64> {
        self.ratio.as_ref().map(ratio_f64)
    }
}

pub fn small_gap_check(n: u64, r: u32, a: i64, b: i64) -> Result<SmallGapReport> {
    if !(1..=2).contains(&r) {
        return Err(Error::InvalidArgument(format!("r must be 1 or 2, got {r}")));
    }
    check_cap("n", n, 12, "")?;
    if b < a {
        return Err(Error::InvalidArgument("need a ≤ b".into()));
    }
    let census = TreeCensus::new(n)?;
    let dist = ProfileDistribution::new(n)?;
    let n_r = BigRational::from_integer(BigInt::from(n).pow(r));
    let lhs = combination_moment(
        &census,
        &dist,
        &SignedMarks::increment_difference(a, b),
        2 * r,
    )? / &n_r;
    let m_r = combination_moment(&census, &dist, &SignedMarks(vec![(a, 1)]), r)?;
    let double_factorial: i64 = (1..=2 * r as i64 - 1).step_by(2).product();
    let q = b - a;
    let scale = BigInt::from(double_factorial) * BigInt::from(q).pow(r) * BigInt::from(2).pow(r);
    let rhs = m_r * BigRational::from_integer(scale) / n_r;
    let ratio = (!rhs.is_zero()).then(|| &lhs / &rhs);
    Ok(SmallGapReport {
        n,
        r,
        a,
        b,
        mu: q as f64 / (n as f64).powf(0.25),
        lhs,
        rhs,
        ratio,
    })
}

/// Smallest `C` with `|ratio − 1| ≤ C(μ + n^{−1/8})` over the reports with a defined ratio.
pub fn fit_small_gap_constant(reports: &[SmallGapReport]) -> Option<f64> {
    reports
        .iter()
        .filter_map(|rep| {
            let ratio = rep.ratio_f64()?;
            Some((ratio - 1.0).abs() / (rep.mu + (rep.n as f64).powf(-0.125)))
        })
        .max_by(f64::total_cmp)
}

pub(crate) fn ratio_f64(x: &BigRational) -> f64 {
    // Scale down both sides so huge numerators and denominators stay finite.
    let (num, den) = (x.numer(), x.denom());
    let shift = num.bits().max(den.bits()).saturating_sub(900);
    let num = (num.abs() >> shift).to_f64().unwrap_or(f64::NAN)
        * if num.is_negative() { -1.0 } else { 1.0 };
    let den = (den >> shift).to_f64().unwrap_or(f64::NAN);
    num / den
}
