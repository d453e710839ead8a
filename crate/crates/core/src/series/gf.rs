//! Generating functions of branches: binary trees with a marked childless
//! vertex, counted by vertices other than the mark and sorted by the abscissa
//! of the mark.
//!
//! With `T = t(1 + T)²` the tree series, a branch is a left/right walk from
//! the root to the mark with a (possibly empty) tree hanging off the unused
//! side of every step. Walks returning to their start level are counted by
//! `B = (1 − 4y)^{−1/2}`, excursions by `U = y(1 + U)²`, and `y = tT` weights
//! the steps. The branch series of increment `i` is `H_i = B R^{|i|}` where
//! `R = t(1 + T)(1 + U)` satisfies `R² = U`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::series::Fps;
use crate::tree::enumerate_trees;

/// Largest truncation order accepted by the series solvers.
pub const SERIES_ORDER_CAP: usize = 512;

/// How steps of a branch are weighted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Substitution {
    /// `y = tT` with step ratio `R = t(1 + T)(1 + U)`. Matches direct enumeration.
    #[default]
    TreeWeight,
    /// `y = t(T − 1)` with step ratio `U`. Does not match direct enumeration;
    /// kept so the discrepancy can be exhibited.
    ShiftedTree,
}

/// `F = a (1 + F)²` for `a` with zero constant term, one coefficient at a time.
pub fn quadratic_fixed_point(a: &Fps) -> Result<Fps> {
    if !a.coeff(0).is_zero() {
        return Err(Error::InvalidArgument(
            "fixed point needs a zero constant term".into(),
        ));
    }
    let n = a.order();
    let mut f = vec![BigRational::zero(); n + 1];
    // sq[m] = [t^m] (1 + F)²
    let mut sq: Vec<BigRational> = Vec::with_capacity(n + 1);
    let c = |f: &[BigRational], i: usize| {
        if i == 0 {
            BigRational::one()
        } else {
            f[i].clone()
        }
    };
    for k in 0..=n {
        if k > 0 {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !a.coeff(j).is_zero() {
                    acc += a.coeff(j) * &sq[k - j];
                }
            }
            f[k] = acc;
        }
        let mut s = BigRational::zero();
        for i in 0..=k {
            s += c(&f, i) * c(&f, k - i);
        }
        sq.push(s);
    }
    Ok(Fps::from_coeffs(f))
}

/// The series `T`, `y`, `U`, `B` and the step ratio, truncated at a common order.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSystem {
    pub substitution: Substitution,
    /// Binary trees by vertices.
    pub trees: Fps,
    pub y: Fps,
    pub u: Fps,
    pub b: Fps,
    /// Ratio between consecutive branch series: `H_{i+1} = H_i · step` for `i ≥ 0`.
    pub step: Fps,
}

impl SeriesSystem {
    pub fn order(&self) -> usize {
        self.trees.order()
    }

    /// `H_i = B · step^{|i|}`.
    pub fn branch(&self, i: i64) -> Fps {
        &self.b * &self.step.pow(i.unsigned_abs() as u32)
    }

    /// `U − y(1 + U)²`, identically zero.
    pub fn u_residual(&self) -> Fps {
        let one = Fps::one(self.order());
        let w = &one + &self.u;
        &self.u - &(&self.y * &(&w * &w))
    }

    /// `B² (1 − 4y) − 1`, identically zero.
    pub fn b_residual(&self) -> Fps {
        let one = Fps::one(self.order());
        let four = BigRational::from_integer(4.into());
        let base = &one - &self.y.scale(&four);
        &(&(&self.b * &self.b) * &base) - &one
    }
}

/// Solves the system at truncation order `order`.
///
/// `T` comes from its fixed-point equation, `U` is solved as a series in `y`
/// and composed with `y(t)`, and `B` is computed as `(1 + U)/(1 − U)` and as
/// `(1 − 4y)^{−1/2}`; the two must agree.
pub fn solve_algebraic(order: usize, substitution: Substitution) -> Result<SeriesSystem> {
    check_cap("order", order as u64, SERIES_ORDER_CAP as u64, "")?;
    let one = Fps::one(order);
    let t = Fps::var(order);
    let trees = quadratic_fixed_point(&t)?;
    let y = match substitution {
        Substitution::TreeWeight => trees.shift(1),
        Substitution::ShiftedTree => (&trees - &one).shift(1),
    };
    let u = quadratic_fixed_point(&t)?.compose(&y)?;
    let b_ratio = &(&one + &u) * &(&one - &u).reciprocal()?;
    let four = BigRational::from_integer(4.into());
    let b_root = (&one - &y.scale(&four)).pow_rational(&BigRational::new((-1).into(), 2.into()))?;
    if b_ratio != b_root {
        return Err(Error::IdentityViolated(
            "(1 + U)/(1 − U) differs from (1 − 4y)^(-1/2)".into(),
        ));
    }
    let step = match substitution {
        Substitution::TreeWeight => {
            let r = (&(&one + &trees) * &(&one + &u)).shift(1);
            if &r * &r != u {
                return Err(Error::IdentityViolated(
                    "step ratio squared differs from U".into(),
                ));
            }
            r
        }
        Substitution::ShiftedTree => u.clone(),
    };
    let system = SeriesSystem {
        substitution,
        trees,
        y,
        u,
        b: b_root,
        step,
    };
    if !system.u_residual().is_zero() {
        return Err(Error::IdentityViolated("U − y(1 + U)² is not zero".into()));
    }
    Ok(system)
}

/// Branch series `H_i` at order `order` under the default substitution.
pub fn branch_gf(i: i64, order: usize) -> Result<Fps> {
    if i.unsigned_abs() as usize > order {
        return Err(Error::InvalidArgument(format!(
            "|i| = {} exceeds the order {order}",
            i.abs()
        )));
    }
    Ok(solve_algebraic(order, Substitution::TreeWeight)?.branch(i))
}

/// Largest `k` accepted by [`brute_branches`].
pub const BRUTE_BRANCH_CAP: usize = 12;

/// Number of pairs (binary tree with `k + 1` vertices, childless vertex at abscissa `i`).
pub fn brute_branches(i: i64, k: usize) -> Result<u64> {
    check_cap("k", k as u64, BRUTE_BRANCH_CAP as u64, "")?;
    let mut total = 0;
    for tree in enumerate_trees(k + 1)? {
        let x = tree.abscissas();
        total += (0..tree.size())
            .filter(|&v| x[v] == i && tree.left(v).is_none() && tree.right(v).is_none())
            .count() as u64;
    }
    Ok(total)
}

/// Position of a mark's parent abscissa `x` relative to `a, a + 1, b, b + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExternalCase {
    /// `x ≤ a`
    AtOrBelowA,
    /// `x = a + 1 ≤ b`
    JustAboveA,
    /// `a + 1 < x < b`
    Between,
    /// `x = b ≥ a + 1`
    AtB,
    /// `x ≥ b + 1`
    AboveB,
}

impl ExternalCase {
    pub const ALL: [ExternalCase; 5] = [
        ExternalCase::AtOrBelowA,
        ExternalCase::JustAboveA,
        ExternalCase::Between,
        ExternalCase::AtB,
        ExternalCase::AboveB,
    ];

    pub fn admits(self, a: i64, b: i64, x: i64) -> bool {
        b >= a
            && match self {
                ExternalCase::AtOrBelowA => x <= a,
                ExternalCase::JustAboveA => x == a + 1 && b > a,
                ExternalCase::Between => a + 1 < x && x < b,
                ExternalCase::AtB => x == b && b > a,
                ExternalCase::AboveB => x > b,
            }
    }
}

/// `Σ_{ε, ε' ∈ {0,1}} (−1)^{ε+ε'} H_{a + qε + ε' − x}` with `q = b − a`, checked against
/// the closed form of `case`:
///
/// | case | closed form |
/// |---|---|
/// | `x ≤ a` | `B(1 − R)R^{a−x}(1 − R^q)` |
/// | `x = a + 1` | `B(R − 1)(1 + R^{q−1})` |
/// | `a + 1 < x < b` | `B(R − 1)(R^{b−x} + R^{x−a−1})` |
/// | `x = b` | `B(R − 1)(1 + R^{q−1})` |
/// | `x ≥ b + 1` | `B(1 − R)R^{x−b−1}(1 − R^q)` |
///
/// where `R` is the step ratio of `system`.
pub fn external_edge_gf(
    system: &SeriesSystem,
    case: ExternalCase,
    a: i64,
    b: i64,
    x: i64,
) -> Result<Fps> {
    if !case.admits(a, b, x) {
        return Err(Error::InvalidArgument(format!(
            "(a, b, x) = ({a}, {b}, {x}) is not in case {case:?}"
        )));
    }
    let q = b - a;
    let n = system.order();
    let mut direct = Fps::zero(n);
    for (e, ep) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let h = system.branch(a + q * e + ep - x);
        direct = if (e + ep) % 2 == 0 {
            &direct + &h
        } else {
            &direct - &h
        };
    }
    let one = Fps::one(n);
    let r = &system.step;
    let rp = |k: i64| r.pow(k as u32);
    let one_minus_r = &one - r;
    let r_minus_one = r - &one;
    let closed = match case {
        ExternalCase::AtOrBelowA => &(&system.b * &one_minus_r) * &(&rp(a - x) * &(&one - &rp(q))),
        ExternalCase::JustAboveA | ExternalCase::AtB => {
            &(&system.b * &r_minus_one) * &(&one + &rp(q - 1))
        }
        ExternalCase::Between => &(&system.b * &r_minus_one) * &(&rp(b - x) + &rp(x - a - 1)),
        ExternalCase::AboveB => &(&system.b * &one_minus_r) * &(&rp(x - b - 1) * &(&one - &rp(q))),
    };
    if closed != direct {
        return Err(Error::IdentityViolated(format!(
            "signed branch sum differs from the closed form for {case:?} at (a, b, x) = ({a}, {b}, {x})"
        )));
    }
    Ok(direct)
}

/// `Σ_{x ≥ 1} H_x (H_{x−1} − H_x)²` in closed form `B³ R (1 − R)² / (1 − R³)`,
/// checked against the term-by-term sum.
pub fn fork_second_moment_gf(system: &SeriesSystem) -> Result<Fps> {
    let n = system.order();
    let one = Fps::one(n);
    let r = &system.step;
    let Some(val) = r.valuation() else {
        return Err(Error::InvalidArgument("step ratio is zero".into()));
    };
    if val == 0 {
        return Err(Error::InvalidArgument(
            "step ratio needs a zero constant term".into(),
        ));
    }
    let b = &system.b;
    let b3 = &(b * b) * b;
    let omr = &one - r;
    let closed = &(&(&b3 * r) * &(&omr * &omr)) * &(&one - &r.pow(3)).reciprocal()?;

    let mut direct = Fps::zero(n);
    let mut prev = b.clone();
    let mut x = 1usize;
    // the x-th term has valuation at least (3x − 2)·val
    while (3 * x - 2) * val <= n {
        let h = &prev * r;
        let d = &prev - &h;
        direct = &direct + &(&h * &(&d * &d));
        prev = h;
        x += 1;
    }
    if closed != direct {
        return Err(Error::IdentityViolated(
            "fork sum differs from its closed form".into(),
        ));
    }
    Ok(closed)
}

/// Local exponents of `1 − U` and `B` near `t = 1/4`, from a least-squares fit of
/// `log(1 − U)` and `log B` against `log(1 − 4t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PuiseuxProbe {
    pub x_min: f64,
    pub x_max: f64,
    pub one_minus_u_slope: f64,
    pub b_slope: f64,
}

/// `(1 − U, B)` at `t = (1 − x)/4` under `y = tT`, in a form free of cancellation
/// for small `x`: with `w = 1 − 4y = 2√x − x`, `1 − U = 2(√w − w)/(1 − w)` and `B = w^{−1/2}`.
pub fn closed_form_near_singularity(x: f64) -> (f64, f64) {
    let w = 2.0 * x.sqrt() - x;
    let sw = w.sqrt();
    (2.0 * (sw - w) / (1.0 - w), 1.0 / sw)
}

/// Fits the exponents over `points` log-spaced values of `x = 1 − 4t` in `[x_min, x_max]`.
pub fn puiseux_probe(x_min: f64, x_max: f64, points: usize) -> Result<PuiseuxProbe> {
    if !(0.0 < x_min && x_min < x_max && x_max < 1.0) || points < 2 {
        return Err(Error::InvalidArgument(
            "need 0 < x_min < x_max < 1 and at least two points".into(),
        ));
    }
    let (lo, hi) = (x_min.ln(), x_max.ln());
    let xs: Vec<f64> = (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect();
    let mut us = Vec::with_capacity(points);
    let mut bs = Vec::with_capacity(points);
    for &lx in &xs {
        let (omu, b) = closed_form_near_singularity(lx.exp());
        us.push(omu.ln());
        bs.push(b.ln());
    }
    Ok(PuiseuxProbe {
        x_min,
        x_max,
        one_minus_u_slope: slope(&xs, &us),
        b_slope: slope(&xs, &bs),
    })
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `[t^k] H_i` as an integer; `None` if the coefficient is not integral.
pub fn integer_coefficient(f: &Fps, k: usize) -> Option<BigInt> {
    let c = f.coeff(k);
    c.is_integer().then(|| c.numer().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: &Fps, upto: usize) -> Vec<i64> {
        use num_traits::ToPrimitive;
        (0..=upto)
            .map(|k| integer_coefficient(f, k).unwrap().to_i64().unwrap())
            .collect()
    }

    #[test]
    fn trees_are_catalan() {
        let s = solve_algebraic(12, Substitution::TreeWeight).unwrap();
        assert_eq!(ints(&s.trees, 8), [0, 1, 2, 5, 14, 42, 132, 429, 1430]);
        assert_eq!(ints(&s.u, 9), [0, 0, 1, 2, 7, 22, 75, 258, 908, 3236]);
        assert!(s.b_residual().is_zero());
    }

    #[test]
    fn branch_series_match_frozen_enumeration() {
        let s = solve_algebraic(8, Substitution::TreeWeight).unwrap();
        assert_eq!(ints(&s.branch(0), 8), [1, 0, 2, 4, 16, 52, 188, 672, 2458]);
        assert_eq!(ints(&s.branch(1), 8), [0, 1, 1, 5, 14, 51, 176, 637, 2315]);
        assert_eq!(ints(&s.branch(-2), 8), [0, 0, 1, 2, 9, 30, 113, 414, 1550]);
        assert_eq!(ints(&s.branch(3), 8), [0, 0, 0, 1, 3, 14, 53, 211, 819]);
    }

    #[test]
    fn shifted_substitution_differs() {
        let s = solve_algebraic(6, Substitution::ShiftedTree).unwrap();
        assert_eq!(ints(&s.branch(0), 3), [1, -2, 8, -28]);
    }

    #[test]
    fn brute_force_small_cases() {
        assert_eq!(brute_branches(0, 0).unwrap(), 1);
        assert_eq!(brute_branches(0, 2).unwrap(), 2);
        assert_eq!(brute_branches(1, 1).unwrap(), 1);
        assert_eq!(brute_branches(-3, 5).unwrap(), 14);
        assert!(brute_branches(0, 13).is_err());
    }

    #[test]
    fn external_edges() {
        let s = solve_algebraic(30, Substitution::TreeWeight).unwrap();
        // q = 0 telescopes to zero
        assert!(external_edge_gf(&s, ExternalCase::AtOrBelowA, 2, 2, 0)
            .unwrap()
            .is_zero());
        for (case, a, b, x) in [
            (ExternalCase::AtOrBelowA, 0, 1, 0),
            (ExternalCase::JustAboveA, 0, 1, 1),
            (ExternalCase::AtB, 0, 1, 1),
            (ExternalCase::Between, -1, 3, 1),
            (ExternalCase::AboveB, 1, 3, 6),
        ] {
            external_edge_gf(&s, case, a, b, x).unwrap();
        }
        assert!(external_edge_gf(&s, ExternalCase::Between, 0, 2, 1).is_err());
    }

    #[test]
    fn fork_identity() {
        let s = solve_algebraic(40, Substitution::TreeWeight).unwrap();
        assert!(!fork_second_moment_gf(&s).unwrap().is_zero());
    }

    #[test]
    fn puiseux_exponents() {
        let p = puiseux_probe(4e-12, 4e-10, 20).unwrap();
        assert!((p.one_minus_u_slope - 0.25).abs() < 0.02, "{p:?}");
        assert!((p.b_slope + 0.25).abs() < 0.02, "{p:?}");
    }
}
