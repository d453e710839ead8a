//! Verification gates, grouped into suites, with pinned thresholds and runtime budgets.
//!
//! Every gate returns a [`GateOutcome`]; a gate passes when its check holds and
//! it finished within its budget. The `full` level runs the gates at their
//! stated sizes, `fast` at reduced sizes for a quick smoke run.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::companion::{conditional_path_law_dp, sample_increment, step_pmf};
use crate::diffusion::{compare_chain_to_diffusion, ComparisonConfig, Coordinate, Reference};
use crate::error::{Error, Result};
use crate::profile_law::{count_profile, total_count, ProfileDistribution};
use crate::rng::{rng_for, streams};
use crate::series::{
    bound_pairs, brute_branches, external_edge_gf, fit_moment_bound, fit_small_gap_constant,
    fork_second_moment_gf, increment_moment, integer_coefficient, moment_grid, small_gap_check,
    solve_algebraic, ExternalCase, Substitution, TreeCensus,
};
use crate::stats::{chi_square_uniform, mean_with_error};
use crate::tree::{
    catalan, enumerate_trees, sample_uniform, stream_profile, RealTriple, VerticalProfile,
};

pub const FORMAT_VERSION: u32 = 1;

/// Largest fourth-moment bound constant over `8 ≤ n ≤ 12`, from exact evaluation.
pub const GOLDEN_MOMENT_BOUND: f64 = 2.743_932_809_197;
/// Largest `|ratio − 1| / (μ + n^{−1/8})` over the `n = 12` grid, from exact evaluation.
pub const GOLDEN_SMALL_GAP_CONSTANT: f64 = 0.383_955_273_659;
/// Largest `Cat(n) E[Δ²] √n / 4^n` over `6 ≤ n ≤ 14`.
pub const GOLDEN_GROWTH_CONSTANT: f64 = 0.125_584_190_914;
const GOLDEN_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Formula,
    Markov,
    Diffusion,
    Series,
    Moments,
    Sampler,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Formula,
        Suite::Markov,
        Suite::Diffusion,
        Suite::Series,
        Suite::Moments,
        Suite::Sampler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Formula => "formula",
            Suite::Markov => "markov",
            Suite::Diffusion => "diffusion",
            Suite::Series => "series",
            Suite::Moments => "moments",
            Suite::Sampler => "sampler",
        }
    }

    /// Gates of the suite, by number.
    pub fn gates(self) -> &'static [u8] {
        match self {
            Suite::Formula => &[1, 2],
            Suite::Markov => &[3, 4],
            Suite::Diffusion => &[5, 11],
            Suite::Series => &[7, 8],
            Suite::Moments => &[9, 10],
            Suite::Sampler => &[6, 12],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    #[default]
    Fast,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(Error::InvalidArgument(format!("unknown level {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateOutcome {
    pub gate: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
    pub elapsed_s: f64,
    pub budget_s: f64,
}

impl fmt::Display for GateOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] gate {:>2} {}: {} ({:.2} s of {:.0} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.gate,
            self.name,
            self.detail,
            self.elapsed_s,
            self.budget_s
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub format_version: u32,
    pub level: Level,
    pub suites: Vec<Suite>,
    pub passed: bool,
    pub gates: Vec<GateOutcome>,
}

impl VerifyReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn failing(&self) -> impl Iterator<Item = &GateOutcome> {
        self.gates.iter().filter(|g| !g.passed)
    }
}

/// What a gate body reports before timing is attached.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
}

impl Check {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Check {
            passed,
            detail: detail.into(),
            metrics: BTreeMap::new(),
        }
    }

    fn metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }
}

fn timed(gate: u8, name: &str, budget_s: f64, body: impl FnOnce() -> Result<Check>) -> GateOutcome {
    let start = Instant::now();
    let result = body();
    let elapsed_s = start.elapsed().as_secs_f64();
    let (mut passed, mut detail, metrics) = match result {
        Ok(c) => (c.passed, c.detail, c.metrics),
        Err(e) => (false, format!("error: {e}"), BTreeMap::new()),
    };
    if elapsed_s > budget_s {
        passed = false;
        detail = format!("{detail}; over budget");
    }
    GateOutcome {
        gate,
        name: name.to_string(),
        passed,
        detail,
        metrics,
        elapsed_s,
        budget_s,
    }
}

/// Runs one gate by number.
pub fn run_gate(gate: u8, level: Level) -> Result<GateOutcome> {
    let full = level == Level::Full;
    Ok(match gate {
        1 => timed(1, "product formula", 60.0, || {
            product_formula(if full { 10 } else { 8 }, if full { 12 } else { 10 })
        }),
        2 => timed(2, "worked profile counts", 1.0, worked_counts),
        3 => timed(3, "bridge laws", 600.0, || {
            bridge_laws(if full { 8 } else { 6 })
        }),
        4 => timed(4, "kernel normalization", 1.0, kernel_normalization),
        5 => timed(5, "one-step moments", 60.0, || {
            one_step_moments(if full { 1_000_000 } else { 100_000 })
        }),
        6 => timed(6, "sampler uniformity", 60.0, || {
            sampler_uniformity(
                140_000,
                if full { 100 } else { 10 },
                if full { 10_000 } else { 1000 },
            )
        }),
        7 => timed(7, "branch series", 60.0, || {
            branch_series(if full { 256 } else { 64 })
        }),
        8 => timed(8, "fork resummation and growth", 120.0, || {
            fork_and_growth(if full { 256 } else { 64 }, if full { 14 } else { 12 })
        }),
        9 => timed(9, "fourth-moment bound", 600.0, || {
            moment_bound(if full { 12 } else { 10 })
        }),
        10 => timed(10, "moment ratio", 600.0, || {
            small_gap_ratio(if full { 12 } else { 10 })
        }),
        11 => timed(11, "chain versus diffusion", 1200.0, || {
            if full {
                chain_versus_diffusion(10_000, 20)
            } else {
                chain_versus_diffusion(2_000, 4)
            }
        }),
        12 => {
            let (n, seeds) = if full {
                (50_000_000, 20)
            } else {
                (5_000_000, 5)
            };
            timed(12, "streaming profile", 60.0 * seeds as f64, || {
                streaming_profile(n, seeds)
            })
        }
        _ => return Err(Error::InvalidArgument(format!("no gate {gate}"))),
    })
}

/// Runs every gate of `suites`, in gate order, without duplicates.
pub fn run_suites(
    suites: &[Suite],
    level: Level,
    mut on_gate: impl FnMut(&GateOutcome),
) -> Result<VerifyReport> {
    let mut ids: Vec<u8> = suites
        .iter()
        .flat_map(|s| s.gates().iter().copied())
        .collect();
    ids.sort_unstable();
    ids.dedup();
    let mut gates = Vec::new();
    for id in ids {
        let g = run_gate(id, level)?;
        on_gate(&g);
        gates.push(g);
    }
    Ok(VerifyReport {
        format_version: FORMAT_VERSION,
        level,
        suites: suites.to_vec(),
        passed: gates.iter().all(|g| g.passed),
        gates,
    })
}

fn within_golden(value: f64, golden: f64) -> bool {
    ((value - golden) / golden).abs() <= GOLDEN_REL_TOL
}

fn rational_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Product formula against enumeration for `n ≤ enum_max`; formula total against Catalan for `n ≤ total_max`.
pub fn product_formula(enum_max: u64, total_max: u64) -> Result<Check> {
    let mut profiles = 0usize;
    for n in 1..=enum_max {
        let census = TreeCensus::new(n)?;
        let dist = ProfileDistribution::new(n)?;
        if census.profiles().len() != dist.len() {
            return Ok(Check::new(
                false,
                format!(
                    "n = {n}: {} profiles by enumeration, {} by formula",
                    census.profiles().len(),
                    dist.len()
                ),
            ));
        }
        for (p, c) in census.profiles() {
            if count_profile(p)? != BigUint::from(*c) {
                return Ok(Check::new(
                    false,
                    format!("profile {p} counted {c} times by enumeration"),
                ));
            }
        }
        profiles += census.profiles().len();
    }
    for n in 1..=total_max {
        if total_count(n)? != BigUint::from(catalan(n)) {
            return Ok(Check::new(
                false,
                format!("formula total at n = {n} is not Cat(n)"),
            ));
        }
    }
    Ok(Check::new(true, format!("{profiles} profiles with n ≤ {enum_max} match; totals equal Cat(n) for n ≤ {total_max}"))
        .metric("profiles", profiles as f64))
}

pub fn worked_counts() -> Result<Check> {
    let census = TreeCensus::new(6)?;
    let trees: u128 = census.profiles().iter().map(|(_, c)| c).sum();
    let mut ok = trees == 132;
    let mut parts = Vec::new();
    for (text, expect) in [("(1,1;3,1)", 3u32), ("(;1,1,2,1,1)", 1)] {
        let p: VerticalProfile = text.parse()?;
        let formula = count_profile(&p)?;
        let enumerated = census
            .profiles()
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |(_, c)| *c);
        ok &= formula == BigUint::from(expect) && enumerated == expect as u128;
        parts.push(format!(
            "{text}: formula {formula}, enumeration {enumerated}"
        ));
    }
    Ok(Check::new(
        ok,
        format!("{} over {trees} trees", parts.join("; ")),
    ))
}

/// Conditional laws from the profile law and from the chain, for every positive boundary condition right of the root.
pub fn bridge_laws(n: u64) -> Result<Check> {
    let dist = ProfileDistribution::new(n)?;
    let boundaries = dist.positive_boundaries(1);
    let mismatch = boundaries.par_iter().find_map_any(|bc| {
        let tree_side = dist.conditional_path_law(bc);
        let chain_side = conditional_path_law_dp(bc.k1, bc.k2, bc.z1, bc.z2, n as i64);
        match (tree_side, chain_side) {
            (Ok(a), Ok(b)) if a == b && a.is_normalized() => None,
            _ => Some(*bc),
        }
    });
    Ok(match mismatch {
        Some(bc) => Check::new(false, format!("laws differ at {bc:?}")),
        None => Check::new(
            true,
            format!("{} boundary conditions at n = {n}, exact", boundaries.len()),
        )
        .metric("boundaries", boundaries.len() as f64),
    })
}

pub fn kernel_normalization() -> Result<Check> {
    for m in 1..=50 {
        let pmf = step_pmf(m)?;
        if !pmf.total_mass().is_integer() || pmf.total_mass().to_integer() != 1.into() {
            return Ok(Check::new(
                false,
                format!("mass at m = {m} is {}", pmf.total_mass()),
            ));
        }
    }
    Ok(Check::new(true, "exact mass 1 for 1 ≤ m ≤ 50"))
}

/// Mean and variance of the increment of `Δ`, and the covariance of the `(Δ, M, S)` increments.
pub fn one_step_moments(draws: usize) -> Result<Check> {
    let mut worst: f64 = 0.0;
    let mut check = Check::new(true, "");
    for (k, m) in [1u64, 10, 1000].into_iter().enumerate() {
        let mut rng = rng_for(0x5eed, streams::CHAIN + k as u64);
        let (delta, s) = (2i64, 5i64);
        let incs: Vec<[f64; 3]> = (0..draws)
            .map(|_| {
                let d = delta + sample_increment(m, &mut rng);
                let mm = m as i64 + d;
                [
                    (d - delta) as f64,
                    (mm - m as i64) as f64,
                    (s + mm - s) as f64,
                ]
            })
            .collect();
        let mean_d = mean_with_error(incs.iter().map(|z| z[0]))?;
        let mut z_max = mean_d.z_score(0.0).abs();
        let means: Vec<f64> = (0..3)
            .map(|c| incs.iter().map(|z| z[c]).sum::<f64>() / draws as f64)
            .collect();
        let target = 2.0 * m as f64;
        for i in 0..3 {
            for j in i..3 {
                let cov =
                    mean_with_error(incs.iter().map(|z| (z[i] - means[i]) * (z[j] - means[j])))?;
                z_max = z_max.max(cov.z_score(target).abs());
            }
        }
        worst = worst.max(z_max);
        check = check.metric(&format!("max_abs_z_m{m}"), z_max);
    }
    check.passed = worst <= 5.0;
    check.detail = format!("largest |z| = {worst:.2} over m ∈ {{1, 10, 1000}}, {draws} draws each");
    Ok(check)
}

/// Chi-square over the 14 trees with 4 vertices, then streaming against materialized profiles.
pub fn sampler_uniformity(draws: u64, seeds: u64, n_max: u64) -> Result<Check> {
    let index: HashMap<String, usize> = enumerate_trees(4)?
        .enumerate()
        .map(|(i, t)| (t.to_string(), i))
        .collect();
    let mut counts = vec![0u64; index.len()];
    for seed in 0..draws {
        counts[index[&sample_uniform(4, seed)?.to_string()]] += 1;
    }
    let chi = chi_square_uniform(&counts)?;
    let sizes = [1, 2, 7, 100, n_max];
    let mut agree = true;
    for seed in 0..seeds {
        for &n in &sizes {
            let tree = sample_uniform(n, seed)?;
            agree &= VerticalProfile::of_tree(&tree) == stream_profile(n, seed)?;
        }
    }
    Ok(Check::new(
        chi.p_value > 1e-3 && agree,
        format!(
            "chi-square p = {:.4} over {draws} draws; streaming {} materialized for n ≤ {n_max} over {seeds} seeds",
            chi.p_value,
            if agree { "matches" } else { "differs from" }
        ),
    )
    .metric("chi_square_p", chi.p_value))
}

/// `[t^k] H_i` against brute force under both substitutions, plus the system identities and the external-edge table.
pub fn branch_series(order: usize) -> Result<Check> {
    let kmax = 10usize;
    let mut brute = BTreeMap::new();
    for i in -3i64..=3 {
        for k in 0..=kmax {
            brute.insert((i, k), brute_branches(i, k)?);
        }
    }
    let matches = |sub: Substitution| -> Result<bool> {
        let sys = solve_algebraic(kmax, sub)?;
        Ok((-3i64..=3).all(|i| {
            let h = sys.branch(i);
            (0..=kmax).all(|k| integer_coefficient(&h, k) == Some(brute[&(i, k)].into()))
        }))
    };
    let tree_weight = matches(Substitution::TreeWeight)?;
    let shifted = matches(Substitution::ShiftedTree)?;

    let sys = solve_algebraic(order, Substitution::TreeWeight)?;
    let identities = sys.b_residual().is_zero() && sys.u_residual().is_zero();
    let catalan_ok = (0..=20u64).all(|k| {
        integer_coefficient(&sys.trees, k as usize)
            == Some(if k == 0 { 0.into() } else { catalan(k).into() })
    });

    let table = solve_algebraic(order.min(96), Substitution::TreeWeight)?;
    let mut cases = 0;
    for a in [-2i64, 0, 1] {
        for q in 1..=3 {
            let b = a + q;
            for x in a - 3..=b + 3 {
                for case in ExternalCase::ALL {
                    if case.admits(a, b, x) {
                        external_edge_gf(&table, case, a, b, x)?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(Check::new(
        tree_weight && !shifted && identities && catalan_ok,
        format!(
            "y = tT {} brute force, y = t(T − 1) {}; B and U identities {} to order {order}; Catalan {}; {cases} table cases exact",
            if tree_weight { "matches" } else { "differs from" },
            if shifted { "matches (unexpected)" } else { "differs as expected" },
            if identities { "hold" } else { "fail" },
            if catalan_ok { "ok" } else { "wrong" },
        ),
    ))
}

/// `Cat(n) E[Δ²] √n / 4^n` for `6 ≤ n ≤ n_max`.
pub fn growth_constants(n_max: u64) -> Result<Vec<(u64, f64)>> {
    (6..=n_max)
        .map(|n| {
            let e = increment_moment(n, 2, 0)?;
            let scaled =
                rational_f64(&e) * catalan(n) as f64 * (n as f64).sqrt() / 4f64.powi(n as i32);
            Ok((n, scaled))
        })
        .collect()
}

pub fn fork_and_growth(order: usize, n_max: u64) -> Result<Check> {
    let sys = solve_algebraic(order, Substitution::TreeWeight)?;
    fork_second_moment_gf(&sys)?;
    let growth = growth_constants(n_max)?;
    let constant = growth.iter().map(|g| g.1).fold(0.0, f64::max);
    let last = growth.last().map_or(0.0, |g| g.1);
    let golden = n_max < 14 || within_golden(constant, GOLDEN_GROWTH_CONSTANT);
    Ok(Check::new(
        golden && last <= constant,
        format!("closed form equals the direct sum to order {order}; Cat(n)E[Δ²]√n/4^n ≤ {constant:.5} for 6 ≤ n ≤ {n_max}"),
    )
    .metric("growth_constant", constant))
}

pub fn moment_bound(n_max: u64) -> Result<Check> {
    let mut rows = Vec::new();
    for n in 8..=n_max {
        rows.extend(moment_grid(n, 4, &bound_pairs(n))?);
    }
    let fit = fit_moment_bound(&rows).ok_or(Error::EmptySample)?;
    let ok = fit.constant.is_finite()
        && (n_max < 12 || within_golden(fit.constant, GOLDEN_MOMENT_BOUND));
    Ok(Check::new(
        ok,
        format!(
            "C4 = {:.5} over {} exact moments with 8 ≤ n ≤ {n_max}, attained at n = {}, (a, b) = ({}, {})",
            fit.constant,
            rows.len(),
            fit.n,
            fit.a,
            fit.b
        ),
    )
    .metric("c4", fit.constant))
}

/// Ratio of the two sides at `a = 0`, `b − a ∈ {1, 2, 3}`; `|ratio − 1|` must shrink with `μ`.
pub fn small_gap_ratio(n: u64) -> Result<Check> {
    let reports = (1..=3)
        .map(|q| small_gap_check(n, 1, 0, q))
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = reports
        .iter()
        .map(|r| r.ratio_f64().unwrap_or(f64::NAN))
        .collect();
    let monotone = ratios
        .windows(2)
        .all(|w| (w[0] - 1.0).abs() < (w[1] - 1.0).abs());
    let constant = fit_small_gap_constant(&reports).unwrap_or(f64::NAN);
    let ok = monotone
        && constant.is_finite()
        && (n != 12 || within_golden(constant, GOLDEN_SMALL_GAP_CONSTANT));
    let mut check = Check::new(
        ok,
        format!(
            "ratios {:.5}, {:.5}, {:.5} at n = {n}; C = {constant:.5}",
            ratios[0], ratios[1], ratios[2]
        ),
    )
    .metric("c", constant);
    for (q, r) in ratios.iter().enumerate() {
        check = check.metric(&format!("ratio_q{}", q + 1), *r);
    }
    Ok(check)
}

/// KS statistic of `m` at the horizon against the fine reference, `n = 2^8` versus `2^16`.
pub fn chain_versus_diffusion(trials: usize, replicates: u64) -> Result<Check> {
    let cfg = ComparisonConfig {
        z0: RealTriple {
            delta: 0.0,
            m: 1.0,
            s: 0.0,
        },
        epsilon: 0.1,
        horizon: 1.0,
        trials,
        reference_dt: 1.0 / 1024.0,
        freeze: Default::default(),
    };
    let (small, large) = (1u64 << 8, 1u64 << 16);
    let mut decreased = 0;
    let (mut sum_small, mut sum_large) = (0.0, 0.0);
    for seed in 0..replicates {
        let rep = compare_chain_to_diffusion(&[small, large], &cfg, seed)?;
        let ks = |n| {
            rep.statistic(n, Reference::Fine, Coordinate::M, cfg.horizon)
                .ok_or(Error::EmptySample)
        };
        let (a, b) = (ks(small)?, ks(large)?);
        sum_small += a;
        sum_large += b;
        decreased += usize::from(b < a);
    }
    let fraction = decreased as f64 / replicates as f64;
    Ok(Check::new(
        fraction >= 0.9,
        format!(
            "KS decreased in {decreased}/{replicates} replicates; mean {:.4} at n = 2^8, {:.4} at n = 2^16",
            sum_small / replicates as f64,
            sum_large / replicates as f64
        ),
    )
    .metric("fraction_decreased", fraction))
}

/// Peak resident set size of this process in bytes, where the platform reports it.
pub fn peak_memory_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

pub fn streaming_profile(n: u64, seeds: u64) -> Result<Check> {
    let scale = (n as f64).powf(0.25);
    let mut in_band = 0;
    let mut slowest: f64 = 0.0;
    for seed in 0..seeds {
        let start = Instant::now();
        let p = stream_profile(n, seed)?;
        slowest = slowest.max(start.elapsed().as_secs_f64());
        let w = p.width() as f64;
        in_band += usize::from(scale <= w && w <= 40.0 * scale);
    }
    let peak = peak_memory_bytes();
    let memory_ok = peak.is_none_or(|b| b <= 2 << 30);
    let fraction = in_band as f64 / seeds as f64;
    let mut check = Check::new(
        fraction >= 0.95 && slowest <= 60.0 && memory_ok,
        format!(
            "n = {n}: width in band for {in_band}/{seeds} seeds, slowest run {slowest:.2} s, peak memory {}",
            peak.map_or("unmeasured".to_string(), |b| format!("{} MiB", b >> 20))
        ),
    )
    .metric("fraction_in_band", fraction)
    .metric("slowest_s", slowest);
    if let Some(b) = peak {
        check = check.metric("peak_bytes", b as f64);
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
        assert!("slow".parse::<Level>().is_err());
    }

    #[test]
    fn every_gate_belongs_to_one_suite() {
        let mut ids: Vec<u8> = Suite::ALL
            .iter()
            .flat_map(|s| s.gates().iter().copied())
            .collect();
        ids.sort_unstable();
        assert_eq!(ids, (1..=12).collect::<Vec<_>>());
    }

    #[test]
    fn cheap_gates_pass() {
        assert!(worked_counts().unwrap().passed);
        assert!(kernel_normalization().unwrap().passed);
        assert!(product_formula(5, 8).unwrap().passed);
    }
}
