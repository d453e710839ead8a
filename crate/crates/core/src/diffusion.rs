//! Euler–Maruyama integration of the limiting diffusion
//!
//! ```text
//! dδ = √(2|m|) dW,   dm = δ dt,   ds = m dt,
//! ```
//!
//! stopped for good once `m ≤ ε`, and a statistical comparison of its
//! marginals with the rescaled companion chain.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::companion::{rescaled_chain, Freeze};
use crate::error::{Error, Result};
use crate::rng::{rng_for, streams};
use crate::stats::{ks_two_sample, Sample};
use crate::tree::{write_real_csv, RealTriple, FORMAT_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionState {
    pub delta: f64,
    pub m: f64,
    pub s: f64,
    pub t: f64,
    pub stuck: bool,
}

impl DiffusionState {
    pub fn triple(&self) -> RealTriple {
        RealTriple {
            delta: self.delta,
            m: self.m,
            s: self.s,
        }
    }
}

/// Drift `(0, δ, m)`.
pub fn drift(z: &RealTriple) -> [f64; 3] {
    [0.0, z.delta, z.m]
}

/// Diffusion coefficient `(√(2|m|), 0, 0)`; only `δ` is driven by noise.
pub fn diffusion_coef(z: &RealTriple) -> [f64; 3] {
    [(2.0 * z.m.abs()).sqrt(), 0.0, 0.0]
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    #[default]
    EulerMaruyama,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub epsilon: f64,
    pub horizon: f64,
    pub scheme: Scheme,
}

impl IntegratorConfig {
    pub fn new(dt: f64, epsilon: f64, horizon: f64) -> Result<Self> {
        let cfg = IntegratorConfig {
            dt,
            epsilon,
            horizon,
            scheme: Scheme::EulerMaruyama,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "ε must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.horizon.is_finite() && self.dt <= self.horizon) {
            return Err(Error::InvalidArgument(format!(
                "need dt ≤ T, got dt = {}, T = {}",
                self.dt, self.horizon
            )));
        }
        Ok(())
    }

    /// Number of steps; the last one is shortened to end exactly at the horizon.
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt - 1e-9).ceil() as usize
    }
}

/// A sampled path on the integrator grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionPath {
    pub states: Vec<DiffusionState>,
}

impl DiffusionPath {
    /// Linear interpolation in time, constant beyond the ends.
    pub fn at(&self, t: f64) -> RealTriple {
        let k = self.states.partition_point(|z| z.t <= t);
        if k == 0 {
            return self.states[0].triple();
        }
        if k == self.states.len() {
            return self.states[k - 1].triple();
        }
        let (a, b) = (&self.states[k - 1], &self.states[k]);
        let w = (t - a.t) / (b.t - a.t);
        RealTriple {
            delta: a.delta + w * (b.delta - a.delta),
            m: a.m + w * (b.m - a.m),
            s: a.s + w * (b.s - a.s),
        }
    }

    pub fn terminal(&self) -> &DiffusionState {
        self.states.last().expect("a path has its start state")
    }

    pub fn stuck_time(&self) -> Option<f64> {
        self.states.iter().find(|z| z.stuck).map(|z| z.t)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_real_csv(out, self.states.iter().map(|z| (z.t, z.triple())))
    }
}

/// Euler–Maruyama with Gaussian noise from `rng`.
pub fn integrate<R: Rng + ?Sized>(
    z0: RealTriple,
    cfg: &IntegratorConfig,
    rng: &mut R,
) -> Result<DiffusionPath> {
    integrate_driven(z0, cfg, || rng.sample(StandardNormal))
}

/// Euler–Maruyama driven by the standard normal draws returned by `noise`.
///
/// Each step updates `δ += √(2|m|) √h ξ`, then `m += δ h` with the new `δ`,
/// then `s += m h` with the new `m`. The path sticks at the first state with `m ≤ ε`.
pub fn integrate_driven(
    z0: RealTriple,
    cfg: &IntegratorConfig,
    mut noise: impl FnMut() -> f64,
) -> Result<DiffusionPath> {
    cfg.validate()?;
    if !(z0.m > cfg.epsilon) {
        return Err(Error::InvalidArgument(format!(
            "start m = {} must exceed ε = {}",
            z0.m, cfg.epsilon
        )));
    }
    let steps = cfg.steps();
    let mut states = Vec::with_capacity(steps + 1);
    let mut z = DiffusionState {
        delta: z0.delta,
        m: z0.m,
        s: z0.s,
        t: 0.0,
        stuck: false,
    };
    states.push(z);
    for k in 0..steps {
        if !z.stuck {
            let h = cfg.dt.min(cfg.horizon - z.t);
            z.delta += (2.0 * z.m.abs() * h).sqrt() * noise();
            z.m += z.delta * h;
            z.s += z.m * h;
            if !(z.delta.is_finite() && z.m.is_finite() && z.s.is_finite()) {
                return Err(Error::NonFinite {
                    step: k,
                    state: format!("δ = {}, m = {}, s = {}", z.delta, z.m, z.s),
                });
            }
            z.stuck = z.m <= cfg.epsilon;
        }
        z.t = if k + 1 == steps {
            cfg.horizon
        } else {
            (k + 1) as f64 * cfg.dt
        };
        states.push(z);
    }
    Ok(DiffusionPath { states })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    Delta,
    M,
    S,
}

impl Coordinate {
    pub const ALL: [Coordinate; 3] = [Coordinate::Delta, Coordinate::M, Coordinate::S];

    pub fn of(self, z: &RealTriple) -> f64 {
        match self {
            Coordinate::Delta => z.delta,
            Coordinate::M => z.m,
            Coordinate::S => z.s,
        }
    }
}

/// Which Euler–Maruyama sample the chain is compared with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    /// Step `n^{-1/4}`, the chain's own time step.
    Coarse,
    /// The fine reference step of the comparison.
    Fine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n: u64,
    pub reference: Reference,
    pub coordinate: Coordinate,
    pub time: f64,
    pub statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub format_version: u32,
    pub z0: RealTriple,
    pub epsilon: f64,
    pub horizon: f64,
    pub trials: usize,
    pub seed: u64,
    pub reference_dt: f64,
    /// Fraction of chain paths stuck by the horizon, per `n`.
    pub stuck_fraction: Vec<(u64, f64)>,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn statistic(
        &self,
        n: u64,
        reference: Reference,
        coordinate: Coordinate,
        time: f64,
    ) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| {
                r.n == n && r.reference == reference && r.coordinate == coordinate && r.time == time
            })
            .map(|r| r.statistic)
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonConfig {
    pub z0: RealTriple,
    pub epsilon: f64,
    pub horizon: f64,
    pub trials: usize,
    pub reference_dt: f64,
    pub freeze: Freeze,
}

/// Rows for the two-sample comparisons at times `T/4`, `T/2` and `T`.
fn compare_marginals(
    n: u64,
    reference: Reference,
    chain: &[[RealTriple; 3]],
    euler: &[[RealTriple; 3]],
    times: &[f64; 3],
) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::new();
    for (ti, &time) in times.iter().enumerate() {
        for coordinate in Coordinate::ALL {
            let a = Sample::new(chain.iter().map(|z| coordinate.of(&z[ti])).collect())?;
            let b = Sample::new(euler.iter().map(|z| coordinate.of(&z[ti])).collect())?;
            let r = ks_two_sample(&a, &b)?;
            rows.push(ComparisonRow {
                n,
                reference,
                coordinate,
                time,
                statistic: r.statistic,
                p_value: r.p_value,
                n1: r.n1,
                n2: r.n2,
            });
        }
    }
    Ok(rows)
}

fn euler_marginals(
    z0: RealTriple,
    cfg: &IntegratorConfig,
    trials: usize,
    seed: u64,
    stream: u64,
    times: &[f64; 3],
) -> Result<Vec<[RealTriple; 3]>> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, stream + i as u64);
            let path = integrate(z0, cfg, &mut rng)?;
            Ok(times.map(|t| path.at(t)))
        })
        .collect()
}

/// Compares the rescaled chain at each `n` with Euler–Maruyama samples.
///
/// Trial `i` of every ensemble uses its own generator stream, so results do
/// not depend on the number of threads. The fine reference sample is drawn
/// once and shared by all `n`.
pub fn compare_chain_to_diffusion(
    n_list: &[u64],
    cfg: &ComparisonConfig,
    seed: u64,
) -> Result<ComparisonReport> {
    if cfg.trials == 0 {
        return Err(Error::EmptySample);
    }
    if cfg.trials >= 1 << 24 || n_list.len() >= 1 << 7 {
        return Err(Error::InvalidArgument(
            "at most 2^24 trials and 2^7 sizes".into(),
        ));
    }
    let t = cfg.horizon;
    let times = [t / 4.0, t / 2.0, t];
    let fine_cfg = IntegratorConfig::new(cfg.reference_dt, cfg.epsilon, t)?;
    let fine = euler_marginals(
        cfg.z0,
        &fine_cfg,
        cfg.trials,
        seed,
        streams::REFERENCE,
        &times,
    )?;

    let mut rows = Vec::new();
    let mut stuck_fraction = Vec::new();
    for (idx, &n) in n_list.iter().enumerate() {
        let lane = (idx as u64) << 24;
        let chain: Vec<([RealTriple; 3], bool)> = (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(seed, streams::CHAIN + lane + i as u64);
                let path = rescaled_chain(n, cfg.z0, cfg.epsilon, t, cfg.freeze, &mut rng)?;
                Ok((times.map(|s| path.at(s)), path.is_stuck()))
            })
            .collect::<Result<_>>()?;
        let stuck = chain.iter().filter(|(_, s)| *s).count() as f64 / cfg.trials as f64;
        stuck_fraction.push((n, stuck));
        let chain: Vec<[RealTriple; 3]> = chain.into_iter().map(|(z, _)| z).collect();

        let coarse_dt = (n as f64).powf(-0.25).min(t);
        let coarse_cfg = IntegratorConfig::new(coarse_dt, cfg.epsilon, t)?;
        let coarse = euler_marginals(
            cfg.z0,
            &coarse_cfg,
            cfg.trials,
            seed,
            streams::DIFFUSION + lane,
            &times,
        )?;

        rows.extend(compare_marginals(
            n,
            Reference::Coarse,
            &chain,
            &coarse,
            &times,
        )?);
        rows.extend(compare_marginals(
            n,
            Reference::Fine,
            &chain,
            &fine,
            &times,
        )?);
    }
    Ok(ComparisonReport {
        format_version: FORMAT_VERSION,
        z0: cfg.z0,
        epsilon: cfg.epsilon,
        horizon: t,
        trials: cfg.trials,
        seed,
        reference_dt: cfg.reference_dt,
        stuck_fraction,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(delta: f64, m: f64, s: f64) -> RealTriple {
        RealTriple { delta, m, s }
    }

    #[test]
    fn coefficients() {
        assert_eq!(drift(&z(0.0, 0.0, 0.0)), [0.0; 3]);
        assert_eq!(diffusion_coef(&z(0.0, 0.0, 0.0)), [0.0; 3]);
        assert_eq!(diffusion_coef(&z(1.5, 2.0, 7.0)), [2.0, 0.0, 0.0]);
        assert_eq!(drift(&z(1.5, 2.0, 7.0)), [0.0, 1.5, 2.0]);
    }

    #[test]
    fn noiseless_cascade() {
        let cfg = IntegratorConfig::new(0.001, 0.01, 1.0).unwrap();
        let (d0, m0, s0) = (0.5, 1.0, 0.0);
        let path = integrate_driven(z(d0, m0, s0), &cfg, || 0.0).unwrap();
        assert_eq!(path.states.len(), 1001);
        let end = path.terminal();
        assert_eq!(end.t, 1.0);
        assert_eq!(end.delta, d0);
        assert!((end.m - (m0 + d0)).abs() < 1e-12);
        let exact = s0 + m0 + d0 / 2.0;
        assert!((end.s - exact).abs() <= cfg.dt * 1.0 * (m0 + d0));
    }

    #[test]
    fn sticking_is_absorbing() {
        let cfg = IntegratorConfig::new(0.01, 0.5, 2.0).unwrap();
        let path = integrate_driven(z(-1.0, 1.0, 0.0), &cfg, || 0.0).unwrap();
        let k = path
            .states
            .iter()
            .position(|s| s.stuck)
            .expect("drifts below ε");
        assert!(path.states[k].m <= 0.5);
        assert!(path.states[k - 1].m > 0.5);
        let frozen = path.states[k].triple();
        assert!(path.states[k..]
            .iter()
            .all(|s| s.stuck && s.triple() == frozen));
    }

    #[test]
    fn replay_from_increments() {
        let cfg = IntegratorConfig::new(0.01, 0.05, 1.0).unwrap();
        let mut rng = rng_for(9, 0);
        let path = integrate(z(0.0, 1.0, 0.0), &cfg, &mut rng).unwrap();
        for w in path.states.windows(2) {
            if w[1].stuck && w[0].stuck {
                continue;
            }
            let h = w[1].t - w[0].t;
            assert!((w[1].m - (w[0].m + w[1].delta * h)).abs() < 1e-14);
            assert!((w[1].s - (w[0].s + w[1].m * h)).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_config() {
        assert!(IntegratorConfig::new(0.0, 0.1, 1.0).is_err());
        assert!(IntegratorConfig::new(2.0, 0.1, 1.0).is_err());
        assert!(IntegratorConfig::new(0.1, 0.0, 1.0).is_err());
        let cfg = IntegratorConfig::new(0.1, 0.5, 1.0).unwrap();
        assert!(integrate_driven(z(0.0, 0.4, 0.0), &cfg, || 0.0).is_err());
    }

    #[test]
    fn non_finite_is_reported() {
        let cfg = IntegratorConfig::new(0.1, 0.5, 1.0).unwrap();
        let r = integrate_driven(z(0.0, 1.0, 0.0), &cfg, || f64::INFINITY);
        assert!(matches!(r, Err(Error::NonFinite { step: 0, .. })));
    }
}
