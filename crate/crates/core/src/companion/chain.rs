use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::companion::kernel::sample_increment;
use crate::error::{Error, Result};
use crate::path_law::Triple;
use crate::tree::{write_real_csv, RealTriple};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[default]
    Alive,
    /// `m ≤ 0` was reached.
    Killed,
    /// `m` dropped below the sticking level.
    Stuck,
}

/// A state `(Δ, M, S)` of the companion chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleState {
    pub delta: i64,
    pub m: i64,
    pub s: i64,
    pub status: Status,
}

impl TripleState {
    pub fn alive(delta: i64, m: i64, s: i64) -> Self {
        TripleState {
            delta,
            m,
            s,
            status: Status::Alive,
        }
    }

    pub fn triple(&self) -> Triple {
        Triple::new(self.delta, self.m, self.s)
    }

    pub fn is_alive(&self) -> bool {
        self.status == Status::Alive
    }
}

impl From<Triple> for TripleState {
    fn from(z: Triple) -> Self {
        TripleState::alive(z.delta, z.m, z.s)
    }
}

/// One transition of the chain.
///
/// A state that is not alive is returned unchanged. An alive state with
/// `m ≤ 0` becomes killed. Otherwise `Δ' = Δ + Σ_{k=1}^{m} (g_k − 2)` with
/// geometric(1/2) variables `g_k` on `{1, 2, …}`, then `M' = M + Δ'` and
/// `S' = S + M'`.
pub fn step<R: Rng + ?Sized>(state: TripleState, rng: &mut R) -> TripleState {
    if !state.is_alive() {
        return state;
    }
    if state.m <= 0 {
        return TripleState {
            status: Status::Killed,
            ..state
        };
    }
    let delta = state.delta + sample_increment(state.m as u64, rng);
    let m = state.m + delta;
    TripleState::alive(delta, m, state.s + m)
}

/// Which state a stopped chain keeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Freeze {
    /// Keep the first state with `m < K`: the chain stopped at the crossing time.
    #[default]
    AtCrossing,
    /// Keep the last state with `m ≥ K`.
    BeforeCrossing,
}

/// Runs `steps` transitions from `z0` and stops the chain the first time `m < level`.
///
/// The returned vector has `steps + 1` states, starting with `z0`. Stopped
/// states carry [`Status::Stuck`]. Sticking is checked before killing, so with
/// `level ≥ 1` the chain is never killed.
pub fn run_stuck<R: Rng + ?Sized>(
    z0: TripleState,
    level: i64,
    steps: usize,
    freeze: Freeze,
    rng: &mut R,
) -> Result<Vec<TripleState>> {
    if level < 1 {
        return Err(Error::InvalidArgument(format!(
            "sticking level must be ≥ 1, got {level}"
        )));
    }
    if z0.m < level {
        return Err(Error::InvalidArgument(format!(
            "start m = {} is below the sticking level {level}",
            z0.m
        )));
    }
    let mut path = Vec::with_capacity(steps + 1);
    let mut current = TripleState {
        status: Status::Alive,
        ..z0
    };
    path.push(current);
    for _ in 0..steps {
        if current.is_alive() {
            let next = step(current, rng);
            if next.m < level {
                let kept = match freeze {
                    Freeze::AtCrossing => next,
                    Freeze::BeforeCrossing => current,
                };
                current = TripleState {
                    status: Status::Stuck,
                    ..kept
                };
            } else {
                current = next;
            }
        }
        path.push(current);
    }
    Ok(path)
}

/// A chain path on the rescaled grid `t_k = k n^{-1/4}`, constant on each `[t_k, t_{k+1})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaledChainPath {
    pub n: u64,
    pub level: i64,
    pub states: Vec<TripleState>,
}

impl RescaledChainPath {
    pub fn dt(&self) -> f64 {
        (self.n as f64).powf(-0.25)
    }

    pub fn rescale(&self, z: &TripleState) -> RealTriple {
        let n = self.n as f64;
        RealTriple {
            delta: z.delta as f64 / n.sqrt(),
            m: z.m as f64 * n.powf(-0.75),
            s: z.s as f64 / n,
        }
    }

    /// Value at time `t ≥ 0` (the last state beyond the horizon).
    pub fn at(&self, t: f64) -> RealTriple {
        let k = (t.max(0.0) / self.dt() + 1e-9).floor() as usize;
        self.rescale(&self.states[k.min(self.states.len() - 1)])
    }

    pub fn is_stuck(&self) -> bool {
        self.states.last().is_some_and(|z| !z.is_alive())
    }

    pub fn grid(&self) -> impl Iterator<Item = (f64, RealTriple)> + '_ {
        let dt = self.dt();
        self.states
            .iter()
            .enumerate()
            .map(move |(k, z)| (k as f64 * dt, self.rescale(z)))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_real_csv(out, self.grid())
    }
}

/// Integer start state for a rescaled start `(δ, m, s)`: `(δ n^{1/2}, m n^{3/4}, s n)` rounded.
pub fn integer_start(n: u64, z0: RealTriple) -> TripleState {
    let n = n as f64;
    TripleState::alive(
        (z0.delta * n.sqrt()).round() as i64,
        (z0.m * n.powf(0.75)).round() as i64,
        (z0.s * n).round() as i64,
    )
}

/// Runs the chain from the rescaled start `z0` for `⌊T n^{1/4}⌋ + 1` steps with
/// sticking level `K = ⌈ε n^{3/4}⌉`.
pub fn rescaled_chain<R: Rng + ?Sized>(
    n: u64,
    z0: RealTriple,
    epsilon: f64,
    horizon: f64,
    freeze: Freeze,
    rng: &mut R,
) -> Result<RescaledChainPath> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < z0.m) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < ε < m0, got ε = {epsilon}, m0 = {}",
            z0.m
        )));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "horizon must be finite and ≥ 0, got {horizon}"
        )));
    }
    let nf = n as f64;
    let level = (epsilon * nf.powf(0.75)).ceil() as i64;
    let start = integer_start(n, z0);
    if start.m < level {
        return Err(Error::InvalidArgument(format!(
            "at n = {n} the start m = {} rounds below the sticking level {level}",
            start.m
        )));
    }
    let steps = (horizon * nf.powf(0.25)).floor() as usize + 1;
    let states = run_stuck(start, level, steps, freeze, rng)?;
    Ok(RescaledChainPath { n, level, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_for;

    #[test]
    fn killing_is_absorbing() {
        let mut rng = rng_for(1, 0);
        let z = TripleState::alive(-1, 0, 5);
        let killed = step(z, &mut rng);
        assert_eq!(killed.status, Status::Killed);
        assert_eq!(killed.triple(), z.triple());
        assert_eq!(step(killed, &mut rng), killed);
    }

    #[test]
    fn cascade_arithmetic() {
        let mut rng = rng_for(2, 0);
        for _ in 0..200 {
            let z = TripleState::alive(3, 4, 10);
            let w = step(z, &mut rng);
            assert!(w.delta - z.delta >= -z.m);
            assert_eq!(w.m, z.m + w.delta);
            assert_eq!(w.s, z.s + w.m);
        }
    }

    #[test]
    fn sticking_modes() {
        for seed in 0..40 {
            for freeze in [Freeze::AtCrossing, Freeze::BeforeCrossing] {
                let mut rng = rng_for(seed, 0);
                let path = run_stuck(TripleState::alive(0, 1, 0), 1, 30, freeze, &mut rng).unwrap();
                assert_eq!(path.len(), 31);
                if let Some(k) = path.iter().position(|z| !z.is_alive()) {
                    let frozen = path[k];
                    assert_eq!(frozen.status, Status::Stuck);
                    assert!(path[k..].iter().all(|z| *z == frozen));
                    match freeze {
                        Freeze::AtCrossing => assert!(frozen.m < 1),
                        Freeze::BeforeCrossing => {
                            assert!(frozen.m >= 1);
                            assert_eq!(frozen.triple(), path[k - 1].triple());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn level_above_start_is_rejected() {
        let mut rng = rng_for(0, 0);
        assert!(run_stuck(
            TripleState::alive(0, 2, 0),
            3,
            5,
            Freeze::default(),
            &mut rng
        )
        .is_err());
        assert!(run_stuck(
            TripleState::alive(0, 2, 0),
            0,
            5,
            Freeze::default(),
            &mut rng
        )
        .is_err());
    }

    #[test]
    fn rescaled_chain_grid() {
        let mut rng = rng_for(3, 0);
        let z0 = RealTriple {
            delta: 0.0,
            m: 1.0,
            s: 0.0,
        };
        let p = rescaled_chain(4096, z0, 0.1, 1.0, Freeze::AtCrossing, &mut rng).unwrap();
        assert_eq!(p.states.len(), 9 + 1);
        assert_eq!(p.level, (0.1f64 * 512.0).ceil() as i64);
        assert_eq!(p.at(0.0).m, 1.0);
        // constant on [t_k, t_{k+1})
        assert_eq!(p.at(0.125), p.at(0.2));
        for w in p.states.windows(2) {
            if w[1].is_alive() {
                assert!(w[1].s >= w[0].s);
            }
        }
        assert!(rescaled_chain(4096, z0, 1.5, 1.0, Freeze::AtCrossing, &mut rng).is_err());
    }
}
