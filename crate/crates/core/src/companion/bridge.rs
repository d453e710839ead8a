//! Exact law of companion-chain bridges between two prescribed states.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;

use crate::companion::kernel::increment_probability;
use crate::error::{Error, Result};
use crate::path_law::{PathLaw, Triple};

/// Weight of a transition between consecutive triples; `step` counts from the left end.
pub trait TransitionWeight {
    fn weight(&self, step: usize, from: &Triple, to: &Triple) -> BigRational;
}

impl<F> TransitionWeight for F
where
    F: Fn(usize, &Triple, &Triple) -> BigRational,
{
    fn weight(&self, step: usize, from: &Triple, to: &Triple) -> BigRational {
        self(step, from, to)
    }
}

/// The companion kernel: `P(Δ' − Δ = d | M = m)` for the cascaded successor.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompanionKernel;

impl TransitionWeight for CompanionKernel {
    fn weight(&self, _step: usize, from: &Triple, to: &Triple) -> BigRational {
        if from.m < 1 || from.cascade(to.delta) != *to {
            return BigRational::zero();
        }
        increment_probability(from.m as u64, to.delta - from.delta)
    }
}

/// Law of the alive chain path from `z1` at `k1` to `z2` at `k2`, conditioned
/// on hitting `z2`, under the companion kernel.
///
/// Intermediate states with `m > m_cap` are not explored. Since `M_j ≤ S_{k2}`
/// along any path that reaches `z2`, the result is exact whenever `m_cap ≥ z2.s`.
pub fn conditional_path_law_dp(
    k1: i64,
    k2: i64,
    z1: Triple,
    z2: Triple,
    m_cap: i64,
) -> Result<PathLaw> {
    bridge_law(k1, k2, z1, z2, m_cap, &CompanionKernel)
}

/// [`conditional_path_law_dp`] for an arbitrary nonnegative transition weight.
pub fn bridge_law<K: TransitionWeight + ?Sized>(
    k1: i64,
    k2: i64,
    z1: Triple,
    z2: Triple,
    m_cap: i64,
    kernel: &K,
) -> Result<PathLaw> {
    if k1 >= k2 {
        return Err(Error::InvalidArgument(format!(
            "need k1 < k2, got [{k1}, {k2}]"
        )));
    }
    if z1.m < 1 || z2.m < 1 {
        return Err(Error::InvalidArgument(
            "bridge endpoints must have m ≥ 1".into(),
        ));
    }
    let len = (k2 - k1) as usize;
    if z2.s < z1.s + len as i64 || z2.m > m_cap {
        return Ok(PathLaw::empty(k1));
    }

    // Forward: states reachable from z1 that can still reach z2's s-coordinate.
    let mut layers: Vec<BTreeSet<Triple>> = vec![BTreeSet::from([z1])];
    for j in 0..len {
        let remaining = (len - j - 1) as i64;
        let mut next = BTreeSet::new();
        for z in &layers[j] {
            let top = m_cap.min(z2.s - remaining - z.s);
            for m in 1..=top {
                let w = z.cascade(m - z.m);
                if w.delta - z.delta < -z.m {
                    continue;
                }
                if remaining == 0 && w != z2 {
                    continue;
                }
                next.insert(w);
            }
        }
        layers.push(next);
    }

    // Backward: keep states with a positive-weight continuation to z2.
    let mut alive: Vec<BTreeSet<Triple>> = vec![BTreeSet::new(); len + 1];
    if layers[len].contains(&z2) {
        alive[len].insert(z2);
    }
    for j in (0..len).rev() {
        let (head, tail) = alive.split_at_mut(j + 1);
        for z in &layers[j] {
            let ok = tail[0]
                .iter()
                .any(|w| w.s >= z.s && !kernel.weight(j, z, w).is_zero());
            if ok {
                head[j].insert(*z);
            }
        }
    }
    if !alive[0].contains(&z1) {
        return Ok(PathLaw::empty(k1));
    }

    // Enumerate surviving paths with their weights.
    let mut weights: BTreeMap<Vec<Triple>, BigRational> = BTreeMap::new();
    let mut path = vec![z1];
    let mut acc = vec![BigRational::from_integer(1.into())];
    enumerate(&alive, kernel, &mut path, &mut acc, &mut weights);
    let total = weights.values().fold(BigRational::zero(), |a, w| a + w);
    if total.is_zero() {
        return Ok(PathLaw::empty(k1));
    }
    let probs = weights.into_iter().map(|(p, w)| (p, w / &total)).collect();
    Ok(PathLaw::from_probabilities(k1, probs))
}

fn enumerate<K: TransitionWeight + ?Sized>(
    alive: &[BTreeSet<Triple>],
    kernel: &K,
    path: &mut Vec<Triple>,
    acc: &mut Vec<BigRational>,
    out: &mut BTreeMap<Vec<Triple>, BigRational>,
) {
    let j = path.len() - 1;
    if j + 1 == alive.len() {
        out.insert(path.clone(), acc[j].clone());
        return;
    }
    let z = path[j];
    for w in &alive[j + 1] {
        let weight = kernel.weight(j, &z, w);
        if weight.is_zero() {
            continue;
        }
        acc.push(&acc[j] * weight);
        path.push(*w);
        enumerate(alive, kernel, path, acc, out);
        path.pop();
        acc.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn single_step_is_forced() {
        let z1 = Triple::new(0, 2, 2);
        let z2 = z1.cascade(-1);
        let law = conditional_path_law_dp(1, 2, z1, z2, 10).unwrap();
        assert_eq!(law.len(), 1);
        assert!(law.probability(&[z1, z2]).is_one());
        // not a cascade successor
        let law = conditional_path_law_dp(1, 2, z1, Triple::new(-1, 1, 4), 10).unwrap();
        assert!(law.is_empty());
        // increment below −m
        let z1 = Triple::new(5, 1, 1);
        let law = conditional_path_law_dp(1, 2, z1, z1.cascade(0), 10).unwrap();
        assert!(law.is_empty());
    }

    #[test]
    fn normalized() {
        let z1 = Triple::new(0, 2, 3);
        let z2 = Triple::new(-1, 1, 10);
        let law = conditional_path_law_dp(1, 4, z1, z2, 10).unwrap();
        assert!(!law.is_empty());
        assert!(law.is_normalized());
        for (p, _) in law.iter() {
            assert_eq!(p.len(), 4);
            assert!(p.iter().all(|z| z.m >= 1));
        }
    }

    #[test]
    fn boundary_factors_cancel() {
        let z1 = Triple::new(1, 2, 3);
        let z2 = Triple::new(-1, 1, 11);
        let base = conditional_path_law_dp(2, 6, z1, z2, 12).unwrap();
        let last = 3;
        let tilted = move |j: usize, a: &Triple, b: &Triple| {
            let w = CompanionKernel.weight(j, a, b);
            let f = BigRational::from_integer((7 + a.m + 3 * a.s).into());
            let g = BigRational::from_integer((2 + b.m * b.m).into());
            match j {
                0 => w * f,
                j if j == last => w * g,
                _ => w,
            }
        };
        let law = bridge_law(2, 6, z1, z2, 12, &tilted).unwrap();
        assert_eq!(law, base);
        assert!(!base.is_empty());
    }

    #[test]
    fn bad_arguments() {
        let z = Triple::new(0, 1, 1);
        assert!(conditional_path_law_dp(2, 2, z, z, 5).is_err());
        assert!(conditional_path_law_dp(1, 2, Triple::new(0, 0, 1), z, 5).is_err());
    }
}
