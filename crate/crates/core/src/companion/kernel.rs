use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest `m` sampled by inverse CDF; larger `m` use the bit-stream route.
pub const INVERSE_CDF_MAX_M: u64 = 64;

/// Exact probability that the increment `Δ' − Δ` equals `d` given `M = m ≥ 1`:
/// `C(d + 2m − 1, m − 1) / 2^{d + 2m}` for `d ≥ −m`, zero below.
///
/// The increment is `Σ_{k=1}^{m} (g_k − 2)` with `g_k` independent geometric(1/2)
/// variables on `{1, 2, …}`.
pub fn increment_probability(m: u64, d: i64) -> BigRational {
    assert!(m >= 1, "the increment law needs m ≥ 1");
    let k = d + 2 * m as i64;
    if k < m as i64 {
        return BigRational::zero();
    }
    let k = k as u64;
    let num = binomial(BigUint::from(k - 1), BigUint::from(m - 1));
    BigRational::new(BigInt::from(num), BigInt::one() << k)
}

/// `P(Δ' − Δ > d_max | m)`, the chance of needing more than `d_max + 2m` fair
/// coin flips to see `m` heads: `Σ_{j<m} C(L, j) / 2^L` with `L = d_max + 2m`.
pub fn tail_probability(m: u64, d_max: i64) -> BigRational {
    assert!(m >= 1, "the increment law needs m ≥ 1");
    let l = d_max + 2 * m as i64;
    if l < m as i64 {
        return BigRational::one();
    }
    let l = l as u64;
    let mut sum = BigUint::zero();
    let mut c = BigUint::one();
    for j in 0..m.min(l + 1) {
        sum += &c;
        c = c * BigUint::from(l - j) / BigUint::from(j + 1);
    }
    BigRational::new(BigInt::from(sum), BigInt::one() << l)
}

/// The increment law for one value of `m`, truncated at `d_max` with the
/// remaining mass kept exactly in `tail`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepPmf {
    m: u64,
    d_max: i64,
    probs: Vec<BigRational>,
    tail: BigRational,
}

impl StepPmf {
    pub fn new(m: u64, d_max: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "step law needs m ≥ 1; states with m ≤ 0 are killed".into(),
            ));
        }
        let lo = -(m as i64);
        if d_max < lo {
            return Err(Error::InvalidArgument(format!(
                "d_max = {d_max} is below the minimum increment {lo}"
            )));
        }
        let probs = (lo..=d_max).map(|d| increment_probability(m, d)).collect();
        Ok(StepPmf {
            m,
            d_max,
            probs,
            tail: tail_probability(m, d_max),
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn d_min(&self) -> i64 {
        -(self.m as i64)
    }

    pub fn d_max(&self) -> i64 {
        self.d_max
    }

    /// `P(d)`; exact for any `d`, including beyond the truncation point.
    pub fn probability(&self, d: i64) -> BigRational {
        if d < self.d_min() {
            BigRational::zero()
        } else if d <= self.d_max {
            self.probs[(d - self.d_min()) as usize].clone()
        } else {
            increment_probability(self.m, d)
        }
    }

    /// `P(d > d_max)`.
    pub fn tail(&self) -> &BigRational {
        &self.tail
    }

    /// `(d, P(d))` for `d_min ≤ d ≤ d_max`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        let lo = self.d_min();
        self.probs
            .iter()
            .enumerate()
            .map(move |(k, p)| (lo + k as i64, p))
    }

    /// Table mass plus tail. Equals one exactly.
    pub fn total_mass(&self) -> BigRational {
        self.probs.iter().fold(self.tail.clone(), |acc, p| acc + p)
    }
}

/// [`StepPmf`] truncated at `d_max = 2m + 32`.
pub fn step_pmf(m: u64) -> Result<StepPmf> {
    StepPmf::new(m, 2 * m as i64 + 32)
}

/// Draws `Σ_{k=1}^{m} (g_k − 2)`, choosing the route by `m`.
pub fn sample_increment<R: Rng + ?Sized>(m: u64, rng: &mut R) -> i64 {
    debug_assert!(m >= 1);
    let flips = if m <= INVERSE_CDF_MAX_M {
        negative_binomial_inverse_cdf(m, rng).unwrap_or_else(|| negative_binomial_bits(m, rng))
    } else {
        negative_binomial_bits(m, rng)
    };
    flips as i64 - 2 * m as i64
}

/// Number of fair flips up to and including the `m`-th head, by inverting the
/// CDF with the ratio `P(k+1)/P(k) = k / (2(k − m + 1))` from `P(m) = 2^{−m}`.
///
/// Returns `None` in the far tail where the running sum stops resolving `u`.
pub fn negative_binomial_inverse_cdf<R: Rng + ?Sized>(m: u64, rng: &mut R) -> Option<u64> {
    let u: f64 = rng.random();
    let mut k = m;
    let mut p = 0.5f64.powi(m as i32);
    let mut cdf = p;
    while cdf <= u {
        p *= k as f64 / (2.0 * (k - m + 1) as f64);
        k += 1;
        cdf += p;
        if p < 1e-300 {
            return None;
        }
    }
    Some(k)
}

/// Number of fair flips up to and including the `m`-th head, reading 64 flips
/// per random word and locating the head by popcount.
pub fn negative_binomial_bits<R: Rng + ?Sized>(m: u64, rng: &mut R) -> u64 {
    let mut need = m;
    let mut flips = 0u64;
    loop {
        let mut word: u64 = rng.random();
        let ones = u64::from(word.count_ones());
        if ones < need {
            need -= ones;
            flips += 64;
            continue;
        }
        // Clear the lowest need − 1 set bits; the next one is the m-th head.
        for _ in 1..need {
            word &= word - 1;
        }
        return flips + u64::from(word.trailing_zeros()) + 1;
    }
}

/// Draws `Σ_{k=1}^{m} (g_k − 2)` with `m` separate geometric draws.
pub fn sample_increment_naive<R: Rng + ?Sized>(m: u64, rng: &mut R) -> i64 {
    let mut total = 0i64;
    for _ in 0..m {
        let mut g = 1i64;
        while rng.random::<bool>() {
            g += 1;
        }
        total += g - 2;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_for;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_m_values() {
        assert_eq!(increment_probability(1, -1), q(1, 2));
        assert_eq!(increment_probability(1, 0), q(1, 4));
        assert_eq!(increment_probability(1, 1), q(1, 8));
        assert_eq!(increment_probability(2, -2), q(1, 4));
        assert_eq!(increment_probability(2, -1), q(1, 4));
        assert_eq!(increment_probability(2, 0), q(3, 16));
        assert_eq!(increment_probability(2, -3), q(0, 1));
    }

    #[test]
    fn normalized_with_tail() {
        for m in 1..=20 {
            for d_max in [-(m as i64), 0, 5, 2 * m as i64 + 3] {
                assert!(
                    StepPmf::new(m, d_max).unwrap().total_mass().is_one(),
                    "m={m} d_max={d_max}"
                );
            }
        }
    }

    #[test]
    fn rejects_nonpositive_m() {
        assert!(step_pmf(0).is_err());
        assert!(StepPmf::new(3, -4).is_err());
    }

    #[test]
    fn routes_agree_in_mean() {
        let mut rng = rng_for(5, 0);
        for m in [1u64, 7, 64, 65, 300] {
            let draws = 40_000;
            let a: f64 = (0..draws)
                .map(|_| negative_binomial_bits(m, &mut rng) as f64)
                .sum::<f64>()
                / draws as f64;
            let sd = (2.0 * m as f64 / draws as f64).sqrt();
            assert!((a - 2.0 * m as f64).abs() < 5.0 * sd, "bits m={m}: {a}");
            if m <= INVERSE_CDF_MAX_M {
                let b: f64 = (0..draws)
                    .map(|_| negative_binomial_inverse_cdf(m, &mut rng).unwrap() as f64)
                    .sum::<f64>()
                    / draws as f64;
                assert!((b - 2.0 * m as f64).abs() < 5.0 * sd, "icdf m={m}: {b}");
            }
        }
    }

    #[test]
    fn bits_route_small_support() {
        let mut rng = rng_for(11, 0);
        for _ in 0..1000 {
            let k = negative_binomial_bits(3, &mut rng);
            assert!(k >= 3);
        }
    }
}
