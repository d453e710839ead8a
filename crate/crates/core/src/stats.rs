//! Two-sample Kolmogorov–Smirnov, chi-square uniformity and moment estimates.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Finite real observations.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample(i));
        }
        Ok(Sample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sample::new(values)
    }
}

/// Result of a test. For chi-square, `n1` is the number of draws and `n2` the number of cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

/// `sup |F_a − F_b|` with the asymptotic Kolmogorov p-value at effective size
/// `n1 n2 / (n1 + n2)`.
pub fn ks_two_sample(a: &Sample, b: &Sample) -> Result<TestReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut x = a.values.clone();
    let mut y = b.values.clone();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n1, n2) = (x.len(), y.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n1 && j < n2 {
        let v = x[i].min(y[j]);
        while i < n1 && x[i] <= v {
            i += 1;
        }
        while j < n2 && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    let ne = (n1 * n2) as f64 / (n1 + n2) as f64;
    Ok(TestReport {
        statistic: d,
        p_value: kolmogorov_survival(ne.sqrt() * d),
        n1,
        n2,
    })
}

/// `P(K > x)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let p = if x < 1.18 {
        // Dual series, fast for small arguments.
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * x * x);
        let s: f64 = (1..=6)
            .map(|k| {
                let j = (2 * k - 1) as f64;
                (-j * j * c).exp()
            })
            .sum();
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * s
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let k = k as f64;
                let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * k * k * x * x).exp()
            })
            .sum();
        2.0 * s
    };
    p.clamp(0.0, 1.0)
}

/// Pearson chi-square against equal cell probabilities, `cells − 1` degrees of freedom.
///
/// Refuses tables whose expected count per cell is below 5.
pub fn chi_square_uniform(counts: &[u64]) -> Result<TestReport> {
    if counts.len() < 2 {
        return Err(Error::InvalidArgument(
            "chi-square needs at least two cells".into(),
        ));
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    if expected < 5.0 {
        return Err(Error::SparseCells {
            min_expected: expected,
        });
    }
    let statistic: f64 = counts
        .iter()
        .map(|&c| {
            let r = c as f64 - expected;
            r * r / expected
        })
        .sum();
    let law = ChiSquared::new((counts.len() - 1) as f64).expect("positive degrees of freedom");
    Ok(TestReport {
        statistic,
        p_value: law.sf(statistic),
        n1: total as usize,
        n2: counts.len(),
    })
}

/// Mean of `x^p` over the sample with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub std_error: f64,
}

impl MomentEstimate {
    /// Number of standard errors between the estimate and `target`.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = self.mean - target;
        if self.std_error == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / self.std_error
        }
    }
}

pub fn moment_estimate(sample: &Sample, p: i32) -> Result<MomentEstimate> {
    mean_with_error(sample.values.iter().map(|x| x.powi(p)))
}

/// Mean and standard error (sample variance with `N − 1`) of a stream of values.
pub fn mean_with_error(values: impl Iterator<Item = f64>) -> Result<MomentEstimate> {
    // Welford accumulation.
    let (mut n, mut mean, mut m2) = (0usize, 0.0f64, 0.0f64);
    for v in values {
        n += 1;
        let d = v - mean;
        mean += d / n as f64;
        m2 += d * (v - mean);
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let std_error = if n > 1 {
        (m2 / (n - 1) as f64 / n as f64).sqrt()
    } else {
        0.0
    };
    Ok(MomentEstimate { mean, std_error })
}
