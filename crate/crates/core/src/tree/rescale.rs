use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tree::profile::FORMAT_VERSION;
use crate::tree::VerticalProfile;

/// Space normalization of abscissas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scaling {
    /// Abscissa `i` maps to `t = i / n^{1/4}`.
    #[default]
    QuarterPower,
    /// Abscissa `i` maps to `t = i / (2n)^{1/4}`, the normalization of the
    /// occupation measure `(1/n) Σ_k M_k Dirac(k / (2n)^{1/4})`.
    DoubledSize,
}

impl Scaling {
    /// Abscissa units per unit of rescaled time: `n^{1/4}` or `(2n)^{1/4}`.
    pub fn space_scale(self, n: f64) -> f64 {
        match self {
            Scaling::QuarterPower => n.powf(0.25),
            Scaling::DoubledSize => (2.0 * n).powf(0.25),
        }
    }
}

/// A rescaled point `(δ, m, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealTriple {
    pub delta: f64,
    pub m: f64,
    pub s: f64,
}

/// The triple of a profile as a function of rescaled time.
///
/// With `c` the space scale of the chosen [`Scaling`], grid point `k` sits at
/// `t_k = k / c` and carries `(c² Δ_k / n, c M_k / n, S_k / n)`. Under the default
/// scaling this is `(n^{-1/2} Δ, n^{-3/4} M, n^{-1} S)`. The grid covers
/// `[ℓ − 1, r + 1]` so that interpolation returns to the boundary values
/// `(0, 0, 0)` on the left and `(0, 0, 1)` on the right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaledTriple {
    pub n: u64,
    pub scaling: Scaling,
    first: i64,
    dt: f64,
    values: Vec<RealTriple>,
}

impl RescaledTriple {
    pub fn new(profile: &VerticalProfile, scaling: Scaling) -> Self {
        let n = profile.n() as f64;
        let c = scaling.space_scale(n);
        let first = profile.ell() - 1;
        let path = profile
            .triple(first, profile.r() + 1)
            .expect("window is nonempty");
        let values = path
            .points()
            .iter()
            .map(|z| RealTriple {
                delta: z.delta as f64 * c * c / n,
                m: z.m as f64 * c / n,
                s: z.s as f64 / n,
            })
            .collect();
        RescaledTriple {
            n: profile.n(),
            scaling,
            first,
            dt: 1.0 / c,
            values,
        }
    }

    /// Grid spacing in rescaled time.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `(t_k, value_k)` pairs.
    pub fn grid(&self) -> impl Iterator<Item = (f64, RealTriple)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| ((self.first + k as i64) as f64 * self.dt, *v))
    }

    /// Linear interpolation between grid points.
    pub fn at(&self, t: f64) -> RealTriple {
        let x = t / self.dt - self.first as f64;
        let last = self.values.len() - 1;
        if x <= 0.0 {
            return RealTriple {
                delta: 0.0,
                m: 0.0,
                s: 0.0,
            };
        }
        if x >= last as f64 {
            return self.values[last];
        }
        let k = x.floor() as usize;
        let w = x - k as f64;
        let (a, b) = (self.values[k], self.values[k + 1]);
        RealTriple {
            delta: a.delta + w * (b.delta - a.delta),
            m: a.m + w * (b.m - a.m),
            s: a.s + w * (b.s - a.s),
        }
    }

    pub fn max_m(&self) -> f64 {
        self.values.iter().map(|v| v.m).fold(0.0, f64::max)
    }

    pub fn terminal(&self) -> RealTriple {
        *self.values.last().expect("grid is nonempty")
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_real_csv(out, self.grid())
    }
}

/// Rows `t,delta,m,s` in scientific notation with 17 significant digits.
pub fn write_real_csv<W: Write>(
    mut out: W,
    rows: impl Iterator<Item = (f64, RealTriple)>,
) -> Result<()> {
    writeln!(out, "# format_version: {FORMAT_VERSION}")?;
    writeln!(out, "t,delta,m,s")?;
    for (t, v) in rows {
        writeln!(out, "{t:.16e},{:.16e},{:.16e},{:.16e}", v.delta, v.m, v.s)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let r = RescaledTriple::new(&VerticalProfile::single(), Scaling::QuarterPower);
        assert_eq!(r.at(0.0).m, 1.0);
        assert_eq!(r.terminal().s, 1.0);
        assert_eq!(r.at(-5.0).s, 0.0);
        assert_eq!(r.at(5.0).s, 1.0);
    }

    #[test]
    fn exponents() {
        let p = VerticalProfile::new(0, vec![1, 1, 2, 1, 1]).unwrap();
        let r = RescaledTriple::new(&p, Scaling::QuarterPower);
        let c = 6f64.powf(0.25);
        assert!((r.dt() - 1.0 / c).abs() < 1e-15);
        let v = r.at(2.0 / c);
        assert!((v.m - 2.0 * 6f64.powf(-0.75)).abs() < 1e-12);
        assert!((v.delta - 1.0 / 6f64.sqrt()).abs() < 1e-12);
        assert!((v.s - 4.0 / 6.0).abs() < 1e-12);
        // halfway between abscissas 2 and 3
        let h = r.at(2.5 / c);
        assert!((h.m - 1.5 * 6f64.powf(-0.75)).abs() < 1e-12);
    }

    #[test]
    fn doubled_size_scaling_uses_2n() {
        let p = VerticalProfile::new(-1, vec![1, 1]).unwrap();
        let r = RescaledTriple::new(&p, Scaling::DoubledSize);
        assert!((r.dt() - 4f64.powf(-0.25)).abs() < 1e-15);
        assert!((r.at(0.0).m - 4f64.powf(0.25) / 2.0).abs() < 1e-12);
    }
}
