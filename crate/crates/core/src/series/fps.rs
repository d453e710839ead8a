use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Truncated power series `c_0 + c_1 t + … + c_N t^N` with exact rational coefficients.
///
/// Binary operations between series of different orders truncate to the smaller one.
#[derive(Clone, PartialEq, Eq)]
pub struct Fps {
    coeffs: Vec<BigRational>,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Fps {
    pub fn zero(order: usize) -> Self {
        Fps {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut f = Fps::zero(order);
        f.coeffs[0] = c;
        f
    }

    pub fn one(order: usize) -> Self {
        Fps::constant(BigRational::one(), order)
    }

    /// The series variable `t`.
    pub fn var(order: usize) -> Self {
        Fps::monomial(1, order)
    }

    /// `t^k` (zero if `k > order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut f = Fps::zero(order);
        if k <= order {
            f.coeffs[k] = BigRational::one();
        }
        f
    }

    /// Coefficients given as integers, padded with zeros or truncated to `order`.
    pub fn from_integers(coeffs: &[i64], order: usize) -> Self {
        let mut f = Fps::zero(order);
        for (k, &c) in coeffs.iter().enumerate().take(order + 1) {
            f.coeffs[k] = int(c);
        }
        f
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series has at least its constant term"
        );
        Fps { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, BigRational::zero());
        Fps { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Fps {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut f = Fps::zero(n);
        for j in k..=n {
            f.coeffs[j] = self.coeffs[j - k].clone();
        }
        f
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Fps::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `1 / f` for a series with nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::InvalidArgument(
                "reciprocal needs a nonzero constant term".into(),
            ));
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut g = vec![BigRational::zero(); n + 1];
        g[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &g[k - j];
                }
            }
            g[k] = -acc * &inv0;
        }
        Ok(Fps { coeffs: g })
    }

    /// `f^α` for a series with constant term 1, from `f g' = α f' g`:
    /// `g_k = (1/k) Σ_{j=1}^{k} (α j − k + j) f_j g_{k−j}`.
    pub fn pow_rational(&self, alpha: &BigRational) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::InvalidArgument(
                "rational powers need constant term 1".into(),
            ));
        }
        let n = self.order();
        let mut g = vec![BigRational::zero(); n + 1];
        g[0] = BigRational::one();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = alpha * int(j as i64) - int((k - j) as i64);
                acc += w * &self.coeffs[j] * &g[k - j];
            }
            g[k] = acc / int(k as i64);
        }
        Ok(Fps { coeffs: g })
    }

    /// `self(inner)` for `inner` with zero constant term, by Horner's rule.
    pub fn compose(&self, inner: &Fps) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument(
                "composition needs an inner series with zero constant term".into(),
            ));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Terms c_k inner^k with k·val > n vanish.
        let val = inner.valuation().unwrap_or(n + 1);
        let top = (n / val).min(self.order());
        let mut acc = Fps::constant(self.coeffs[top].clone(), n);
        for k in (0..top).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Coefficient strings `p/q`.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.to_strings())
    }

    /// Parses the output of [`to_strings`](Self::to_strings).
    pub fn from_strings(items: &[String]) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| {
                s.parse::<BigRational>()
                    .map_err(|_| Error::InvalidArgument(format!("bad rational {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient list".into()));
        }
        Ok(Fps { coeffs })
    }

    /// Approximate value at `t` of the truncated polynomial.
    pub fn eval_f64(&self, t: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }
}

fn mul_integral(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let a: Vec<&BigInt> = a.iter().map(|c| c.numer()).collect();
    let b: Vec<&BigInt> = b.iter().map(|c| c.numer()).collect();
    (0..=n)
        .map(|k| {
            let mut acc = BigInt::zero();
            for j in 0..=k {
                if !a[j].is_zero() && !b[k - j].is_zero() {
                    acc += a[j] * b[k - j];
                }
            }
            BigRational::from_integer(acc)
        })
        .collect()
}

impl Mul for &Fps {
    type Output = Fps;

    fn mul(self, rhs: &Fps) -> Fps {
        let n = self.order().min(rhs.order());
        if self.is_integral() && rhs.is_integral() {
            return Fps {
                coeffs: mul_integral(&self.coeffs, &rhs.coeffs, n),
            };
        }
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = BigRational::zero();
                for j in 0..=k {
                    if !self.coeffs[j].is_zero() && !rhs.coeffs[k - j].is_zero() {
                        acc += &self.coeffs[j] * &rhs.coeffs[k - j];
                    }
                }
                acc
            })
            .collect();
        Fps { coeffs }
    }
}

impl Add for &Fps {
    type Output = Fps;

    fn add(self, rhs: &Fps) -> Fps {
        let n = self.order().min(rhs.order());
        Fps {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &Fps {
    type Output = Fps;

    fn sub(self, rhs: &Fps) -> Fps {
        let n = self.order().min(rhs.order());
        Fps {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl Neg for &Fps {
    type Output = Fps;

    fn neg(self) -> Fps {
        Fps {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! by_value {
    ($tr:ident, $f:ident) => {
        impl $tr for Fps {
            type Output = Fps;
            fn $f(self, rhs: Fps) -> Fps {
                (&self).$f(&rhs)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl fmt::Display for Fps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{a}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{a}t^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl fmt::Debug for Fps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn geometric_reciprocal() {
        let f = Fps::from_integers(&[1, -1], 8);
        let g = f.reciprocal().unwrap();
        assert!(g.coeffs().iter().all(|c| c.is_one()));
        assert!((&f * &g - Fps::one(8)).is_zero());
        assert!(Fps::var(3).reciprocal().is_err());
    }

    #[test]
    fn rational_power_gives_central_binomials() {
        // (1 − 4t)^{-1/2} = Σ C(2k, k) t^k
        let f = Fps::from_integers(&[1, -4], 10);
        let b = f.pow_rational(&q(-1, 2)).unwrap();
        let expected = [1, 2, 6, 20, 70, 252, 924, 3432, 12870, 48620, 184756];
        assert_eq!(b, Fps::from_integers(&expected, 10));
        let sq = f.pow_rational(&q(1, 2)).unwrap();
        assert_eq!(&sq * &sq, f);
    }

    #[test]
    fn composition() {
        // 1/(1 − u) at u = t + t² gives Fibonacci numbers
        let geo = Fps::from_integers(&[1; 12], 11);
        let inner = Fps::from_integers(&[0, 1, 1], 11);
        let f = geo.compose(&inner).unwrap();
        assert_eq!(
            f,
            Fps::from_integers(&[1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144], 11)
        );
        assert!(geo.compose(&Fps::one(11)).is_err());
    }

    #[test]
    fn pow_and_shift() {
        let f = Fps::from_integers(&[1, 1], 5);
        assert_eq!(f.pow(3), Fps::from_integers(&[1, 3, 3, 1], 5));
        assert_eq!(f.shift(2), Fps::from_integers(&[0, 0, 1, 1], 5));
        assert_eq!(Fps::var(5).valuation(), Some(1));
    }

    #[test]
    fn string_round_trip() {
        let f = Fps::from_coeffs(vec![q(1, 2), q(-3, 1), q(0, 1)]);
        let s = f.to_strings();
        assert_eq!(s, ["1/2", "-3/1", "0/1"]);
        assert_eq!(Fps::from_strings(&s).unwrap(), f);
        assert_eq!(f.to_string(), "1/2 - 3t + O(t^3)");
    }
}
