//! Truncated power series with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("constant term must be {0}")]
    ConstantTerm(&'static str),
    #[error("series needs at least {need} terms, has {have}")]
    TooShort { need: usize, have: usize },
    #[error("bad coefficient `{0}`")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn int(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Σ_{i<N} a_i x^i, known modulo x^N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPowerSeries {
    pub var: String,
    pub coeffs: Vec<BigRational>,
}

impl RationalPowerSeries {
    pub fn new(var: &str, coeffs: Vec<BigRational>) -> Self {
        RationalPowerSeries { var: var.to_string(), coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = BigInt>>(var: &str, it: I) -> Self {
        Self::new(var, it.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn zero(var: &str, n: usize) -> Self {
        Self::new(var, vec![BigRational::zero(); n])
    }

    pub fn one(var: &str, n: usize) -> Self {
        let mut s = Self::zero(var, n);
        if n > 0 {
            s.coeffs[0] = BigRational::one();
        }
        s
    }

    /// The series x, truncated at n.
    pub fn x(var: &str, n: usize) -> Self {
        let mut s = Self::zero(var, n);
        if n > 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    /// Truncation order N.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self::new(&self.var, self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn is_normalized(&self) -> bool {
        self.coeffs.first().is_some_and(|c| c.is_one())
    }

    /// All coefficients integral.
    pub fn integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// Valuation: index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        Self::new(&self.var, (0..n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        Self::new(&self.var, (0..n).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(&self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(&self.var, out)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.len();
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(SeriesError::ConstantTerm("nonzero"));
        }
        let inv0 = c0.recip();
        let mut out = vec![BigRational::zero(); n];
        if n > 0 {
            out[0] = inv0.clone();
        }
        for k in 1..n {
            let mut s = BigRational::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -s * &inv0;
        }
        Ok(Self::new(&self.var, out))
    }

    /// θ = x d/dx.
    pub fn theta(&self) -> Self {
        Self::new(&self.var, self.coeffs.iter().enumerate().map(|(i, c)| c * rat(i as i64)).collect())
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.is_normalized() {
            return Err(SeriesError::ConstantTerm("1"));
        }
        // θ log f = θf / f
        let q = self.theta().mul(&self.inverse()?);
        let mut out = q.coeffs;
        for (i, c) in out.iter_mut().enumerate().skip(1) {
            *c /= rat(i as i64);
        }
        if let Some(c) = out.first_mut() {
            *c = BigRational::zero();
        }
        Ok(Self::new(&self.var, out))
    }

    /// exp of a series with constant term 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(SeriesError::ConstantTerm("0"));
        }
        let n = self.len();
        let mut g = vec![BigRational::zero(); n];
        if n > 0 {
            g[0] = BigRational::one();
        }
        // θg = g θf
        for k in 1..n {
            let mut s = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s += rat(j as i64) * &self.coeffs[j] * &g[k - j];
                }
            }
            g[k] = s / rat(k as i64);
        }
        Ok(Self::new(&self.var, g))
    }

    /// self(g(x)) for g with zero constant term.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeff(0).is_zero() {
            return Err(SeriesError::ConstantTerm("0"));
        }
        let n = self.len().min(g.len());
        let mut acc = Self::zero(&g.var, n);
        for c in self.coeffs.iter().take(n).rev() {
            acc = acc.mul(&g.truncate(n));
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse of x·(c + O(x)), c ≠ 0, named in `var`.
    pub fn reverse(&self, var: &str) -> Result<Self> {
        let n = self.len();
        if !self.coeff(0).is_zero() || self.coeff(1).is_zero() {
            return Err(SeriesError::ConstantTerm("0 with nonzero linear term"));
        }
        let c1inv = self.coeff(1).recip();
        // fixed point y = (x − (f(y) − c y)) / c, one new coefficient per pass
        let mut y = Self::zero(var, n);
        if n > 1 {
            y.coeffs[1] = c1inv.clone();
        }
        for k in 2..n {
            let fy = self.compose(&y)?;
            let err = fy.coeff(k);
            y.coeffs[k] = -err * &c1inv;
        }
        y.var = var.to_string();
        Ok(y)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings(var: &str, s: &[String]) -> Result<Self> {
        let coeffs = s.iter().map(|c| parse_rational(c)).collect::<Result<_>>()?;
        Ok(Self::new(var, coeffs))
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || SeriesError::Parse(s.to_string());
    match t.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for RationalPowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*{}", self.var)?,
                _ => write!(f, "{c}*{}^{i}", self.var)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.len())
    }
}

/// JSON form: exact coefficients as strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesJson {
    pub var: String,
    pub coeffs: Vec<String>,
}

impl From<&RationalPowerSeries> for SeriesJson {
    fn from(s: &RationalPowerSeries) -> Self {
        SeriesJson { var: s.var.clone(), coeffs: s.to_strings() }
    }
}

impl TryFrom<&SeriesJson> for RationalPowerSeries {
    type Error = SeriesError;
    fn try_from(j: &SeriesJson) -> Result<Self> {
        RationalPowerSeries::from_strings(&j.var, &j.coeffs)
    }
}

impl Serialize for RationalPowerSeries {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson::from(self).serialize(ser)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(n: usize) -> RationalPowerSeries {
        RationalPowerSeries::new("x", vec![rat(1); n])
    }

    #[test]
    fn inverse_of_geometric() {
        let inv = geometric(6).inverse().unwrap();
        assert_eq!(inv.coeffs, vec![rat(1), rat(-1), rat(0), rat(0), rat(0), rat(0)]);
    }

    #[test]
    fn exp_log_round_trip() {
        let f = RationalPowerSeries::new("x", vec![rat(0), rat(2), rat(-3), rat(5), rat(7)]);
        let g = f.exp().unwrap().log().unwrap();
        assert_eq!(g, f);
        // log(1/(1−x)) = Σ x^k/k
        let l = geometric(5).log().unwrap();
        assert_eq!(l.coeff(4), BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn reversion() {
        // x/(1−x) reverses to x/(1+x)
        let mut f = geometric(8);
        f.coeffs[0] = rat(0);
        let g = f.reverse("q").unwrap();
        for k in 1..8 {
            assert_eq!(g.coeff(k), rat(if k % 2 == 1 { 1 } else { -1 }));
        }
        let id = f.compose(&g).unwrap();
        assert_eq!(id.coeffs, RationalPowerSeries::x("q", 8).coeffs);
    }

    #[test]
    fn parse_and_json() {
        let s = RationalPowerSeries::new("x", vec![rat(1), BigRational::new((-3).into(), 7.into())]);
        let j = SeriesJson::from(&s);
        assert_eq!(j.coeffs, vec!["1".to_string(), "-3/7".to_string()]);
        assert_eq!(RationalPowerSeries::try_from(&j).unwrap(), s);
        assert!(parse_rational("1/0").is_err());
    }
}
