//! Mirror map, Yukawa coupling and genus-0 BPS numbers at a MUM point,
//! all in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::ode::{self, FrobeniusBasis, OdeError, ThetaOperator};
use crate::series::{rat, RationalPowerSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BpsError {
    #[error("need at least {need} terms, have {have}")]
    TooShort { need: usize, have: usize },
    #[error("operator is not of order 4 with a MUM point at 0")]
    NotMum,
    #[error("ω₀ vanishes at 0")]
    VanishingPeriod,
    #[error("n₀({d}) = {value} is not an integer")]
    NonInteger { d: usize, value: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ode(#[from] OdeError),
}

pub type Result<T> = std::result::Result<T, BpsError>;

/// q = x·exp(ω₁^reg/ω₀) and its inverse x(q).
#[derive(Clone, Debug, Serialize)]
pub struct MirrorMapData {
    pub q_of_x: RationalPowerSeries,
    pub x_of_q: RationalPowerSeries,
    /// ω₀ and ω₁^reg in x, kept for the Yukawa coupling
    #[serde(skip)]
    pub omega0: RationalPowerSeries,
    #[serde(skip)]
    pub omega1: RationalPowerSeries,
}

#[derive(Clone, Debug, Serialize)]
pub struct YukawaSeries {
    pub deg: i64,
    /// K_ttt(q) with K_ttt(0) = deg
    pub k: RationalPowerSeries,
}

pub fn mirror_map(fb: &FrobeniusBasis, n: usize) -> Result<MirrorMapData> {
    if fb.order < 2 {
        return Err(BpsError::NotMum);
    }
    let w0 = fb.omega0().truncate(n);
    let w1 = fb.reg(1).truncate(n);
    if w0.len() < n {
        return Err(BpsError::TooShort { need: n, have: w0.len() });
    }
    let c0 = w0.coeff(0);
    if c0.is_zero() {
        return Err(BpsError::VanishingPeriod);
    }
    let ratio = w1.mul(&w0.inverse()?);
    let e = ratio.exp()?;
    // q = x·e
    let mut qc = vec![BigRational::zero()];
    qc.extend(e.coeffs.iter().take(n - 1).cloned());
    let q_of_x = RationalPowerSeries::new(&w0.var, qc);
    let x_of_q = q_of_x.reverse("q")?;
    Ok(MirrorMapData { q_of_x, x_of_q, omega0: w0, omega1: w1 })
}

/// A_k(x) = Σ_i x^i [θ^k] P_i as a series with n terms.
fn theta_coefficient(op: &ThetaOperator, k: usize, n: usize) -> RationalPowerSeries {
    let coeffs = (0..n)
        .map(|i| op.coeffs.get(i).and_then(|row| row.get(k)).map_or_else(BigRational::zero, |c| BigRational::from_integer(c.clone())))
        .collect();
    RationalPowerSeries::new(&op.var, coeffs)
}

/// Y(x) = x³ C_xxx from θ log Y = −½ A₃/A₄, i.e. (d/dx) log C_xxx = −½ C₃/C₄ in
/// the ∂_x form.
fn yukawa_x(op: &ThetaOperator, n: usize) -> Result<RationalPowerSeries> {
    let a4 = theta_coefficient(op, 4, n);
    let a3 = theta_coefficient(op, 3, n);
    let r = a3.mul(&a4.inverse()?).scale(&BigRational::new((-1).into(), 2.into()));
    // integrate θ: coefficient m gets 1/m; the constant term of r must vanish
    if !r.coeff(0).is_zero() {
        return Err(BpsError::NotMum);
    }
    let log = RationalPowerSeries::new(
        &op.var,
        r.coeffs.iter().enumerate().map(|(m, c)| if m == 0 { BigRational::zero() } else { c / rat(m as i64) }).collect(),
    );
    Ok(log.exp()?)
}

/// K_ttt(q) = Y / (ω₀² (θ_x t)³) at x = x(q), scaled so that K_ttt(0) = deg.
pub fn yukawa(op: &ThetaOperator, deg: i64, mm: &MirrorMapData, n: usize) -> Result<YukawaSeries> {
    if op.order() != 4 || !ode::is_mum(op) {
        return Err(BpsError::NotMum);
    }
    let n = n.min(mm.x_of_q.len());
    let y = yukawa_x(op, n)?;
    let w0 = mm.omega0.truncate(n);
    // θ_x t = 1 + θ(ω₁^reg/ω₀)
    let dt = RationalPowerSeries::one(&w0.var, n).add(&mm.omega1.truncate(n).mul(&w0.inverse()?).theta());
    let den = w0.mul(&w0).mul(&dt).mul(&dt).mul(&dt);
    let kx = y.mul(&den.inverse()?);
    let kq = kx.compose(&mm.x_of_q.truncate(n))?;
    let k0 = kq.coeff(0);
    if k0.is_zero() {
        return Err(BpsError::VanishingPeriod);
    }
    let k = kq.scale(&(rat(deg) / k0));
    Ok(YukawaSeries { deg, k: RationalPowerSeries::new("q", k.coeffs) })
}

/// n₀(1..=dmax) from K_ttt = deg + Σ_d n₀(d) d³ q^d/(1 − q^d).
pub fn bps_genus0(ys: &YukawaSeries, dmax: usize) -> Result<Vec<BigInt>> {
    if ys.k.len() <= dmax {
        return Err(BpsError::TooShort { need: dmax + 1, have: ys.k.len() });
    }
    // K_d = Σ_{k | d} k³ n_k
    let mut n: Vec<BigRational> = vec![BigRational::zero(); dmax + 1];
    for d in 1..=dmax {
        let mut acc = ys.k.coeff(d);
        for k in 1..d {
            if d % k == 0 {
                acc -= &n[k] * rat((k * k * k) as i64);
            }
        }
        n[d] = acc / rat((d * d * d) as i64);
    }
    let mut out = Vec::with_capacity(dmax);
    for (d, v) in n.into_iter().enumerate().skip(1) {
        if !v.is_integer() {
            return Err(BpsError::NonInteger { d, value: v.to_string() });
        }
        out.push(v.to_integer());
    }
    Ok(out)
}

/// Frobenius basis, mirror map, Yukawa coupling and n₀(1..=dmax) of `op`.
pub fn bps_from_operator(op: &ThetaOperator, deg: i64, dmax: usize) -> Result<(YukawaSeries, Vec<BigInt>)> {
    let n = dmax + 1;
    let fb = ode::frobenius_basis(op, n)?;
    let mm = mirror_map(&fb, n)?;
    let ys = yukawa(op, deg, &mm, n)?;
    let ns = bps_genus0(&ys, dmax)?;
    Ok((ys, ns))
}

/// Every series of `fb` multiplied by `c`.
pub fn rescale(fb: &FrobeniusBasis, c: &BigRational) -> FrobeniusBasis {
    FrobeniusBasis { order: fb.order, series: fb.series.iter().map(|s| s.scale(c)).collect() }
}

impl YukawaSeries {
    pub fn constant(&self) -> BigRational {
        self.k.coeff(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIGMA: &str = "121θ^4 - 77x(130θ^4+266θ^3+210θ^2+77θ+11) - x^2(32126θ^4+89990θ^3+103725θ^2+55253θ+11198) - x^3(28723θ^4+74184θ^3+63474θ^2+20625θ+1716) - 7x^4(1135θ^4+2336θ^3+1881θ^2+713θ+110) - 49x^5(θ+1)^4";

    fn ints(v: &[&str]) -> Vec<BigInt> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn quintic() {
        let op = ThetaOperator::parse("x", "θ^4 - 5x(5θ+1)(5θ+2)(5θ+3)(5θ+4)").unwrap();
        let fb = ode::frobenius_basis(&op, 6).unwrap();
        let mm = mirror_map(&fb, 6).unwrap();
        assert_eq!(mm.x_of_q.coeff(1), rat(1));
        assert_eq!(mm.x_of_q.coeff(2), rat(-770));
        let (ys, n) = bps_from_operator(&op, 5, 4).unwrap();
        assert_eq!(ys.constant(), rat(5));
        assert_eq!(n, ints(&["2875", "609250", "317206375", "242467530000"]));
    }

    #[test]
    fn mirror_map_round_trip() {
        let op = ThetaOperator::parse("x", SIGMA).unwrap();
        let fb = ode::frobenius_basis(&op, 30).unwrap();
        let mm = mirror_map(&fb, 30).unwrap();
        assert_eq!(mm.q_of_x.coeff(1), rat(1));
        let back = mm.x_of_q.compose(&mm.q_of_x).unwrap();
        assert_eq!(back, RationalPowerSeries::x("x", 30));
    }

    #[test]
    fn sigma_x_side() {
        let op = ThetaOperator::parse("x", SIGMA).unwrap();
        let (ys, n) = bps_from_operator(&op, 33, 11).unwrap();
        assert_eq!(ys.constant(), rat(33));
        let want = ints(&[
            "252", "1854", "27156", "567063", "14514039", "424256409", "13599543618", "466563312360",
            "16861067232735", "634912711612848", "24717672325914858",
        ]);
        assert_eq!(n, want);
    }

    #[test]
    fn sigma_z_side() {
        let op = ThetaOperator::parse("x", SIGMA).unwrap();
        let zop = ode::invert_and_conjugate(&op, &rat(-1), "z").unwrap();
        let (ys, n) = bps_from_operator(&zop, 21, 10).unwrap();
        assert_eq!(ys.constant(), rat(21));
        let want = ints(&[
            "387", "4671", "124323", "4782996", "226411803", "12249769449", "727224033330", "46217599569117",
            "3094575464496057", "215917815744645750",
        ]);
        assert_eq!(n, want);
    }

    #[test]
    fn rescaled_period_gives_same_numbers() {
        let op = ThetaOperator::parse("x", SIGMA).unwrap();
        let fb = ode::frobenius_basis(&op, 6).unwrap();
        let base = yukawa(&op, 33, &mirror_map(&fb, 6).unwrap(), 6).unwrap();
        let scaled = rescale(&fb, &BigRational::new((-7).into(), 3.into()));
        let mm = mirror_map(&scaled, 6).unwrap();
        assert_eq!(yukawa(&op, 33, &mm, 6).unwrap().k, base.k);
    }
}
