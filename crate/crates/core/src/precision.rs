//! Fixed-point complex numbers on `BigInt`: a value v is stored as
//! round(v · 2^bits). All operations take the working precision from a [`Ctx`].

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cx {
    pub re: BigInt,
    pub im: BigInt,
}

impl Add for &Cx {
    type Output = Cx;
    fn add(self, o: &Cx) -> Cx {
        Cx { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Cx {
    type Output = Cx;
    fn sub(self, o: &Cx) -> Cx {
        Cx { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx { re: -&self.re, im: -&self.im }
    }
}

impl Cx {
    pub fn zero() -> Cx {
        Cx { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Cx {
        Cx { re: self.re.clone(), im: -&self.im }
    }

    pub fn add_assign(&mut self, o: &Cx) {
        self.re += &o.re;
        self.im += &o.im;
    }

    pub fn mul_int(&self, k: &BigInt) -> Cx {
        Cx { re: &self.re * k, im: &self.im * k }
    }

    pub fn div_int(&self, k: &BigInt) -> Cx {
        Cx { re: &self.re / k, im: &self.im / k }
    }

    /// Multiplication by i.
    pub fn times_i(&self) -> Cx {
        Cx { re: -&self.im, im: self.re.clone() }
    }
}

pub type CMat = Vec<Vec<Cx>>;

/// Working precision in bits after the binary point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ctx {
    pub bits: u64,
}

impl Ctx {
    /// Precision for `digits` decimal digits plus guard bits.
    pub fn with_digits(digits: u32) -> Ctx {
        Ctx { bits: (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 96 }
    }

    pub fn one(&self) -> Cx {
        Cx { re: BigInt::one() << self.bits, im: BigInt::zero() }
    }

    pub fn i(&self) -> Cx {
        Cx { re: BigInt::zero(), im: BigInt::one() << self.bits }
    }

    pub fn real(&self, r: &BigRational) -> BigInt {
        (r.numer() << self.bits).div_floor(r.denom())
    }

    pub fn from_rational(&self, r: &BigRational) -> Cx {
        Cx { re: self.real(r), im: BigInt::zero() }
    }

    pub fn from_i64(&self, k: i64) -> Cx {
        Cx { re: BigInt::from(k) << self.bits, im: BigInt::zero() }
    }

    /// Nearest representable value to an f64 (exact dyadic conversion).
    pub fn from_f64(&self, re: f64, im: f64) -> Cx {
        let conv = |v: f64| -> BigInt {
            let r = BigRational::from_float(v).unwrap_or_else(BigRational::zero);
            (r.numer() << self.bits) / r.denom()
        };
        Cx { re: conv(re), im: conv(im) }
    }

    pub fn mul_real(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }

    pub fn mul(&self, a: &Cx, b: &Cx) -> Cx {
        let rr = &a.re * &b.re;
        let ii = &a.im * &b.im;
        let ri = &a.re * &b.im;
        let ir = &a.im * &b.re;
        Cx { re: (rr - ii) >> self.bits, im: (ri + ir) >> self.bits }
    }

    pub fn scale_real(&self, a: &Cx, r: &BigInt) -> Cx {
        Cx { re: self.mul_real(&a.re, r), im: self.mul_real(&a.im, r) }
    }

    pub fn norm_sqr(&self, a: &Cx) -> BigInt {
        (&a.re * &a.re + &a.im * &a.im) >> self.bits
    }

    pub fn recip(&self, a: &Cx) -> Option<Cx> {
        let n = &a.re * &a.re + &a.im * &a.im;
        if n.is_zero() {
            return None;
        }
        let shift = 3 * self.bits;
        Some(Cx { re: ((&a.re << shift) / &n) >> self.bits, im: (-(&a.im << shift) / &n) >> self.bits })
    }

    /// a / b as a·b̄ / |b|², keeping relative precision when |b| is large.
    pub fn div(&self, a: &Cx, b: &Cx) -> Option<Cx> {
        let n = &b.re * &b.re + &b.im * &b.im;
        if n.is_zero() {
            return None;
        }
        let re = (&a.re * &b.re + &a.im * &b.im) << self.bits;
        let im = (&a.im * &b.re - &a.re * &b.im) << self.bits;
        Some(Cx { re: re.div_floor(&n), im: im.div_floor(&n) })
    }

    pub fn pow(&self, a: &Cx, e: u32) -> Cx {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn to_f64(&self, a: &BigInt) -> f64 {
        let shift = a.bits().saturating_sub(60);
        let top = (a >> shift).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(shift as i32 - self.bits as i32)
    }

    pub fn to_c64(&self, a: &Cx) -> (f64, f64) {
        (self.to_f64(&a.re), self.to_f64(&a.im))
    }

    pub fn abs_f64(&self, a: &Cx) -> f64 {
        let (x, y) = self.to_c64(a);
        x.hypot(y)
    }

    /// Nearest integer to the real part.
    pub fn round_re(&self, a: &Cx) -> BigInt {
        let half = BigInt::one() << (self.bits - 1);
        (&a.re + half) >> self.bits
    }

    /// Distance from a to the nearest Gaussian integer on the real axis,
    /// as log10 (−∞ for exact).
    pub fn integrality_log10(&self, a: &Cx) -> f64 {
        let n = self.round_re(a) << self.bits;
        let dr = (&a.re - n).abs();
        let di = a.im.abs();
        let d = dr.max(di);
        if d.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = d.bits() as f64 - self.bits as f64;
        bits * std::f64::consts::LOG10_2
    }

    /// arctan(1/k) by its Taylor series.
    fn atan_inv(&self, k: u64) -> BigInt {
        let one = BigInt::one() << (self.bits + 8);
        let k = BigInt::from(k);
        let k2 = &k * &k;
        let mut term = &one / &k;
        let mut sum = term.clone();
        let mut n = 1u64;
        while !term.is_zero() {
            term = -term / &k2;
            n += 2;
            sum += &term / BigInt::from(n);
        }
        sum >> 8
    }

    pub fn pi(&self) -> BigInt {
        (self.atan_inv(5) * 16) - (self.atan_inv(239) * 4)
    }

    /// ln 2 = Σ 1/(k 2^k).
    pub fn ln2(&self) -> BigInt {
        let b = self.bits + 8;
        let mut sum = BigInt::zero();
        let mut k = 1u64;
        loop {
            let t = (BigInt::one() << b) >> k;
            let t = t / BigInt::from(k);
            if t.is_zero() {
                break;
            }
            sum += t;
            k += 1;
        }
        sum >> 8
    }

    /// ζ(3) = (5/2) Σ_{n≥1} (−1)^{n+1} / (n³ C(2n, n)).
    pub fn zeta3(&self) -> BigInt {
        let b = self.bits + 8;
        let mut sum = BigInt::zero();
        let mut central = BigInt::one();
        let mut n = 1u64;
        loop {
            // C(2n, n) = C(2n−2, n−1)·(2n)(2n−1)/n²
            central = central * BigInt::from(2 * n) * BigInt::from(2 * n - 1) / BigInt::from(n * n);
            let den = BigInt::from(n).pow(3) * &central;
            let t = (BigInt::one() << b) / den;
            if t.is_zero() {
                break;
            }
            if n % 2 == 1 {
                sum += t;
            } else {
                sum -= t;
            }
            n += 1;
        }
        (sum * 5 / 2) >> 8
    }

    pub fn matmul(&self, a: &CMat, b: &CMat) -> CMat {
        let n = a.len();
        let k = b.len();
        let m = b.first().map_or(0, |r| r.len());
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut s = Cx::zero();
                        for t in 0..k {
                            s.add_assign(&self.mul(&a[i][t], &b[t][j]));
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }

    pub fn identity(&self, n: usize) -> CMat {
        (0..n).map(|i| (0..n).map(|j| if i == j { self.one() } else { Cx::zero() }).collect()).collect()
    }

    /// Gauss–Jordan with partial pivoting; `None` if singular to working precision.
    pub fn inverse(&self, a: &CMat) -> Option<CMat> {
        let n = a.len();
        let mut m: Vec<Vec<Cx>> = a
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { self.one() } else { Cx::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let piv = (c..n).max_by(|&x, &y| self.norm_sqr(&m[x][c]).cmp(&self.norm_sqr(&m[y][c])))?;
            if m[piv][c].is_zero() {
                return None;
            }
            m.swap(c, piv);
            let inv = self.recip(&m[c][c])?;
            for x in m[c].iter_mut() {
                *x = self.mul(x, &inv);
            }
            for r in 0..n {
                if r == c || m[r][c].is_zero() {
                    continue;
                }
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let t = self.mul(&f, &m[c][j]);
                    m[r][j] = &m[r][j] - &t;
                }
            }
        }
        Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    pub fn transpose(&self, a: &CMat) -> CMat {
        crate::linalg::transpose(a)
    }

    pub fn to_f64_matrix(&self, a: &CMat) -> Vec<Vec<(f64, f64)>> {
        a.iter().map(|r| r.iter().map(|x| self.to_c64(x)).collect()).collect()
    }

    /// Rounded integer matrix and the worst log10 distance to it.
    pub fn round_matrix(&self, a: &CMat) -> (Vec<Vec<BigInt>>, f64) {
        let mut worst = f64::NEG_INFINITY;
        let r = a
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        worst = worst.max(self.integrality_log10(x));
                        self.round_re(x)
                    })
                    .collect()
            })
            .collect();
        (r, worst)
    }
}
