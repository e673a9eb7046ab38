//! Univariate polynomials over Q, simple number fields Q[x]/(f), and the
//! factor/root helpers used for Riemann schemes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::series::rat;

/// Coefficients lowest first. Trailing zeros are trimmed by [`trim`].
pub type QPoly = Vec<BigRational>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &QPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn from_ints(v: &[BigInt]) -> QPoly {
    let mut p: QPoly = v.iter().cloned().map(BigRational::from_integer).collect();
    trim(&mut p);
    p
}

pub fn add(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    let mut out: QPoly = (0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect();
    trim(&mut out);
    out
}

pub fn scale(a: &QPoly, c: &BigRational) -> QPoly {
    let mut out: QPoly = a.iter().map(|x| x * c).collect();
    trim(&mut out);
    out
}

pub fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// (quotient, remainder).
pub fn divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            r[dr - db + j] -= &c * bj;
        }
        q[dr - db] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn monic(a: &QPoly) -> QPoly {
    match degree(a) {
        Some(d) => scale(a, &a[d].recip()),
        None => Vec::new(),
    }
}

pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

pub fn derivative(a: &QPoly) -> QPoly {
    let mut out: QPoly = a.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect();
    trim(&mut out);
    out
}

pub fn eval(a: &QPoly, x: &BigRational) -> BigRational {
    a.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Integer multiple with gcd 1 and positive leading coefficient.
pub fn primitive(a: &QPoly) -> Vec<BigInt> {
    let lcm = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = a.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) { -1 } else { 1 };
    ints.iter().map(|c| c / &g * sign).collect()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational roots with multiplicity, and the remaining factor (monic).
/// Candidate roots come from the rational root test, so the constant and
/// leading coefficients must be moderately sized.
pub fn rational_roots(a: &QPoly) -> (Vec<(BigRational, usize)>, QPoly) {
    let mut rest = monic(a);
    let mut roots = Vec::new();
    // zero roots first
    let mut zeros = 0;
    while rest.first().is_some_and(|c| c.is_zero()) {
        rest.remove(0);
        zeros += 1;
    }
    if zeros > 0 {
        roots.push((BigRational::zero(), zeros));
    }
    if degree(&rest).unwrap_or(0) == 0 {
        return (roots, rest);
    }
    let ints = primitive(&rest);
    let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
        return (roots, rest);
    };
    let mut cands: Vec<BigRational> = Vec::new();
    for p in &ps {
        for q in &qs {
            for s in [1, -1] {
                let r = BigRational::new(p * s, q.clone());
                if !cands.contains(&r) {
                    cands.push(r);
                }
            }
        }
    }
    cands.sort();
    for r in cands {
        let lin = vec![-r.clone(), BigRational::one()];
        let mut k = 0;
        loop {
            if degree(&rest).unwrap_or(0) == 0 {
                break;
            }
            let (q, rem) = divrem(&rest, &lin);
            if !rem.is_empty() {
                break;
            }
            rest = q;
            k += 1;
        }
        if k > 0 {
            roots.push((r, k));
        }
    }
    (roots, rest)
}

/// Square-free decomposition: (factor, multiplicity) with monic factors.
pub fn squarefree(a: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    let f = monic(a);
    if degree(&f).unwrap_or(0) == 0 {
        return out;
    }
    let mut g = gcd(&f, &derivative(&f));
    let mut w = divrem(&f, &g).0;
    let mut i = 1;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &g);
        let z = divrem(&w, &y).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((monic(&z), i));
        }
        g = divrem(&g, &y).0;
        w = y;
        i += 1;
    }
    out
}

/// Complex roots by Durand–Kerner in f64; for display and path planning.
pub fn approx_roots(a: &QPoly) -> Vec<(f64, f64)> {
    let Some(d) = degree(a) else { return Vec::new() };
    if d == 0 {
        return Vec::new();
    }
    let m = monic(a);
    let c: Vec<f64> = m.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
    type C = (f64, f64);
    let mulc = |a: C, b: C| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let divc = |a: C, b: C| {
        let n = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
    };
    let ev = |z: C| c.iter().rev().fold((0.0, 0.0), |acc, &k| {
        let t = mulc(acc, z);
        (t.0 + k, t.1)
    });
    let radius = 1.0 + c.iter().take(d).map(|x| x.abs()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..d)
        .map(|k| {
            let th = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64;
            (radius * th.cos() * 0.5, radius * th.sin() * 0.5)
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut den = (1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den = mulc(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = divc(ev(z[i]), den);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    // polish real parts of nearly real roots
    for r in z.iter_mut() {
        if r.1.abs() < 1e-9 {
            r.1 = 0.0;
        }
    }
    z.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap()));
    z
}

pub fn format_poly(p: &[BigInt], var: &str) -> String {
    let mut s = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let unit = a.is_one() && i > 0;
        if !unit {
            s.push_str(&a.to_string());
        }
        match i {
            0 => {}
            1 => s.push_str(var),
            _ => s.push_str(&format!("{var}^{i}")),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Q[x]/(f) for a monic irreducible (or at least square-free) f.
#[derive(Clone, Debug)]
pub struct NumberField {
    pub modulus: QPoly,
}

pub type Nf = QPoly;

impl NumberField {
    pub fn new(f: &QPoly) -> NumberField {
        NumberField { modulus: monic(f) }
    }

    pub fn rational(r: &BigRational) -> NumberField {
        NumberField { modulus: vec![-r.clone(), BigRational::one()] }
    }

    pub fn degree(&self) -> usize {
        degree(&self.modulus).unwrap_or(0)
    }

    pub fn reduce(&self, a: &QPoly) -> Nf {
        divrem(a, &self.modulus).1
    }

    /// The generator (a root of the modulus).
    pub fn gen(&self) -> Nf {
        self.reduce(&vec![BigRational::zero(), BigRational::one()])
    }

    pub fn mul(&self, a: &Nf, b: &Nf) -> Nf {
        self.reduce(&mul(a, b))
    }

    pub fn inv(&self, a: &Nf) -> Option<Nf> {
        // extended Euclid on (a, f)
        let (mut r0, mut r1) = (self.modulus.clone(), a.clone());
        let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
        trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        while degree(&r1).unwrap_or(0) > 0 {
            let (q, r) = divrem(&r0, &r1);
            let s = add(&s0, &scale(&mul(&q, &s1), &rat(-1)));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            if r1.is_empty() {
                return None;
            }
        }
        let c = r1[0].recip();
        Some(self.reduce(&scale(&s1, &c)))
    }

    pub fn as_rational(a: &Nf) -> Option<BigRational> {
        match degree(a) {
            None => Some(BigRational::zero()),
            Some(0) => Some(a[0].clone()),
            _ => None,
        }
    }
}
