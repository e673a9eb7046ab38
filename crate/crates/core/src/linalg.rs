//! Exact linear algebra: modular rank screening, fraction-free (Bareiss)
//! elimination and small rational matrix helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// 2^61 − 1.
pub const PRIME: u64 = (1 << 61) - 1;

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let small = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &small {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &small {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^61, descending.
pub fn primes() -> impl Iterator<Item = u64> {
    (0..).map(|k| (1u64 << 61) - 1 - 2 * k).filter(|&n| is_prime(n))
}

pub fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// x mod p for a rational x, `None` when p divides the denominator.
pub fn reduce_rational(x: &BigRational, p: u64) -> Option<u64> {
    let d = reduce_mod(x.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mulmod(reduce_mod(x.numer(), p), powmod(d, p - 2, p), p))
}

/// Reduced row echelon form mod p in place; returns pivot columns.
pub fn rref_mod_p(a: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = powmod(a[rank][c], p - 2, p);
        for x in a[rank].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for r in 0..a.len() {
            if r == rank || a[r][c] == 0 {
                continue;
            }
            let f = a[r][c];
            for j in c..cols {
                let sub = mulmod(f, a[rank][j], p);
                a[r][j] = (a[r][j] + p - sub) % p;
            }
        }
        pivots.push(c);
        rank += 1;
    }
    pivots
}

/// Nullspace basis mod p, each vector with a 1 in its free column.
pub fn nullspace_mod_p(m: &[Vec<u64>], p: u64) -> Vec<(usize, Vec<u64>)> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.to_vec();
    let pivots = rref_mod_p(&mut a, p);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[r][f]) % p;
            }
            (f, v)
        })
        .collect()
}

/// Rank modulo [`PRIME`]; a lower bound for the rank over Q.
pub fn rank_mod_p(m: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| reduce_mod(x, PRIME)).collect()).collect();
    rref_mod_p(&mut a, PRIME).len()
}

/// Chinese remaindering of residues r mod m and s mod p.
pub fn crt(r: &BigInt, m: &BigInt, s: u64, p: u64) -> BigInt {
    let mp = reduce_mod(m, p);
    let rp = reduce_mod(r, p);
    let t = mulmod((s + p - rp) % p, powmod(mp, p - 2, p), p);
    r + m * BigInt::from(t)
}

/// Rational a/b ≡ x mod m with |a|, b ≤ sqrt(m/2), if one exists.
pub fn rational_reconstruction(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Row echelon form by Bareiss elimination. Returns the pivot columns.
pub fn bareiss(m: &mut [Vec<BigInt>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right nullspace of an integer matrix, each vector primitive.
pub fn nullspace(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.to_vec();
    let pivots = bareiss(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut x = vec![BigRational::zero(); cols];
        x[f] = BigRational::one();
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            let mut s = BigRational::zero();
            for j in pc + 1..cols {
                if !x[j].is_zero() && !a[ri][j].is_zero() {
                    s += BigRational::from_integer(a[ri][j].clone()) * &x[j];
                }
            }
            x[pc] = -s / BigRational::from_integer(a[ri][pc].clone());
        }
        out.push(primitive_vector(&x));
    }
    out
}

/// Integer multiple with gcd 1, sign untouched.
pub fn primitive_vector(x: &[BigRational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let v: Vec<BigInt> = x.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

pub type QMat = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn matmul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = BigRational::zero();
                    for t in 0..k {
                        s += &a[i][t] * &b[t][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Inverse by Gauss–Jordan over Q; `None` if singular.
pub fn inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut m: QMat = a.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, piv);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let v = &f * &m[c][j];
                    m[r][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det(a: &QMat) -> BigRational {
    let n = a.len();
    let mut m = a.clone();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else { return BigRational::zero() };
        if piv != c {
            m.swap(c, piv);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for j in c..n {
                    let v = &f * &m[c][j];
                    m[r][j] -= v;
                }
            }
        }
    }
    d
}

pub fn from_i64(a: &[Vec<i64>]) -> QMat {
    a.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()
}

pub fn to_i64(a: &QMat) -> Option<Vec<Vec<i64>>> {
    a.iter()
        .map(|r| r.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect())
        .collect()
}

pub fn is_integral(a: &QMat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_integer()))
}

pub fn max_abs(a: &QMat) -> BigRational {
    a.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
}
