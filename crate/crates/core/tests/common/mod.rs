#![allow(dead_code)]

//! Brute-force oracles shared by the integration tests. They only use the
//! order relation of a poset, never the lattice machinery under test.

use cicy_core::Poset;

/// Down-closed subsets, by checking every subset.
pub fn order_ideals(p: &Poset) -> Vec<u64> {
    let n = p.len();
    assert!(n <= 22);
    (0u64..1 << n)
        .filter(|&s| (0..n).all(|u| s >> u & 1 == 0 || (0..n).all(|v| !p.lt(v, u) || s >> v & 1 == 1)))
        .collect()
}

/// Maps f: P → {0..k} with u < v ⇒ f(u) ≤ f(v), by enumeration.
pub fn monotone_maps(p: &Poset, k: usize) -> u64 {
    count_maps(p, k, false)
}

/// Maps f: P → {1..k−1} with u < v ⇒ f(u) < f(v).
pub fn strict_maps(p: &Poset, k: usize) -> u64 {
    if k < 2 {
        return u64::from(p.is_empty());
    }
    count_maps(p, k - 2, true)
}

fn count_maps(p: &Poset, k: usize, strict: bool) -> u64 {
    let n = p.len();
    let mut f = vec![0usize; n];
    let mut count = 0;
    loop {
        let ok = (0..n).all(|u| (0..n).all(|v| !p.lt(u, v) || if strict { f[u] < f[v] } else { f[u] <= f[v] }));
        if ok {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            f[i] += 1;
            if f[i] <= k {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

/// Linear extensions, by peeling minimal elements (no memo).
pub fn linear_extensions(p: &Poset) -> u128 {
    fn go(p: &Poset, left: u64) -> u128 {
        if left == 0 {
            return 1;
        }
        let n = p.len();
        (0..n)
            .filter(|&u| left >> u & 1 == 1 && (0..n).all(|v| left >> v & 1 == 0 || !p.lt(v, u)))
            .map(|u| go(p, left & !(1 << u)))
            .sum()
    }
    go(p, (1u64 << p.len()) - 1)
}

/// Chains I_0 ⊊ … ⊊ I_i of ideals, by recursion over supersets.
pub fn ideal_chains(ideals: &[u64], len: usize) -> u64 {
    fn go(ideals: &[u64], from: u64, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        ideals.iter().filter(|&&j| j != from && j & from == from).map(|&j| go(ideals, j, left - 1)).sum()
    }
    ideals.iter().map(|&i| go(ideals, i, len)).sum()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn factorial(n: u64) -> num_bigint::BigInt {
    (1..=n).fold(num_bigint::BigInt::from(1), |a, k| a * k)
}

/// Maximal paths 0̂ → 1̂ in the Hasse diagram of P̂ (P with a bottom and a top added).
pub fn bounded_paths(p: &Poset) -> u128 {
    let n = p.len();
    let covers = p.covers();
    fn from(u: usize, covers: &[(usize, usize)], p: &Poset) -> u128 {
        let ups: Vec<usize> = covers.iter().filter(|&&(_, l)| l == u).map(|&(h, _)| h).collect();
        if ups.is_empty() {
            return 1;
        }
        ups.iter().map(|&h| from(h, covers, p)).sum()
    }
    (0..n).filter(|&u| (0..n).all(|v| !p.lt(v, u))).map(|u| from(u, &covers, p)).sum()
}
