//! Fundamental periods of the mirror families: the flow-counting formula,
//! the planar dual-graph binomial formula and the explicit sum for Σ(1⁹).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::hibi::HibiError;
use crate::invariants::binomial;
use crate::poset::{BoundedPoset, Poset};
use crate::series::RationalPowerSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodError {
    #[error("poset has no planar embedding")]
    NoEmbedding,
    #[error("embedding is not planar: {0}")]
    NonPlanar(String),
    #[error("band E^{0} is empty")]
    EmptyBand(usize),
    #[error("need at least one term")]
    NoTerms,
    #[error(transparent)]
    Hibi(#[from] HibiError),
}

pub type Result<T> = std::result::Result<T, PeriodError>;

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Π_j (d_j m)! / m!^{h_P}; an integer whenever Σ d_j = h_P.
pub fn prefactor(degrees: &[usize], h_p: usize, m: usize) -> BigInt {
    let num: BigInt = degrees.iter().map(|&d| factorial(d * m)).product();
    num / factorial(m).pow(h_p as u32)
}

fn check(p: &Poset, degrees: &[usize], terms: usize) -> Result<usize> {
    if terms == 0 {
        return Err(PeriodError::NoTerms);
    }
    let hs = p.heights();
    if !hs.pure {
        return Err(HibiError::NotPure.into());
    }
    let total: usize = degrees.iter().sum();
    if total != hs.h_p || degrees.contains(&0) {
        return Err(HibiError::DegreeSum { got: total, want: hs.h_p }.into());
    }
    Ok(hs.h_p)
}

/// Levels of P̂ by height, top level first, with the lower covers of each node.
struct Levels {
    levels: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

fn levels(p: &Poset) -> Levels {
    let hs = p.heights();
    let b = BoundedPoset::new(p);
    let (bot, top) = (b.bottom(), b.top());
    let mut levels = vec![Vec::new(); hs.h_p + 1];
    levels[hs.h_p].push(top);
    levels[0].push(bot);
    for u in 0..p.len() {
        levels[hs.h[u]].push(u);
    }
    let mut down = vec![Vec::new(); b.node_count()];
    for &(s, t) in &b.edges {
        down[s].push(t);
    }
    levels.reverse();
    Levels { levels, down }
}

/// All (parts, multinomial) splittings of `f` into `k` ordered parts.
fn splits(f: usize, k: usize) -> Vec<(Vec<usize>, BigInt)> {
    fn rec(f: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            cur.push(f);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=f {
            cur.push(a);
            rec(f - a, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(f, k, &mut Vec::new(), &mut raw);
    let ff = factorial(f);
    raw.into_iter()
        .map(|parts| {
            let den: BigInt = parts.iter().map(|&a| factorial(a)).product();
            let w = &ff / den;
            (parts, w)
        })
        .collect()
}

/// N(J^k, E^k)(m): flows of value m from 1̂ to 0̂ through the Hasse diagram of P̂,
/// each weighted by the product over bands of m!/Π n_e!.
pub fn flow_count(p: &Poset, m: usize) -> Result<BigInt> {
    let lv = levels(p);
    let mut pos: HashMap<usize, usize> = HashMap::new();
    for level in &lv.levels {
        for (i, &u) in level.iter().enumerate() {
            pos.insert(u, i);
        }
    }
    let mf = factorial(m);
    let mut states: HashMap<Vec<usize>, BigInt> = HashMap::new();
    states.insert(vec![m], BigInt::one());
    for (depth, level) in lv.levels.iter().enumerate().take(lv.levels.len() - 1) {
        let next_width = lv.levels[depth + 1].len();
        let mut next: HashMap<Vec<usize>, BigInt> = HashMap::new();
        let mut cache: HashMap<(usize, usize), Vec<(Vec<usize>, BigInt)>> = HashMap::new();
        for (state, w) in &states {
            // band weight m!/Π n_e! = m!/Π f_u! · Π_u f_u!/Π n_e!
            let den: BigInt = state.iter().map(|&f| factorial(f)).product();
            let base = w * (&mf / den);
            let mut partial: Vec<(Vec<usize>, BigInt)> = vec![(vec![0; next_width], base)];
            for (i, &u) in level.iter().enumerate() {
                let f = state[i];
                let outs = &lv.down[u];
                if outs.is_empty() {
                    return Err(PeriodError::EmptyBand(lv.levels.len() - 1 - depth));
                }
                let opts = cache.entry((outs.len(), f)).or_insert_with(|| splits(f, outs.len()));
                let mut np = Vec::with_capacity(partial.len() * opts.len());
                for (acc, aw) in &partial {
                    for (parts, pw) in opts.iter() {
                        let mut a = acc.clone();
                        for (k, &v) in outs.iter().enumerate() {
                            a[pos[&v]] += parts[k];
                        }
                        np.push((a, aw * pw));
                    }
                }
                partial = np;
            }
            for (s, v) in partial {
                *next.entry(s).or_insert_with(BigInt::zero) += v;
            }
        }
        states = next;
    }
    Ok(states.get(&vec![m]).cloned().unwrap_or_else(BigInt::zero))
}

/// ω₀ by the flow formula: x^m ↦ Π(d_j m)!/m!^{h_P} · N(J^k, E^k)(m).
pub fn period_flow(p: &Poset, degrees: &[usize], terms: usize) -> Result<RationalPowerSeries> {
    let h_p = check(p, degrees, terms)?;
    let coeffs = (0..terms)
        .map(|m| Ok(prefactor(degrees, h_p, m) * flow_count(p, m)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalPowerSeries::from_integers("x", coeffs))
}

/// A region of the plane cut out by the Hasse diagram of P̂.
#[derive(Clone, Debug, Serialize)]
pub struct Face {
    /// node where the two boundary paths split, and where they meet again
    pub top: String,
    pub bottom: String,
}

/// The dual graph B: vertices are faces, one dual edge per Hasse edge.
#[derive(Clone, Debug, Serialize)]
pub struct DualGraph {
    pub faces: Vec<Face>,
    pub b_left: usize,
    pub b_right: usize,
    /// (upper, lower) names of the Hasse edges, in the order of [`BoundedPoset::edges`]
    pub edges: Vec<(String, String)>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl DualGraph {
    pub fn interior(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| f != self.b_left && f != self.b_right).collect()
    }
}

/// Faces of the planar Hasse diagram with 1̂ above everything and 0̂ below.
/// Each bounded face hangs between two consecutive lower covers of its top node;
/// its left side hugs rightmost descents and its right side leftmost ones.
pub fn dual_graph(p: &Poset) -> Result<DualGraph> {
    if p.embedding().is_none() {
        return Err(PeriodError::NoEmbedding);
    }
    p.level_positions().map_err(|e| PeriodError::NonPlanar(e.to_string()))?;
    let b = BoundedPoset::new(p);
    let nodes = b.node_count();
    let mut down = vec![Vec::new(); nodes];
    let mut edge_id: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, &(s, t)) in b.edges.iter().enumerate() {
        down[s].push(t);
        edge_id.insert((s, t), i);
    }
    let bot = b.bottom();
    let mut faces = vec![
        Face { top: b.node_name(b.top()), bottom: b.node_name(bot) },
        Face { top: b.node_name(b.top()), bottom: b.node_name(bot) },
    ];
    let (b_left, b_right) = (0, 1);
    let ne = b.edges.len();
    let mut left = vec![b_left; ne];
    let mut right = vec![b_right; ne];
    let mut seen_left = vec![false; ne];
    let mut seen_right = vec![false; ne];

    // descend from (s, t) always taking the first (or last) lower cover
    let path = |s: usize, t: usize, rightmost: bool| -> Vec<(usize, usize)> {
        let mut out = vec![(s, t)];
        let mut v = t;
        while v != bot {
            let d = &down[v];
            let w = if rightmost { *d.last().unwrap() } else { d[0] };
            out.push((v, w));
            v = w;
        }
        out
    };

    for u in 0..nodes {
        for pair in down[u].windows(2) {
            let lp = path(u, pair[0], true);
            let rp = path(u, pair[1], false);
            let rnodes: Vec<usize> = rp.iter().map(|&(_, t)| t).collect();
            let cut = lp
                .iter()
                .position(|&(_, t)| rnodes.contains(&t))
                .ok_or_else(|| PeriodError::NonPlanar(b.node_name(u)))?;
            let meet = lp[cut].1;
            let rcut = rnodes.iter().position(|&t| t == meet).unwrap();
            let f = faces.len();
            faces.push(Face { top: b.node_name(u), bottom: b.node_name(meet) });
            for &e in &lp[..=cut] {
                let i = edge_id[&e];
                if seen_right[i] {
                    return Err(PeriodError::NonPlanar(format!("{}-{}", b.node_name(e.0), b.node_name(e.1))));
                }
                seen_right[i] = true;
                right[i] = f;
            }
            for &e in &rp[..=rcut] {
                let i = edge_id[&e];
                if seen_left[i] {
                    return Err(PeriodError::NonPlanar(format!("{}-{}", b.node_name(e.0), b.node_name(e.1))));
                }
                seen_left[i] = true;
                left[i] = f;
            }
        }
    }
    // Euler on the sphere, counting the edge through ∞ that joins 1̂ to 0̂ and
    // separates b_L from b_R: V − (E + 1) + F = 2
    if nodes + faces.len() != ne + 3 {
        return Err(PeriodError::NonPlanar(format!("{} faces for {} edges", faces.len(), ne)));
    }
    let edges = b.edges.iter().map(|&(s, t)| (b.node_name(s), b.node_name(t))).collect();
    Ok(DualGraph { faces, b_left, b_right, edges, left, right })
}

/// Σ_{m_b} Π_e C(m_{r(e)}, m_{l(e)}) with m_{b_L} = 0, m_{b_R} = m.
pub fn dual_graph_sum(g: &DualGraph, m: usize) -> BigInt {
    let inner = g.interior();
    let nf = g.faces.len();
    let mut val: Vec<Option<usize>> = vec![None; nf];
    val[g.b_left] = Some(0);
    val[g.b_right] = Some(m);
    // edges grouped by the last-assigned endpoint in the `inner` order
    let order: HashMap<usize, usize> = inner.iter().enumerate().map(|(i, &f)| (f, i + 1)).collect();
    let rank = |f: usize| order.get(&f).copied().unwrap_or(0);
    let mut by_step: Vec<Vec<usize>> = vec![Vec::new(); inner.len() + 1];
    for e in 0..g.left.len() {
        by_step[rank(g.left[e]).max(rank(g.right[e]))].push(e);
    }
    let fixed: BigInt = by_step[0]
        .iter()
        .map(|&e| binomial(val[g.right[e]].unwrap(), val[g.left[e]].unwrap()))
        .product();
    if fixed.is_zero() {
        return fixed;
    }
    fn rec(
        k: usize,
        inner: &[usize],
        by_step: &[Vec<usize>],
        g: &DualGraph,
        val: &mut Vec<Option<usize>>,
        m: usize,
        acc: &BigInt,
    ) -> BigInt {
        if k == inner.len() {
            return acc.clone();
        }
        let mut total = BigInt::zero();
        for v in 0..=m {
            val[inner[k]] = Some(v);
            let mut w = acc.clone();
            for &e in &by_step[k + 1] {
                let c = binomial(val[g.right[e]].unwrap(), val[g.left[e]].unwrap());
                if c.is_zero() {
                    w = BigInt::zero();
                    break;
                }
                w *= c;
            }
            if !w.is_zero() {
                total += rec(k + 1, inner, by_step, g, val, m, &w);
            }
        }
        val[inner[k]] = None;
        total
    }
    rec(0, &inner, &by_step, g, &mut val, m, &fixed)
}

/// ω₀ by the binomial formula over the dual graph.
pub fn period_binomial(p: &Poset, degrees: &[usize], terms: usize) -> Result<RationalPowerSeries> {
    let h_p = check(p, degrees, terms)?;
    let g = dual_graph(p)?;
    let coeffs = (0..terms).map(|m| prefactor(degrees, h_p, m) * dual_graph_sum(&g, m));
    Ok(RationalPowerSeries::from_integers("x", coeffs))
}

/// Σ_{s,t,u,v} C(m,s)² C(m,v)² C(m,t) C(s,t) C(t,u) C(v,u), the period of the
/// mirror of Σ(1⁹), summed in O(m²) per coefficient.
pub fn sigma_period(terms: usize) -> RationalPowerSeries {
    let coeffs = (0..terms).map(sigma_coefficient);
    RationalPowerSeries::from_integers("x", coeffs)
}

pub fn sigma_coefficient(m: usize) -> BigInt {
    let row: Vec<BigInt> = (0..=m).map(|k| binomial(m, k)).collect();
    let sq: Vec<BigInt> = row.iter().map(|c| c * c).collect();
    // a[t] = Σ_s C(m,s)² C(s,t); b[u] = Σ_v C(m,v)² C(v,u)
    let a: Vec<BigInt> = (0..=m).map(|t| (t..=m).map(|s| &sq[s] * binomial(s, t)).sum()).collect();
    let b = a.clone();
    (0..=m)
        .map(|t| {
            let inner: BigInt = (0..=t).map(|u| binomial(t, u) * &b[u]).sum();
            &row[t] * &a[t] * inner
        })
        .sum()
}

/// The displayed four-variable sum evaluated term by term (slow; a check on
/// [`sigma_coefficient`]).
pub fn sigma_coefficient_naive(m: usize) -> BigInt {
    let c = binomial;
    let mut total = BigInt::zero();
    for s in 0..=m {
        for t in 0..=s {
            for u in 0..=t {
                for v in u..=m {
                    total += c(m, s) * c(m, s) * c(m, v) * c(m, v) * c(m, t) * c(s, t) * c(t, u) * c(v, u);
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;

    #[test]
    fn quintic_period() {
        let s = period_flow(&Poset::chain(4), &[5], 4).unwrap();
        let want = [1u64, 120, 113400, 168168000];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(s.coeff(k).to_integer(), BigInt::from(*w));
        }
        let b = period_binomial(&lookup("chain-4").unwrap(), &[5], 4).unwrap();
        assert_eq!(b, s);
    }

    #[test]
    fn chain_dual_graph() {
        let g = dual_graph(&lookup("chain-3").unwrap()).unwrap();
        assert_eq!(g.faces.len(), 2);
        assert!(g.left.iter().all(|&f| f == g.b_left));
    }

    #[test]
    fn sigma_sums_agree() {
        for m in 0..6 {
            assert_eq!(sigma_coefficient(m), sigma_coefficient_naive(m));
        }
        assert_eq!(sigma_coefficient(1), BigInt::from(7));
    }

    #[test]
    fn splits_weights() {
        let s = splits(3, 2);
        let total: BigInt = s.iter().map(|(_, w)| w.clone()).sum();
        assert_eq!(total, BigInt::from(8));
    }
}
