//! Order polytopes Δ(P) and their Hibi toric varieties: lattice points,
//! interior points of faces, degree, singular components and nef-partitions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::poset::{BoundedPoset, Contraction, DistributiveLattice, Poset, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HibiError {
    #[error("degrees sum to {got}, expected h_P = {want}")]
    DegreeSum { got: usize, want: usize },
    #[error("poset is not pure")]
    NotPure,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

pub type Result<T> = std::result::Result<T, HibiError>;

/// l(kΔ(P)): order-preserving maps P → {0..k}, i.e. multichains
/// I_0 ⊆ … ⊆ I_{k-1} of order ideals.
pub fn lattice_points(p: &Poset, k: usize) -> Result<u128> {
    let l = DistributiveLattice::new(p)?;
    lattice_points_in(&l, k)
}

pub fn lattice_points_in(l: &DistributiveLattice, k: usize) -> Result<u128> {
    let mut g = vec![1i128; l.len()];
    for _ in 0..k {
        g = l.down_sum(&g)?;
    }
    Ok(g[l.top()] as u128)
}

/// Strict maps P → {1..k-1}: chains ∅ = I_0 ⊆ I_1 ⊆ … ⊆ I_{k-1} = P whose
/// steps are antichains. This is l*(kΔ(P)).
pub fn interior_points(p: &Poset, k: usize) -> Result<u128> {
    if k == 0 {
        return Ok(0);
    }
    let l = DistributiveLattice::new(p)?;
    let mut g = vec![0i128; l.len()];
    g[0] = 1;
    for _ in 0..k - 1 {
        g = l.antichain_step(&g)?;
    }
    Ok(g[l.top()] as u128)
}

/// l*(kθ_f) for the face θ_f ≅ Δ(P′) of a contraction.
pub fn interior_points_face(c: &Contraction, k: usize) -> Result<u128> {
    interior_points(&c.quotient, k)
}

/// Facets of Δ(P) as (edge index into the edge list of P̂, contraction), sorted by edge.
pub fn facets(b: &BoundedPoset) -> Vec<(usize, Contraction)> {
    let mut out: Vec<(usize, Contraction)> = b
        .enumerate_contractions(1)
        .into_iter()
        .map(|c| {
            let ends: Vec<usize> = crate::poset::bits_iter(c.nontrivial_fibers()[0]).collect();
            let (lo, hi) = if b.lt(ends[0], ends[1]) { (ends[0], ends[1]) } else { (ends[1], ends[0]) };
            let e = b.edges.iter().position(|&(s, t)| s == hi && t == lo).expect("facet is an edge");
            (e, c)
        })
        .collect();
    out.sort_by_key(|f| f.0);
    out
}

pub fn hibi_degree(p: &Poset) -> Result<u128> {
    Ok(DistributiveLattice::new(p)?.count_maximal_chains()?)
}

/// Ehrhart polynomial of Δ(P), lowest coefficient first, by Lagrange
/// interpolation through k = 0..|P|.
pub fn ehrhart_polynomial(p: &Poset) -> Result<Vec<BigRational>> {
    let n = p.len();
    let l = DistributiveLattice::new(p)?;
    let ys: Vec<BigRational> = (0..=n)
        .map(|k| lattice_points_in(&l, k).map(|v| BigRational::from_integer(BigInt::from(v))))
        .collect::<Result<_>>()?;
    Ok(interpolate(&ys))
}

/// Coefficients of the polynomial through (k, ys[k]), k = 0..len.
pub fn interpolate(ys: &[BigRational]) -> Vec<BigRational> {
    let n = ys.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, yi) in ys.iter().enumerate() {
        // basis polynomial Π_{j≠i} (x − j)/(i − j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * BigRational::from_integer(BigInt::from(j));
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(i as i64 - j as i64));
        }
        for (d, c) in basis.iter().enumerate() {
            out[d] += c * yi / &denom;
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ToricSingularComponent {
    /// the minimal convex cycle, as node names of P̂
    pub cycle: Vec<String>,
    pub codim: usize,
    pub degree: u128,
    #[serde(skip)]
    pub contraction: Contraction,
}

pub fn singular_components(p: &Poset) -> Result<Vec<ToricSingularComponent>> {
    let b = BoundedPoset::new(p);
    let mut out = Vec::new();
    for c in b.minimal_convex_cycles() {
        let degree = hibi_degree(&c.quotient)?;
        let cycle = c.nontrivial_fibers()[0];
        out.push(ToricSingularComponent {
            cycle: crate::poset::bits_iter(cycle).map(|u| b.node_name(u)).collect(),
            codim: c.codim,
            degree,
            contraction: c,
        });
    }
    Ok(out)
}

/// Gorenstein iff P is pure; the Fano index is then h_P.
pub fn gorenstein_terminal(p: &Poset) -> (bool, Option<usize>) {
    let h = p.heights();
    (h.pure, h.pure.then_some(h.h_p))
}

/// p_τ p_φ − p_{τ∧φ} p_{τ∨φ} for each incomparable pair τ, φ, as index quadruples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HibiBinomial {
    pub tau: usize,
    pub phi: usize,
    pub meet: usize,
    pub join: usize,
}

pub fn hibi_ideal_generators(l: &DistributiveLattice) -> Vec<HibiBinomial> {
    let mut out = Vec::new();
    for a in 0..l.len() {
        for b in a + 1..l.len() {
            if !l.le(a, b) && !l.le(b, a) {
                out.push(HibiBinomial { tau: a, phi: b, meet: l.meet(a, b), join: l.join(a, b) });
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct NefPartition {
    pub degrees: Vec<usize>,
    /// bands[k-1] = E^k = {e : h(s(e)) = k}, as indices into the edge list of P̂
    pub bands: Vec<Vec<usize>>,
    pub parts: Vec<Vec<usize>>,
}

pub fn nef_partition(p: &Poset, degrees: &[usize]) -> Result<NefPartition> {
    let hs = p.heights();
    if !hs.pure {
        return Err(HibiError::NotPure);
    }
    let total: usize = degrees.iter().sum();
    if total != hs.h_p {
        return Err(HibiError::DegreeSum { got: total, want: hs.h_p });
    }
    let b = BoundedPoset::new(p);
    let height = |u: usize| if u == b.top() { hs.h_p } else if u == b.bottom() { 0 } else { hs.h[u] };
    let mut bands = vec![Vec::new(); hs.h_p];
    for (i, &(s, _)) in b.edges.iter().enumerate() {
        bands[height(s) - 1].push(i);
    }
    let mut parts = Vec::new();
    let mut k = 0;
    for &d in degrees {
        let mut part = Vec::new();
        for band in &bands[k..k + d] {
            part.extend_from_slice(band);
        }
        part.sort_unstable();
        parts.push(part);
        k += d;
    }
    Ok(NefPartition { degrees: degrees.to_vec(), bands, parts })
}

/// δ(e) = pr₁(t(e) − s(e)) ∈ Z^P for each edge of P̂.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaMap {
    pub edges: Vec<(String, String)>,
    pub delta: Vec<Vec<i32>>,
}

pub fn dual_data(p: &Poset) -> DeltaMap {
    let b = BoundedPoset::new(p);
    let n = p.len();
    let mut delta = Vec::new();
    let mut edges = Vec::new();
    for &(s, t) in &b.edges {
        let mut v = vec![0; n];
        if t < n {
            v[t] += 1;
        }
        if s < n {
            v[s] -= 1;
        }
        delta.push(v);
        edges.push((b.node_name(s), b.node_name(t)));
    }
    DeltaMap { edges, delta }
}

/// Vertices of the reflexive shift Σ h(u)χ_u − h_P Δ(P), one per order filter.
pub fn reflexive_vertices(p: &Poset) -> Result<Vec<Vec<i64>>> {
    let hs = p.heights();
    if !hs.pure {
        return Err(HibiError::NotPure);
    }
    let l = DistributiveLattice::new(p)?;
    let full = p.full();
    Ok(l
        .ideals()
        .iter()
        .map(|&i| {
            let filter = full & !i;
            (0..p.len())
                .map(|u| hs.h[u] as i64 - if filter & crate::poset::bit(u) != 0 { hs.h_p as i64 } else { 0 })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_and_simplex() {
        for k in 0..4 {
            assert_eq!(lattice_points(&Poset::antichain(3), k).unwrap(), (k as u128 + 1).pow(3));
        }
        // chain of 4, k = 5: C(9, 4)
        assert_eq!(lattice_points(&Poset::chain(4), 5).unwrap(), 126);
        assert_eq!(interior_points(&Poset::chain(3), 5).unwrap(), 4);
    }

    #[test]
    fn ehrhart_leading_term() {
        let p = Poset::rectangle(2, 3);
        let e = ehrhart_polynomial(&p).unwrap();
        let fact: u64 = (1..=6).product();
        let lead = &e[6] * BigRational::from_integer(BigInt::from(fact));
        assert_eq!(lead, BigRational::from_integer(BigInt::from(5)));
    }

    #[test]
    fn hibi_generators_small() {
        let l = DistributiveLattice::new(&Poset::chain(3)).unwrap();
        assert!(hibi_ideal_generators(&l).is_empty());
        let l = DistributiveLattice::new(&Poset::antichain(2)).unwrap();
        assert_eq!(hibi_ideal_generators(&l).len(), 1);
    }

    #[test]
    fn quintic_nef() {
        let nef = nef_partition(&Poset::chain(4), &[5]).unwrap();
        assert_eq!(nef.parts, vec![vec![0, 1, 2, 3, 4]]);
        assert!(matches!(nef_partition(&Poset::chain(4), &[4]), Err(HibiError::DegreeSum { .. })));
    }
}
