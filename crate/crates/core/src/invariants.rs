//! Topological invariants of complete intersections X(d_1, …, d_r) in a
//! Gorenstein Hibi toric variety, via its toric degeneration and the
//! conifold transition.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::hibi::{self, HibiError};
use crate::poset::{BoundedPoset, DistributiveLattice, Poset, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantsError {
    #[error("{elements} elements with {sections} sections is a {dim}-fold, not a 3-fold")]
    NotThreefold { elements: usize, sections: usize, dim: isize },
    #[error("degree vector must be nonempty with all entries ≥ 1")]
    BadDegrees,
    #[error("non-integral {what}: {value}")]
    NonIntegral { what: &'static str, value: String },
    #[error(transparent)]
    Hibi(#[from] HibiError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

pub type Result<T> = std::result::Result<T, InvariantsError>;

/// A complete intersection of the given degrees in the Hibi toric variety of `poset`.
#[derive(Clone, Debug)]
pub struct CicyInstance {
    pub poset: Poset,
    pub degrees: Vec<usize>,
}

impl CicyInstance {
    /// Checks purity and Σd_j = h_P. Any dimension is allowed here.
    pub fn new(poset: Poset, degrees: Vec<usize>) -> Result<CicyInstance> {
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(InvariantsError::BadDegrees);
        }
        let hs = poset.heights();
        if !hs.pure {
            return Err(HibiError::NotPure.into());
        }
        let total: usize = degrees.iter().sum();
        if total != hs.h_p {
            return Err(HibiError::DegreeSum { got: total, want: hs.h_p }.into());
        }
        Ok(CicyInstance { poset, degrees })
    }

    /// As [`CicyInstance::new`], additionally requiring |P| − r = 3.
    pub fn threefold(poset: Poset, degrees: Vec<usize>) -> Result<CicyInstance> {
        let inst = CicyInstance::new(poset, degrees)?;
        if inst.dimension() != 3 {
            return Err(InvariantsError::NotThreefold {
                elements: inst.poset.len(),
                sections: inst.degrees.len(),
                dim: inst.dimension(),
            });
        }
        Ok(inst)
    }

    pub fn dimension(&self) -> isize {
        self.poset.len() as isize - self.degrees.len() as isize
    }

    fn degree_product(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).product()
    }
}

/// Parses "1x9", "1,1,2", "2x1,3" style degree vectors.
pub fn parse_degrees(s: &str) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once(['x', '^']) {
            Some((d, n)) => {
                let d: usize = d.trim().parse().ok()?;
                let n: usize = n.trim().parse().ok()?;
                out.extend(std::iter::repeat(d).take(n));
            }
            None => out.push(part.parse().ok()?),
        }
    }
    (!out.is_empty()).then_some(out)
}

pub fn degree_ci(inst: &CicyInstance) -> Result<u128> {
    Ok(hibi::hibi_degree(&inst.poset)? * inst.degree_product())
}

/// First `terms` coefficients of the Hilbert series of the Hibi ring,
/// Σ_j f_j (t/(1−t))^j with f_j the number of j-element chains of J(P).
pub fn hibi_hilbert_series(l: &DistributiveLattice, terms: usize) -> Result<Vec<BigInt>> {
    let c = l.chain_length_counts()?;
    // f_1 = |J|, f_{i+1} = c_i for i ≥ 1
    let mut f = vec![BigInt::from(l.len())];
    f.extend(c.iter().skip(1).map(|&v| BigInt::from(v)));
    let mut out = vec![BigInt::zero(); terms];
    if terms > 0 {
        out[0] = BigInt::one();
    }
    // u^j = t^j (1−t)^{−j}: coefficient of t^k is C(k−1, j−1)
    for (idx, fj) in f.iter().enumerate() {
        let j = idx + 1;
        for (k, slot) in out.iter_mut().enumerate().skip(j) {
            *slot += fj * binomial(k - 1, j - 1);
        }
    }
    Ok(out)
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Hilbert function of the complete intersection: the Hibi series times Π(1 − t^{d_j}).
pub fn ci_hilbert_function(inst: &CicyInstance, terms: usize) -> Result<Vec<BigInt>> {
    let l = DistributiveLattice::new(&inst.poset)?;
    let mut s = hibi_hilbert_series(&l, terms)?;
    for &d in &inst.degrees {
        for k in (d..terms).rev() {
            let prev = s[k - d].clone();
            s[k] -= prev;
        }
    }
    Ok(s)
}

/// χ(O_X(1)), read off the complete-intersection Hilbert series at t¹.
pub fn chi_o1(inst: &CicyInstance) -> Result<i128> {
    let s = ci_hilbert_function(inst, 2)?;
    Ok(s[1].to_i128().expect("small"))
}

/// c₂·H = 12 χ(O(1)) − 2 deg from Riemann–Roch on a Calabi–Yau 3-fold.
pub fn c2h(inst: &CicyInstance) -> Result<i128> {
    let chi = chi_o1(inst)?;
    let deg = degree_ci(inst)? as i128;
    // 6χ = deg + c₂H/2 must have the right parity
    let v = 12 * chi - 2 * deg;
    Ok(v)
}

/// Hilbert polynomial of X as rational coefficients (lowest first), interpolated
/// from the Hilbert function at k = 1..=dim+1 (the a-invariant is 0).
pub fn hilbert_polynomial(inst: &CicyInstance) -> Result<Vec<BigRational>> {
    let dim = inst.dimension().max(0) as usize;
    let s = ci_hilbert_function(inst, dim + 3)?;
    // shift: polynomial through (k, s[k]) for k = 1..=dim+1, re-centred to start at 0
    let ys: Vec<BigRational> = (1..=dim + 1).map(|k| BigRational::from_integer(s[k].clone())).collect();
    let shifted = hibi::interpolate(&ys);
    // q(x) = shifted(x − 1)
    let n = shifted.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in shifted.iter().enumerate() {
        for j in 0..=i {
            let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
            out[j] += c * BigRational::from_integer(binomial(i, j) * sign);
        }
    }
    Ok(out)
}

/// Σ_{J⊆I, d_J = s} (−1)^{|J|}, i.e. coefficients of Π(1 − t^{d_j}).
fn signed_subset_sums(degrees: &[usize]) -> Vec<i128> {
    let total: usize = degrees.iter().sum();
    let mut a = vec![0i128; total + 1];
    a[0] = 1;
    for &d in degrees {
        for s in (d..=total).rev() {
            a[s] -= a[s - d];
        }
    }
    a
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetCount {
    /// index into the edge list of P̂
    pub edge: usize,
    pub upper: String,
    pub lower: String,
    /// |P′| of the face poset
    pub size: usize,
    pub pure: bool,
    /// (k, l*(kθ_e)) for each k with a nonzero coefficient in the formula
    pub interior: Vec<(usize, u128)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StringyHodge {
    pub h11: usize,
    /// h^{1,k} = 0 for 1 < k < n − 1, where n is the dimension
    pub middle_zero: Vec<usize>,
    pub h1_last: i128,
    pub first_term: i128,
    pub facet_term: i128,
    pub facets: Vec<FacetCount>,
}

/// Stringy (1,*) Hodge numbers of a general complete intersection in the
/// Gorenstein Hibi toric variety.
pub fn stringy_h1(inst: &CicyInstance) -> Result<StringyHodge> {
    let p = &inst.poset;
    let l = DistributiveLattice::new(p)?;
    let b = BoundedPoset::new(p);
    let r = inst.degrees.len();
    let a = signed_subset_sums(&inst.degrees);

    let mut first = 0i128;
    for &di in &inst.degrees {
        for (s, &coef) in a.iter().enumerate().take(di + 1) {
            if coef != 0 {
                first += coef * hibi::lattice_points_in(&l, di - s)? as i128;
            }
        }
    }

    let sign_r: i128 = if r % 2 == 0 { 1 } else { -1 };
    let mut facet_term = 0i128;
    let mut counts = Vec::new();
    for (edge, c) in hibi::facets(&b) {
        let (hi, lo) = b.edges[edge];
        let mut interior = Vec::new();
        for (s, &coef) in a.iter().enumerate().skip(1) {
            if coef == 0 {
                continue;
            }
            let v = hibi::interior_points_face(&c, s)?;
            if v != 0 {
                facet_term += sign_r * coef * v as i128;
            }
            interior.push((s, v));
        }
        counts.push(FacetCount {
            edge,
            upper: b.node_name(hi),
            lower: b.node_name(lo),
            size: c.quotient.len(),
            pure: c.quotient.heights().pure,
            interior,
        });
    }

    let n = inst.dimension();
    let middle_zero = if n > 3 { (2..(n - 1) as usize).collect() } else { Vec::new() };
    Ok(StringyHodge {
        h11: b.edges.len() - p.len(),
        middle_zero,
        h1_last: first - facet_term - p.len() as i128,
        first_term: first,
        facet_term,
        facets: counts,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeCycle {
    pub cycle: Vec<String>,
    pub degree: u128,
}

/// Nodes of the general X₀: (Πd_j) × Σ deg over minimal convex cycles of codimension 3.
pub fn node_count(inst: &CicyInstance) -> Result<(u128, Vec<NodeCycle>)> {
    let comps = hibi::singular_components(&inst.poset)?;
    let cycles: Vec<NodeCycle> = comps
        .into_iter()
        .filter(|c| c.codim == 3)
        .map(|c| NodeCycle { cycle: c.cycle, degree: c.degree })
        .collect();
    let total: u128 = cycles.iter().map(|c| c.degree).sum();
    Ok((inst.degree_product() * total, cycles))
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub degrees: Vec<usize>,
    pub deg: u128,
    pub chi_o1: i128,
    pub c2h: i128,
    pub h11_y: usize,
    pub h21_y: i128,
    pub chi_y: i128,
    pub nodes: u128,
    pub chi_x: i128,
    /// 1 − χ(X)/2, valid when h^{1,1}(X) = 1
    pub h21_x: i128,
    pub facet_sum: i128,
    pub node_cycles: Vec<NodeCycle>,
    pub facets: Vec<FacetCount>,
}

pub fn euler_number(inst: &CicyInstance) -> Result<i128> {
    Ok(invariant_report(inst)?.chi_x)
}

pub fn invariant_report(inst: &CicyInstance) -> Result<InvariantReport> {
    if inst.dimension() != 3 {
        return Err(InvariantsError::NotThreefold {
            elements: inst.poset.len(),
            sections: inst.degrees.len(),
            dim: inst.dimension(),
        });
    }
    let deg = degree_ci(inst)?;
    let chi = chi_o1(inst)?;
    let c2 = c2h(inst)?;
    let hp = hilbert_polynomial(inst)?;
    // leading coefficient of the Hilbert polynomial is deg/6
    let lead = &hp[3] * BigRational::from_integer(BigInt::from(6));
    if lead != BigRational::from_integer(BigInt::from(deg)) {
        return Err(InvariantsError::NonIntegral { what: "Hilbert polynomial leading term", value: lead.to_string() });
    }
    let st = stringy_h1(inst)?;
    let (nodes, node_cycles) = node_count(inst)?;
    let chi_y = 2 * (st.h11 as i128 - st.h1_last);
    let chi_x = chi_y - 2 * nodes as i128;
    if chi_x % 2 != 0 {
        return Err(InvariantsError::NonIntegral { what: "h21(X)", value: format!("{chi_x}/2") });
    }
    Ok(InvariantReport {
        degrees: inst.degrees.clone(),
        deg,
        chi_o1: chi,
        c2h: c2,
        h11_y: st.h11,
        h21_y: st.h1_last,
        chi_y,
        nodes,
        chi_x,
        h21_x: 1 - chi_x / 2,
        facet_sum: st.facet_term,
        node_cycles,
        facets: st.facets,
    })
}
