//! Quantum Chevalley operator of a minuscule G/Q and the scalar quantum
//! differential operator of its fundamental-class component.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::ode::{self, OdeError, ThetaOperator};
use crate::schubert::WQLattice;
use crate::series::{rat, RationalPowerSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error("several quantum terms for X({0})")]
    Ambiguous(String),
    #[error("quantum term X({from}) -> X({to}) breaks the grading")]
    Inhomogeneous { from: String, to: String },
    #[error(transparent)]
    Ode(#[from] OdeError),
}

pub type Result<T> = std::result::Result<T, QuantumError>;

/// Matrix of H * − in the Schubert basis: classical covers plus q-terms.
#[derive(Clone, Debug, Serialize)]
pub struct QuantumConnection {
    /// reduced words; index k is the class [X(w_k)] of dimension `lengths[k]`
    pub basis: Vec<String>,
    pub lengths: Vec<usize>,
    /// (w, w′): [X(w′)] occurs in H·[X(w)]
    pub classical: Vec<(usize, usize)>,
    /// (w, v): q[X(v)] occurs in H * [X(w)]
    pub quantum: Vec<(usize, usize)>,
    pub fano_index: usize,
    pub fundamental: usize,
}

/// H * [X(w)] = Σ_{w′ ⋖ w} [X(w′)] + q[X(v)], where v has weight μ_w − γ
/// for a positive root γ with (μ_w, γ^∨) = 1 and dim X(v) = dim X(w) + c₁ − 1.
pub fn quantum_chevalley(wq: &WQLattice) -> Result<QuantumConnection> {
    let rs = &wq.rs;
    let n = wq.len();
    let fundamental = wq.longest();
    let fano_index = wq.full_poset().poset.heights().h_p;
    let roots = rs.positive_roots();
    let mut classical = Vec::new();
    let mut quantum = Vec::new();
    for w in 0..n {
        for &(j, _) in wq.lower_covers(w) {
            classical.push((w, j));
        }
        let mu = wq.weight(w);
        let mut hits = Vec::new();
        for g in &roots {
            let pairing: i32 = mu.iter().zip(g).map(|(a, b)| a * b).sum();
            if pairing != 1 {
                continue;
            }
            let gw = rs.root_to_weight(g);
            let nu: Vec<i32> = mu.iter().zip(&gw).map(|(a, b)| a - b).collect();
            let Some(v) = wq.index_of_weight(&nu) else { continue };
            if wq.length(v) + 1 == wq.length(w) + fano_index {
                hits.push(v);
            }
        }
        hits.sort_unstable();
        hits.dedup();
        match hits.len() {
            0 => {}
            1 => quantum.push((w, hits[0])),
            _ => return Err(QuantumError::Ambiguous(wq.word_string(w))),
        }
    }
    for &(w, v) in &quantum {
        if wq.length(v) + 1 != wq.length(w) + fano_index {
            return Err(QuantumError::Inhomogeneous { from: wq.word_string(w), to: wq.word_string(v) });
        }
    }
    Ok(QuantumConnection {
        basis: (0..n).map(|k| wq.word_string(k)).collect(),
        lengths: (0..n).map(|k| wq.length(k)).collect(),
        classical,
        quantum,
        fano_index,
        fundamental,
    })
}

impl QuantumConnection {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Fundamental-class component of the flat section θ_q s = M(q)ᵀ s that
    /// starts at s(0) = [X], as a power series in q.
    ///
    /// Writing s = Σ s⁽ᵈ⁾ qᵈ gives (d − M₀ᵀ) s⁽ᵈ⁾ = M₁ᵀ s⁽ᵈ⁻¹⁾, solved by
    /// substitution in increasing dimension since M₀ᵀ lowers it.
    pub fn fundamental_series(&self, terms: usize) -> RationalPowerSeries {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&k| self.lengths[k]);
        // (M₀ᵀ s)_w = Σ_{w′ ⋖ w} s_{w′};  (M₁ᵀ s)_w = s_v for the q-term w → v
        let mut below = vec![Vec::new(); n];
        for &(w, j) in &self.classical {
            below[w].push(j);
        }
        let mut s = vec![BigRational::zero(); n];
        s[self.fundamental] = rat(1);
        let mut coeffs = vec![rat(1)];
        for d in 1..terms {
            let mut b = vec![BigRational::zero(); n];
            for &(w, v) in &self.quantum {
                b[w] = s[v].clone();
            }
            let dd = rat(d as i64);
            let mut x = vec![BigRational::zero(); n];
            for &w in &order {
                let mut acc = b[w].clone();
                for &j in &below[w] {
                    acc += &x[j];
                }
                x[w] = acc / &dd;
            }
            coeffs.push(x[self.fundamental].clone());
            s = x;
        }
        RationalPowerSeries::new("q", coeffs)
    }
}

/// Minimal θ_q-operator annihilating the fundamental-class component.
pub fn scalar_reduction(qc: &QuantumConnection, max_order: usize, max_degree: usize) -> Result<ThetaOperator> {
    let terms = (max_order + 1) * (max_degree + 1) + ode::FIT_MARGIN;
    let s = qc.fundamental_series(terms);
    Ok(ode::fit_operator(&s, max_order, max_degree)?)
}

/// [`scalar_reduction`] with order bound |W^Q| and degree bound 2.
pub fn quantum_operator(wq: &WQLattice) -> Result<(QuantumConnection, ThetaOperator)> {
    let qc = quantum_chevalley(wq)?;
    let op = scalar_reduction(&qc, qc.len(), 2)?;
    Ok((qc, op))
}
