//! Command bodies. Each returns the JSON document the CLI prints.

use anyhow::Result;
use num_rational::BigRational;
use serde_json::{json, Value};

use cicy_core::bps;
use cicy_core::catalog;
use cicy_core::hibi;
use cicy_core::invariants::{self, CicyInstance};
use cicy_core::monodromy::{self, MonodromyReport, ScanRange};
use cicy_core::ode::{self, OperatorJson, ThetaOperator};
use cicy_core::period;
use cicy_core::quantum;
use cicy_core::schubert::{self, ColoredPoset, DynkinType, RankGuards, RootSystem, WQLattice};
use cicy_core::{BoundedPoset, Poset, PosetJson, RationalPowerSeries};

use crate::Failure;

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

pub fn operator_value(op: &ThetaOperator) -> Value {
    json!({ "display": op.to_string(), "operator": to_value(&OperatorJson::from(op)) })
}

pub fn series_value(s: &RationalPowerSeries) -> Value {
    Value::Array(s.to_strings().into_iter().map(Value::String).collect())
}

fn lattice(kind: &str, node: usize) -> Result<WQLattice> {
    let kind: DynkinType = kind.parse().map_err(|e: schubert::SchubertError| Failure::Usage(e.to_string()))?;
    let rs = RootSystem::new(kind);
    WQLattice::generate(&rs, node).map_err(|e| Failure::Usage(e.to_string()).into())
}

fn colored_value(cp: &ColoredPoset) -> Value {
    json!({
        "poset": to_value(&PosetJson::from_poset(&cp.poset)),
        // 1-based simple roots
        "colors": cp.color.iter().map(|c| c + 1).collect::<Vec<_>>(),
        "report": to_value(&cp.report()),
    })
}

pub fn minuscule_generate(kind: &str, node: usize, word: Option<&str>) -> Result<Value> {
    let wq = lattice(kind, node)?;
    let cp = match word {
        Some(w) => wq.colored_poset_of_word(w).map_err(|e| Failure::Usage(e.to_string()))?,
        None => wq.full_poset(),
    };
    let mut v = colored_value(&cp);
    v["type"] = json!(kind);
    v["node"] = json!(node);
    v["lattice_size"] = json!(wq.len());
    Ok(v)
}

pub fn minuscule_report(name: &str) -> Result<Value> {
    let cp = catalog::lookup_colored(name).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(colored_value(&cp))
}

pub fn minuscule_classify(guards: RankGuards) -> Result<Value> {
    let classes = schubert::classify_cicy3(guards)?;
    Ok(Value::Array(
        classes
            .iter()
            .map(|c| {
                json!({
                    "label": c.label,
                    "family": c.family,
                    "word": c.word,
                    "degrees": c.degrees,
                    "picard_one": c.picard_one,
                    "poset_size": c.poset.len(),
                    "singular_codim": c.report.singular_codim,
                })
            })
            .collect(),
    ))
}

pub fn hibi_count(p: &Poset, k: usize) -> Result<Value> {
    Ok(json!({
        "k": k,
        "lattice_points": hibi::lattice_points(p, k)?.to_string(),
        "interior_points": hibi::interior_points(p, k)?.to_string(),
    }))
}

pub fn hibi_face_interior(p: &Poset, edge: usize, k: usize) -> Result<Value> {
    let b = BoundedPoset::new(p);
    let facets = hibi::facets(&b);
    let Some((_, c)) = facets.iter().find(|(e, _)| *e == edge) else {
        return Err(Failure::Usage(format!("edge {edge} out of range (P̂ has {} edges)", b.edges.len())).into());
    };
    let (hi, lo) = b.edges[edge];
    Ok(json!({
        "edge": edge,
        "upper": b.node_name(hi),
        "lower": b.node_name(lo),
        "face_poset_size": c.quotient.len(),
        "k": k,
        "interior_points": hibi::interior_points_face(c, k)?.to_string(),
    }))
}

pub fn hibi_singular(p: &Poset) -> Result<Value> {
    let comps = hibi::singular_components(p)?;
    let (gorenstein, index) = hibi::gorenstein_terminal(p);
    Ok(json!({
        "gorenstein": gorenstein,
        "fano_index": index,
        "components": comps
            .iter()
            .map(|c| json!({"cycle": c.cycle, "codim": c.codim, "degree": c.degree.to_string()}))
            .collect::<Vec<_>>(),
    }))
}

pub fn hibi_nef(p: &Poset, degrees: &[usize]) -> Result<Value> {
    let nef = hibi::nef_partition(p, degrees)?;
    let b = BoundedPoset::new(p);
    let names = |idx: &Vec<usize>| -> Vec<String> {
        idx.iter()
            .map(|&e| {
                let (s, t) = b.edges[e];
                format!("{}>{}", b.node_name(s), b.node_name(t))
            })
            .collect()
    };
    Ok(json!({
        "degrees": nef.degrees,
        "bands": nef.bands,
        "parts": nef.parts,
        "part_edges": nef.parts.iter().map(names).collect::<Vec<_>>(),
    }))
}

pub fn invariants(p: &Poset, degrees: &[usize]) -> Result<Value> {
    let inst = CicyInstance::threefold(p.clone(), degrees.to_vec())?;
    let r = invariants::invariant_report(&inst)?;
    let mut v = to_value(&r);
    // exact integers as strings
    for key in ["deg", "chi_o1", "c2h", "h21_y", "chi_y", "nodes", "chi_x", "h21_x", "facet_sum"] {
        if let Some(x) = v.get_mut(key) {
            *x = Value::String(x.to_string());
        }
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PeriodMethod {
    Binomial,
    Flow,
}

pub fn period_series(p: &Poset, degrees: &[usize], terms: usize, method: PeriodMethod) -> Result<RationalPowerSeries> {
    Ok(match method {
        PeriodMethod::Binomial => period::period_binomial(p, degrees, terms)?,
        PeriodMethod::Flow => period::period_flow(p, degrees, terms)?,
    })
}

pub fn ode_fit(s: &RationalPowerSeries, max_order: usize, max_degree: usize) -> Result<Value> {
    Ok(operator_value(&ode::fit_operator(s, max_order, max_degree)?))
}

pub fn ode_scheme(op: &ThetaOperator) -> Result<Value> {
    let sc = ode::riemann_scheme(op)?;
    let mut v = to_value(&sc);
    v["fuchs_ok"] = json!(sc.fuchs_ok());
    Ok(v)
}

pub fn ode_invert(op: &ThetaOperator, c: &BigRational, var: &str) -> Result<Value> {
    Ok(operator_value(&ode::invert_and_conjugate(op, c, var)?))
}

pub fn quantum_ode(kind: &str, node: usize) -> Result<Value> {
    let wq = lattice(kind, node)?;
    let (qc, op) = quantum::quantum_operator(&wq)?;
    let mut v = operator_value(&op);
    v["basis_size"] = json!(qc.len());
    v["fano_index"] = json!(qc.fano_index);
    v["quantum_terms"] = json!(qc.quantum.len());
    Ok(v)
}

pub fn monodromy_run(op: &ThetaOperator, digits: u32, near: (i64, i64, i64)) -> Result<MonodromyReport> {
    Ok(monodromy::monodromy_report(op, digits, near, None, None, &ScanRange::default())?)
}

pub fn monodromy_connect(
    op: &ThetaOperator,
    digits: u32,
    near: (i64, i64, i64),
    c: &BigRational,
    far: Option<(i64, i64, i64)>,
    range: &ScanRange,
) -> Result<MonodromyReport> {
    Ok(monodromy::monodromy_report(op, digits, near, Some(c), far, range)?)
}

/// Which MUM point of the operator the BPS numbers are read at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Side {
    X,
    Z,
}

/// The period of (P, degrees) and its minimal operator, with order 4 and degree ≤ `max_degree`.
pub fn operator_from_poset(p: &Poset, degrees: &[usize], max_degree: usize) -> Result<ThetaOperator> {
    let terms = 5 * (max_degree + 1) + ode::FIT_MARGIN;
    let s = period::period_flow(p, degrees, terms)?;
    Ok(ode::fit_operator(&s, 4, max_degree)?)
}

pub struct BpsInput {
    pub op: ThetaOperator,
    pub deg: i64,
    pub side: Side,
    pub c: BigRational,
    pub dmax: usize,
}

pub fn bps_table(input: &BpsInput) -> Result<Value> {
    let op = match input.side {
        Side::X => input.op.clone(),
        Side::Z => ode::invert_and_conjugate(&input.op, &input.c, "z")?,
    };
    let (ys, ns) = bps::bps_from_operator(&op, input.deg, input.dmax)?;
    Ok(json!({
        "side": match input.side { Side::X => "x", Side::Z => "z" },
        "deg": input.deg,
        "operator": op.to_string(),
        "yukawa": series_value(&ys.k.truncate(input.dmax + 1)),
        "n0": ns.iter().enumerate().map(|(i, n)| json!({"d": i + 1, "n0": n.to_string()})).collect::<Vec<_>>(),
    }))
}

/// The far-side degree from the integrality scan of the monodromy.
pub fn far_degree(op: &ThetaOperator, near: (i64, i64, i64), c: &BigRational, digits: u32) -> Result<i64> {
    let r = monodromy_connect(op, digits, near, c, None, &ScanRange::default())?;
    Ok(r.z.map(|z| z.normalization.deg).ok_or(Failure::Usage("no far side".into()))?)
}
