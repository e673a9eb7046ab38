//! The reproduction battery: recomputes every published value from first
//! principles and compares it with the embedded expected-values file.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use anyhow::Result;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cicy_core::catalog;
use cicy_core::invariants::{self, CicyInstance};
use cicy_core::monodromy::{self, MonodromyReport, ScanRange};
use cicy_core::ode::{self, ThetaOperator};
use cicy_core::period;
use cicy_core::quantum;
use cicy_core::schubert::{self, DynkinType, RankGuards, RootSystem, WQLattice};
use cicy_core::{bps, BoundedPoset, DistributiveLattice};

use crate::Failure;

pub const EXPECTED: &str = include_str!("../assets/expected.json");
pub const EXPECTED_VERSION: u32 = 1;

pub const GROUPS: &[&str] =
    &["poset", "schubert", "classification", "invariants", "period", "pf", "quantum", "appendix", "monodromy", "bps"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compare {
    Exact,
    /// θ-operators, equal up to an overall sign
    Operator,
    /// integer matrices, equal up to an overall sign
    MatrixUpToSign,
    /// arrays, equal as sets
    Set,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    pub group: String,
    /// where the value is printed
    pub location: String,
    pub compare: Compare,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<String>,
    pub value: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectedFile {
    pub version: u32,
    pub entries: Vec<Entry>,
}

pub fn parse_expected(text: &str) -> Result<ExpectedFile> {
    let f: ExpectedFile =
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("expected-values file: {e}")))?;
    if f.version != EXPECTED_VERSION {
        return Err(Failure::Usage(format!("expected-values file has version {}, need {EXPECTED_VERSION}", f.version)).into());
    }
    let mut seen = BTreeSet::new();
    for e in &f.entries {
        if !GROUPS.contains(&e.group.as_str()) {
            return Err(Failure::Usage(format!("entry {}: unknown group `{}`", e.id, e.group)).into());
        }
        if !seen.insert(&e.id) {
            return Err(Failure::Usage(format!("duplicate entry {}", e.id)).into());
        }
        if e.compare == Compare::Operator && e.var.is_none() {
            return Err(Failure::Usage(format!("entry {}: operator without var", e.id)).into());
        }
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub group: String,
    pub location: String,
    pub status: Status,
    pub expected: Value,
    pub actual: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryReport {
    pub version: u32,
    pub digits: u32,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// wall time per group in seconds
    pub timings: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
}

impl BatteryReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

fn same(e: &Entry, actual: &Value) -> bool {
    match e.compare {
        Compare::Exact => *actual == e.value,
        Compare::Operator => {
            let var = e.var.as_deref().unwrap_or("x");
            match (e.value.as_str(), actual.as_str()) {
                (Some(w), Some(a)) => match (ThetaOperator::parse(var, w), ThetaOperator::parse(var, a)) {
                    (Ok(w), Ok(a)) => w.same_up_to_sign(&a),
                    _ => false,
                },
                _ => false,
            }
        }
        Compare::MatrixUpToSign => {
            let neg = |v: &Value| -> Option<Value> {
                let rows = v.as_array()?;
                let out: Option<Vec<Value>> = rows
                    .iter()
                    .map(|r| r.as_array()?.iter().map(|x| x.as_i64().map(|n| json!(-n))).collect::<Option<Vec<_>>>().map(Value::Array))
                    .collect();
                out.map(Value::Array)
            };
            *actual == e.value || neg(actual).is_some_and(|n| n == e.value)
        }
        Compare::Set => {
            let key = |v: &Value| -> Option<Vec<String>> {
                let mut k: Vec<String> = v.as_array()?.iter().map(|x| x.to_string()).collect();
                k.sort();
                Some(k)
            };
            key(actual).is_some() && key(actual) == key(&e.value)
        }
    }
}

const SIGMA_DEGREES: [usize; 9] = [1; 9];

/// Computes values group by group, sharing the Σ operator and monodromy.
struct Runner {
    digits: u32,
    sigma_op: Option<ThetaOperator>,
    monodromy: Option<MonodromyReport>,
}

fn strings<T: ToString>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

impl Runner {
    fn sigma_op(&mut self) -> Result<ThetaOperator> {
        if let Some(op) = &self.sigma_op {
            return Ok(op.clone());
        }
        let p = catalog::lookup("sigma")?;
        let s = period::period_flow(&p, &SIGMA_DEGREES, 50)?;
        let op = ode::fit_operator(&s, 4, 5)?;
        self.sigma_op = Some(op.clone());
        Ok(op)
    }

    fn monodromy(&mut self) -> Result<MonodromyReport> {
        if let Some(r) = &self.monodromy {
            return Ok(r.clone());
        }
        let op = self.sigma_op()?;
        let minus_one = BigRational::from_integer((-1).into());
        let r = monodromy::monodromy_report(&op, self.digits, (33, 78, -102), Some(&minus_one), None, &ScanRange::default())?;
        self.monodromy = Some(r.clone());
        Ok(r)
    }

    fn group(&mut self, g: &str) -> Result<Vec<(String, Value)>> {
        let mut out: Vec<(String, Value)> = Vec::new();
        let mut put = |k: &str, v: Value| out.push((k.to_string(), v));
        match g {
            "poset" => {
                let p = catalog::lookup("sigma")?;
                let l = DistributiveLattice::new(&p)?;
                let h = p.heights();
                let b = BoundedPoset::new(&p);
                put("sigma.order_ideals", json!(l.len()));
                put("sigma.pure", json!(h.pure));
                put("sigma.h_p", json!(h.h_p));
                put("sigma.maximal_chains", json!(l.count_maximal_chains()?.to_string()));
                put("sigma.edges", json!(b.edges.len()));
                put("sigma.facets", json!(b.enumerate_contractions(1).len()));
                put("sigma.convex_cycles", json!(b.minimal_convex_cycles().len()));
                let mut round_trip = true;
                for name in catalog::NAMES {
                    let q = catalog::lookup(name)?;
                    round_trip &= DistributiveLattice::new(&q)?.join_irreducibles()?.is_isomorphic(&q);
                }
                put("catalog.birkhoff_round_trip", json!(round_trip));
            }
            "schubert" => {
                let cp = catalog::lookup_colored("sigma")?;
                let r = cp.report();
                put("sigma.gorenstein", json!(r.gorenstein));
                put("sigma.fano_index", json!(r.fano_index));
                put("sigma.locally_factorial", json!(r.locally_factorial));
                let ph = cp.peaks_holes();
                let colors: Vec<usize> = ph.essential.iter().map(|&u| cp.color[u] + 1).collect();
                put("sigma.essential_hole_colors", json!(colors));
                let sing: Vec<Value> = r
                    .singular_components
                    .iter()
                    .map(|c| json!({"dimension": c.dimension, "degree": c.degree.to_string()}))
                    .collect();
                put("sigma.singular_components", Value::Array(sing));
            }
            "classification" => {
                let classes = schubert::classify_cicy3(RankGuards::default())?;
                let labels: Vec<Value> =
                    classes.iter().filter(|c| c.picard_one).map(|c| Value::String(c.label.clone())).collect();
                put("classify.picard_one", Value::Array(labels));
            }
            "invariants" => {
                let inst = CicyInstance::threefold(catalog::lookup("sigma")?, SIGMA_DEGREES.to_vec())?;
                let r = invariants::invariant_report(&inst)?;
                put("sigma.deg", json!(r.deg.to_string()));
                put("sigma.c2h", json!(r.c2h.to_string()));
                put("sigma.chi", json!(r.chi_x.to_string()));
                put("sigma.h21", json!(r.h21_x.to_string()));
                put("sigma.mirror_h11", json!(r.h11_y));
                put("sigma.mirror_h21", json!(r.h21_y.to_string()));
                put("sigma.mirror_chi", json!(r.chi_y.to_string()));
                put("sigma.nodes", json!(r.nodes.to_string()));
                put("sigma.facet_sum", json!(r.facet_sum.to_string()));
                let three = r.facets.iter().any(|f| f.interior.iter().any(|&(k, v)| k == 9 && v == 3));
                put("sigma.some_facet_has_three_interior_points", json!(three));
            }
            "period" => {
                let p = catalog::lookup("sigma")?;
                let flow = period::period_flow(&p, &SIGMA_DEGREES, 9)?;
                let displayed: Vec<String> = (0..9).map(|m| period::sigma_coefficient(m).to_string()).collect();
                put("sigma.period_matches_displayed_sum", json!(flow.to_strings() == displayed));
                let bin = period::period_binomial(&p, &SIGMA_DEGREES, 5)?;
                put("sigma.flow_equals_binomial", json!(bin == flow.truncate(5)));
            }
            "pf" => {
                let op = self.sigma_op()?;
                let sc = ode::riemann_scheme(&op)?;
                put("sigma.operator", json!(op.to_string()));
                put("sigma.discriminant", json!(sc.discriminant_display));
                let at = |d: &str| sc.point(d).map(|p| strings(&p.exponents)).unwrap_or(Value::Null);
                put("sigma.exponents_at_zero", at("0"));
                put("sigma.exponents_at_discriminant", at("root of x^3 + 159x^2 + 84x - 1"));
                put("sigma.exponents_at_apparent", at("-11/7"));
                put("sigma.exponents_at_infinity", strings(&sc.infinity));
            }
            "quantum" => {
                for (id, kind, node) in [("og510.quantum", DynkinType::D(5), 5), ("op2.quantum", DynkinType::E6, 1)] {
                    let wq = WQLattice::generate(&RootSystem::new(kind), node)?;
                    let (_, op) = quantum::quantum_operator(&wq)?;
                    put(id, json!(op.to_string()));
                }
            }
            "appendix" => {
                let og = catalog::lookup("og510")?;
                let op2 = catalog::lookup("op2")?;
                let cases: [(&str, &cicy_core::Poset, Vec<usize>, usize, usize); 3] = [
                    ("og510.cy3", &og, vec![1, 1, 1, 1, 1, 1, 2], 4, 2),
                    ("og510.k3", &og, vec![1; 8], 3, 2),
                    ("op2.cy4", &op2, vec![1; 12], 5, 2),
                ];
                for (id, p, d, order, degree) in cases {
                    let terms = (order + 1) * (degree + 1) + ode::FIT_MARGIN + 2;
                    let s = period::period_flow(p, &d, terms)?;
                    put(id, json!(ode::fit_operator(&s, order, degree)?.to_string()));
                }
            }
            "monodromy" => {
                let r = self.monodromy()?;
                let z = r.z.as_ref().ok_or(Failure::Usage("far side missing".into()))?;
                put("x.a", json!(r.x.normalization.a));
                put("z.a", json!(z.normalization.a));
                for (side, s) in [("x", &r.x), ("z", z)] {
                    for m in &s.matrices {
                        put(&format!("{side}.monodromy.{}", m.label), json!(m.matrix));
                    }
                    put(&format!("{side}.product_is_identity"), json!(s.product_is_identity));
                    put(&format!("{side}.integral_to_1e-20"), json!(s.normalization.residual_log10 < -20.0));
                }
                put("connection", json!(r.connection));
                put("z.scan", json!(r.z_scan));
            }
            "bps" => {
                let op = self.sigma_op()?;
                let (_, nx) = bps::bps_from_operator(&op, 33, 11)?;
                put("x.n0", strings(&nx));
                // the far degree comes from the monodromy scan, not from the table
                let deg = self.far_degree(&op)?;
                let zop = ode::invert_and_conjugate(&op, &BigRational::from_integer((-1).into()), "z")?;
                let (_, nz) = bps::bps_from_operator(&zop, deg, 10)?;
                put("z.n0", strings(&nz));
            }
            other => return Err(Failure::Usage(format!("unknown group `{other}`")).into()),
        }
        Ok(out)
    }

    fn far_degree(&mut self, op: &ThetaOperator) -> Result<i64> {
        if let Some(z) = self.monodromy.as_ref().and_then(|r| r.z.as_ref()) {
            return Ok(z.normalization.deg);
        }
        let minus_one = BigRational::from_integer((-1).into());
        let cont = monodromy::continue_solutions(op, 40, Some(&minus_one))?;
        let r = monodromy::report_from(&cont, (33, 78, -102), None, &ScanRange::default())?;
        Ok(r.z.map(|z| z.normalization.deg).unwrap_or(0))
    }
}

/// Runs every group not in `skip` and compares with `expected`.
pub fn run(expected: &ExpectedFile, skip: &[String], digits: u32) -> Result<BatteryReport> {
    for s in skip {
        if !GROUPS.contains(&s.as_str()) {
            return Err(Failure::Usage(format!("unknown group `{s}` (groups: {})", GROUPS.join(", "))).into());
        }
    }
    let mut runner = Runner { digits, sigma_op: None, monodromy: None };
    let mut actual: BTreeMap<String, BTreeMap<String, Value>> = BTreeMap::new();
    let mut timings = BTreeMap::new();
    for g in GROUPS {
        if skip.iter().any(|s| s == g) {
            continue;
        }
        let t = Instant::now();
        let vals = runner.group(g)?;
        timings.insert(g.to_string(), t.elapsed().as_secs_f64());
        actual.insert(g.to_string(), vals.into_iter().collect());
    }
    let mut checks = Vec::new();
    for e in &expected.entries {
        let Some(vals) = actual.get(&e.group) else {
            checks.push(Check {
                id: e.id.clone(),
                group: e.group.clone(),
                location: e.location.clone(),
                status: Status::Skip,
                expected: e.value.clone(),
                actual: Value::Null,
            });
            continue;
        };
        let Some(a) = vals.get(&e.id) else {
            return Err(Failure::Usage(format!("entry {} is not produced by group {}", e.id, e.group)).into());
        };
        let status = if same(e, a) { Status::Pass } else { Status::Fail };
        checks.push(Check {
            id: e.id.clone(),
            group: e.group.clone(),
            location: e.location.clone(),
            status,
            expected: e.value.clone(),
            actual: a.clone(),
        });
    }
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    Ok(BatteryReport {
        version: expected.version,
        digits,
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skip),
        timings,
        checks,
    })
}

/// Compact rows for the table view: failures carry expected and actual.
pub fn summary_rows(r: &BatteryReport) -> Value {
    Value::Array(
        r.checks
            .iter()
            .map(|c| {
                let diff = match c.status {
                    Status::Fail => format!("expected {} got {}", c.expected, c.actual),
                    _ => String::new(),
                };
                json!({"id": c.id, "group": c.group, "status": format!("{:?}", c.status).to_lowercase(), "location": c.location, "diff": diff})
            })
            .collect(),
    )
}
