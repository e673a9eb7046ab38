//! Loading posets, operators and series from catalog names or files.

use std::path::Path;

use anyhow::{Context, Result};
use cicy_core::catalog;
use cicy_core::ode::{OperatorJson, ThetaOperator};
use cicy_core::series::SeriesJson;
use cicy_core::{Poset, PosetJson, RationalPowerSeries};

use crate::Failure;

/// Named operators accepted by `--op`.
pub const OPERATORS: &[(&str, &str)] = &[
    ("sigma-pf", SIGMA_PF),
    ("quintic", "θ^4 - 5x(5θ+1)(5θ+2)(5θ+3)(5θ+4)"),
];

pub const SIGMA_PF: &str = "121θ^4 - 77x(130θ^4+266θ^3+210θ^2+77θ+11) \
    - x^2(32126θ^4+89990θ^3+103725θ^2+55253θ+11198) \
    - x^3(28723θ^4+74184θ^3+63474θ^2+20625θ+1716) \
    - 7x^4(1135θ^4+2336θ^3+1881θ^2+713θ+110) - 49x^5(θ+1)^4";

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")).into())
}

/// A catalog name, or a path to a poset JSON file.
pub fn poset(arg: &str) -> Result<Poset> {
    if Path::new(arg).is_file() {
        let text = read(arg)?;
        let j: PosetJson =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{arg}: not a poset file: {e}")))?;
        return j.to_poset().map_err(|e| Failure::Usage(format!("{arg}: {e}")).into());
    }
    catalog::lookup(arg).map_err(|e| Failure::Usage(e.to_string()).into())
}

pub fn degrees(arg: &str) -> Result<Vec<usize>> {
    cicy_core::invariants::parse_degrees(arg)
        .ok_or_else(|| Failure::Usage(format!("bad degree vector `{arg}` (use 1x9 or 1,1,2)")).into())
}

/// A named operator, an operator JSON file, or a text file holding a θ-expression in x.
pub fn operator(arg: &str) -> Result<ThetaOperator> {
    if let Some((_, s)) = OPERATORS.iter().find(|(n, _)| *n == arg) {
        return Ok(ThetaOperator::parse("x", s)?);
    }
    if !Path::new(arg).is_file() {
        let names: Vec<&str> = OPERATORS.iter().map(|(n, _)| *n).collect();
        return Err(Failure::Usage(format!("`{arg}` is neither a file nor one of {}", names.join(", "))).into());
    }
    let text = read(arg)?;
    let t = text.trim();
    if t.starts_with('{') {
        let j: OperatorJson =
            serde_json::from_str(t).map_err(|e| Failure::Usage(format!("{arg}: not an operator file: {e}")))?;
        return ThetaOperator::try_from(&j).map_err(|e| Failure::Usage(format!("{arg}: {e}")).into());
    }
    ThetaOperator::parse("x", t).map_err(|e| Failure::Usage(format!("{arg}: {e}")).into())
}

/// A series JSON file ({"var","coeffs"}) or a bare array of rationals.
pub fn series(arg: &str) -> Result<RationalPowerSeries> {
    let text = read(arg)?;
    let j: SeriesJson = match serde_json::from_str::<SeriesJson>(&text) {
        Ok(j) => j,
        Err(_) => {
            let coeffs: Vec<serde_json::Value> =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{arg}: not a series file: {e}")))?;
            let coeffs = coeffs
                .into_iter()
                .map(|v| match v {
                    serde_json::Value::String(s) => Ok(s),
                    serde_json::Value::Number(n) => Ok(n.to_string()),
                    other => Err(Failure::Usage(format!("{arg}: bad coefficient {other}"))),
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            SeriesJson { var: "x".into(), coeffs }
        }
    };
    RationalPowerSeries::try_from(&j).with_context(|| format!("{arg}: bad coefficient"))
}

/// "33,78,-102"
pub fn triple(arg: &str) -> Result<(i64, i64, i64)> {
    let bad = || Failure::Usage(format!("expected deg,c2H,chi, got `{arg}`"));
    let v: Vec<i64> = arg.split(',').map(|s| s.trim().parse::<i64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    match v[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(bad().into()),
    }
}

pub fn rational(arg: &str) -> Result<num_rational::BigRational> {
    cicy_core::series::parse_rational(arg).map_err(|_| Failure::Usage(format!("bad rational `{arg}`")).into())
}
