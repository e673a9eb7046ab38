//! Named posets.

use crate::poset::{Poset, PosetError};
use crate::schubert::{ColoredPoset, DynkinType, RootSystem, WQLattice, SIGMA_WORD};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog poset `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Names accepted by [`lookup`], with a parameterized example for each family.
pub const NAMES: &[&str] = &["sigma", "chain-4", "rect-2-3", "og510", "op2", "quadric-6", "e7"];

fn minuscule(kind: DynkinType, node: usize, word: Option<&str>) -> ColoredPoset {
    let l = WQLattice::generate(&RootSystem::new(kind), node).expect("minuscule node");
    match word {
        Some(w) => l.colored_poset_of_word(w).expect("catalog word"),
        None => l.full_poset(),
    }
}

/// Colored poset for the catalog entries that come from a minuscule G/Q.
pub fn lookup_colored(name: &str) -> Result<ColoredPoset, CatalogError> {
    let unknown = || CatalogError::Unknown(name.to_string());
    let nums = |rest: &str| -> Result<Vec<usize>, CatalogError> {
        rest.split('-').map(|s| s.parse::<usize>().map_err(|_| unknown())).collect()
    };
    match name {
        "sigma" => Ok(minuscule(DynkinType::E6, 1, Some(SIGMA_WORD))),
        "og510" => Ok(minuscule(DynkinType::D(5), 5, None)),
        "op2" => Ok(minuscule(DynkinType::E6, 1, None)),
        "e7" => Ok(minuscule(DynkinType::E7, 7, None)),
        _ => {
            if let Some(rest) = name.strip_prefix("chain-") {
                let v = nums(rest)?;
                if v.len() != 1 || v[0] == 0 {
                    return Err(unknown());
                }
                Ok(minuscule(DynkinType::A(v[0]), 1, None))
            } else if let Some(rest) = name.strip_prefix("rect-") {
                let v = nums(rest)?;
                if v.len() != 2 || v[0] == 0 || v[1] == 0 {
                    return Err(unknown());
                }
                Ok(minuscule(DynkinType::A(v[0] + v[1] - 1), v[0], None))
            } else if let Some(rest) = name.strip_prefix("quadric-") {
                let v = nums(rest)?;
                if v.len() != 1 || v[0] < 6 || v[0] % 2 != 0 {
                    // D_n needs n ≥ 4, i.e. quadrics of dimension ≥ 6
                    return Err(unknown());
                }
                Ok(minuscule(DynkinType::D(v[0] / 2 + 1), 1, None))
            } else {
                Err(unknown())
            }
        }
    }
}

/// Look up a catalog poset. `chain-n` is ℙⁿ, `rect-a-b` is G(a, a+b),
/// `quadric-2n` the even-dimensional quadric, the rest are named spaces.
pub fn lookup(name: &str) -> Result<Poset, CatalogError> {
    if name == "antichain-2" {
        let p = Poset::antichain(2);
        let e = p.auto_embedding().expect("antichain embedding");
        return Ok(p.with_embedding(e)?);
    }
    Ok(lookup_colored(name)?.poset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shapes() {
        assert_eq!(lookup("sigma").unwrap().len(), 12);
        assert!(lookup("rect-2-4").unwrap().is_isomorphic(&Poset::rectangle(2, 4)));
        assert_eq!(lookup("og510").unwrap().len(), 10);
        assert_eq!(lookup("op2").unwrap().len(), 16);
        assert_eq!(lookup("e7").unwrap().len(), 27);
        assert_eq!(lookup("quadric-6").unwrap().len(), 6);
        assert!(lookup("chain-0").is_err());
        assert!(matches!(lookup("nope"), Err(CatalogError::Unknown(_))));
        for n in NAMES {
            assert!(lookup(n).unwrap().embedding().is_some(), "{n}");
        }
    }
}
