mod common;

use std::collections::BTreeSet;

use cicy_core::invariants::{self, invariant_report};
use cicy_core::schubert::{classify_cicy3, DynkinType, RankGuards, RootSystem, WQLattice};
use cicy_core::{catalog, hibi, CicyInstance, DistributiveLattice, Poset};
use common::*;

fn lattice(kind: DynkinType, node: usize) -> WQLattice {
    WQLattice::generate(&RootSystem::new(kind), node).unwrap()
}

#[test]
fn minuscule_orbit_sizes() {
    assert_eq!(lattice(DynkinType::E6, 1).len(), 27);
    assert_eq!(lattice(DynkinType::E7, 7).len(), 56);
    assert_eq!(lattice(DynkinType::D(5), 5).len(), 16);
    // G(2,5): C(5,2)
    assert_eq!(lattice(DynkinType::A(4), 2).len(), 10);
}

#[test]
fn wq_lattice_is_the_ideal_lattice_of_its_poset() {
    for (kind, node) in [(DynkinType::A(4), 2), (DynkinType::D(5), 5), (DynkinType::E6, 1)] {
        let wq = lattice(kind, node);
        assert!(wq.is_distributive());
        let p = wq.full_poset().poset;
        assert_eq!(order_ideals(&p).len(), wq.len());
        // Chevalley degree of the whole space = maximal chains of J(P)
        assert_eq!(wq.chevalley_degree(wq.longest()), linear_extensions(&p));
    }
}

#[test]
fn spinor_tenfold_index_and_degree() {
    let cp = catalog::lookup_colored("og510").unwrap();
    let r = cp.report();
    assert_eq!(r.fano_index, Some(8));
    assert_eq!(r.degree, 12);
    assert!(r.singular_components.is_empty());
}

#[test]
fn sigma_schubert_report() {
    let cp = catalog::lookup_colored("sigma").unwrap();
    let r = cp.report();
    assert_eq!(r.dimension, 12);
    assert!(r.gorenstein);
    assert_eq!(r.fano_index, Some(9));
    assert!(r.locally_factorial);
    assert_eq!(r.peaks.len(), 1);
    let ph = cp.peaks_holes();
    assert_eq!(ph.essential.len(), 1);
    assert_eq!(cp.color[ph.essential[0]] + 1, 2);
    assert_eq!(r.singular_components.len(), 1);
    assert_eq!((r.singular_components[0].dimension, r.singular_components[0].degree), (5, 1));
    assert_eq!(r.degree, 33);
}

#[test]
fn classification_lists_twelve_picard_one_classes() {
    let classes = classify_cicy3(RankGuards::default()).unwrap();
    let labels: BTreeSet<&str> = classes.iter().filter(|c| c.picard_one).map(|c| c.label.as_str()).collect();
    let want: BTreeSet<&str> = [
        "P4(5)",
        "P5(2,4)",
        "P5(3^2)",
        "P6(2^2,3)",
        "P7(2^4)",
        "G(2,5)(1^2,3)",
        "G(2,5)(1,2^2)",
        "G(2,6)(1^4,2)",
        "G(3,6)(1^6)",
        "G(2,7)(1^7)",
        "OG(5,10)(1^6,2)",
        "Sigma(1^9)",
    ]
    .into_iter()
    .collect();
    assert_eq!(labels, want);
    // E7/P7 is scanned but never yields a class
    assert!(classes.iter().all(|c| !c.family.starts_with("E7")));
    // the non-factorial extras all have more than one peak
    assert!(classes.iter().filter(|c| !c.picard_one).all(|c| c.report.peaks.len() > 1));
}

#[test]
fn classification_is_stable_under_larger_guards() {
    let key = |g| -> BTreeSet<(String, Vec<usize>)> {
        classify_cicy3(g).unwrap().into_iter().map(|c| (c.label, c.degrees)).collect()
    };
    assert_eq!(key(RankGuards::default()), key(RankGuards { max_a: 14, max_d: 9 }));
}

#[test]
fn hibi_counts() {
    let sigma = catalog::lookup("sigma").unwrap();
    assert_eq!(hibi::lattice_points(&sigma, 1).unwrap(), 21);
    for k in 0..4 {
        assert_eq!(hibi::lattice_points(&sigma, k).unwrap() as u64, monotone_maps(&sigma, k), "k={k}");
    }
    // G(2,5) has degree 5
    assert_eq!(hibi::hibi_degree(&Poset::rectangle(2, 3)).unwrap(), 5);
    // generators: incomparable pairs of ideals
    let l = DistributiveLattice::new(&sigma).unwrap();
    let ideals = order_ideals(&sigma);
    let mut incomparable = 0;
    for (i, &a) in ideals.iter().enumerate() {
        for &b in &ideals[i + 1..] {
            if a & b != a && a & b != b {
                incomparable += 1;
            }
        }
    }
    assert_eq!(hibi::hibi_ideal_generators(&l).len(), incomparable);
}

#[test]
fn diamond_has_one_singular_component() {
    let comps = hibi::singular_components(&Poset::rectangle(2, 2)).unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0].codim, 3);
    assert_eq!(hibi::singular_components(&catalog::lookup("sigma").unwrap()).unwrap().len(), 4);
}

#[test]
fn sigma_invariants() {
    let inst = CicyInstance::threefold(catalog::lookup("sigma").unwrap(), vec![1; 9]).unwrap();
    let r = invariant_report(&inst).unwrap();
    assert_eq!((r.deg, r.c2h, r.chi_x), (33, 78, -102));
    assert_eq!((r.h11_y, r.h21_y, r.chi_y), (5, 37, -64));
    assert_eq!((r.nodes, r.facet_sum, r.h21_x), (19, 59, 52));
    assert_eq!(r.chi_o1, 12);
    assert_eq!(r.facets.len(), 17);
    assert!(r.facets.iter().any(|f| f.interior.contains(&(9, 3))));
    // χ(Y) = 2(h11 − h21), χ(X) = χ(Y) − 2·nodes
    assert_eq!(r.chi_y, 2 * (r.h11_y as i128 - r.h21_y));
    assert_eq!(r.chi_x, r.chi_y - 2 * r.nodes as i128);
}

#[test]
fn classical_threefolds() {
    let quintic = CicyInstance::threefold(catalog::lookup("chain-4").unwrap(), vec![5]).unwrap();
    let r = invariant_report(&quintic).unwrap();
    assert_eq!((r.deg, r.c2h, r.chi_x), (5, 50, -200));
    let g25 = CicyInstance::threefold(catalog::lookup("rect-2-3").unwrap(), vec![1, 1, 3]).unwrap();
    assert_eq!(invariants::degree_ci(&g25).unwrap(), 15);
    assert!(CicyInstance::threefold(catalog::lookup("chain-4").unwrap(), vec![4]).is_err());
}

#[test]
fn unknown_catalog_name() {
    assert!(matches!(catalog::lookup("sigmaa"), Err(catalog::CatalogError::Unknown(_))));
}
