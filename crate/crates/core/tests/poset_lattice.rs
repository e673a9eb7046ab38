mod common;

use cicy_core::{catalog, hibi, BoundedPoset, DistributiveLattice, Poset, PosetJson};
use common::*;

#[test]
fn sigma_lattice_shape() {
    let p = catalog::lookup("sigma").unwrap();
    let l = DistributiveLattice::new(&p).unwrap();
    assert_eq!(l.len(), 21);
    assert_eq!(order_ideals(&p).len(), 21);
    let h = p.heights();
    assert!(h.pure);
    assert_eq!(h.h_p, 9);
    assert_eq!(l.count_maximal_chains().unwrap(), 33);
    assert_eq!(linear_extensions(&p), 33);
    assert_eq!(BoundedPoset::new(&p).edges.len(), 17);
}

#[test]
fn maximal_chains_match_linear_extensions() {
    for name in ["sigma", "chain-4", "rect-2-3", "rect-3-3", "og510", "quadric-6", "antichain-2"] {
        let p = catalog::lookup(name).unwrap();
        let l = DistributiveLattice::new(&p).unwrap();
        assert_eq!(l.count_maximal_chains().unwrap(), linear_extensions(&p), "{name}");
    }
}

#[test]
fn boolean_lattice_has_n_factorial_chains() {
    for n in 1..7 {
        let l = DistributiveLattice::new(&Poset::antichain(n)).unwrap();
        assert_eq!(l.len(), 1 << n);
        assert_eq!(l.count_maximal_chains().unwrap(), (1..=n as u128).product::<u128>());
    }
    assert_eq!(DistributiveLattice::new(&Poset::chain(5)).unwrap().count_maximal_chains().unwrap(), 1);
}

#[test]
fn chain_length_counts_by_enumeration() {
    // chain of n elements: n+1 ideals, c_i = C(n+1, i+1)
    for n in 1..6 {
        let p = Poset::chain(n);
        let c = DistributiveLattice::new(&p).unwrap().chain_length_counts().unwrap();
        let ideals = order_ideals(&p);
        for (i, &ci) in c.iter().enumerate().skip(1) {
            assert_eq!(ci, binomial(n as u64 + 1, i as u64 + 1), "n={n} i={i}");
            assert_eq!(ci as u64, ideal_chains(&ideals, i));
        }
    }
    let p = Poset::antichain(2);
    let c = DistributiveLattice::new(&p).unwrap().chain_length_counts().unwrap();
    let ideals = order_ideals(&p);
    assert_eq!(c, vec![1, ideal_chains(&ideals, 1) as u128, ideal_chains(&ideals, 2) as u128]);
    assert_eq!(c[2], 2);
    let sigma = catalog::lookup("sigma").unwrap();
    assert_eq!(*DistributiveLattice::new(&sigma).unwrap().chain_length_counts().unwrap().last().unwrap(), 33);
}

#[test]
fn vertices_of_order_polytope_are_ideals() {
    for name in ["sigma", "rect-2-3", "og510", "chain-3"] {
        let p = catalog::lookup(name).unwrap();
        // 0/1 points of Δ(P) are the maps counted at k = 1
        assert_eq!(hibi::lattice_points(&p, 1).unwrap() as u64, monotone_maps(&p, 1), "{name}");
        assert_eq!(hibi::lattice_points(&p, 1).unwrap() as usize, order_ideals(&p).len());
        let b = BoundedPoset::new(&p);
        assert_eq!(b.enumerate_contractions(p.len()).len(), order_ideals(&p).len(), "{name}");
    }
}

#[test]
fn contraction_counts() {
    for name in ["sigma", "rect-2-3", "og510", "quadric-6"] {
        let p = catalog::lookup(name).unwrap();
        let b = BoundedPoset::new(&p);
        assert_eq!(b.enumerate_contractions(0).len(), 1);
        assert_eq!(b.enumerate_contractions(1).len(), b.edges.len(), "{name}");
    }
    let sigma = BoundedPoset::new(&catalog::lookup("sigma").unwrap());
    let cycles = sigma.minimal_convex_cycles();
    assert_eq!(cycles.len(), 4);
    assert!(cycles.iter().all(|c| c.codim == 3));
    assert!(BoundedPoset::new(&Poset::chain(4)).minimal_convex_cycles().is_empty());
    assert_eq!(BoundedPoset::new(&Poset::rectangle(2, 2)).minimal_convex_cycles().len(), 1);
}

#[test]
fn birkhoff_round_trip_on_catalog() {
    for name in catalog::NAMES.iter().chain(&["antichain-2", "rect-3-4", "chain-7"]) {
        let p = catalog::lookup(name).unwrap();
        let l = DistributiveLattice::new(&p).unwrap();
        assert!(l.join_irreducibles().unwrap().is_isomorphic(&p), "{name}");
    }
}

#[test]
fn purity_matches_cover_heights() {
    for name in catalog::NAMES {
        let p = catalog::lookup(name).unwrap();
        let h = p.heights();
        let b = BoundedPoset::new(&p);
        let height = |u: usize| {
            if u == b.top() {
                h.h_p
            } else if u == b.bottom() {
                0
            } else {
                h.h[u]
            }
        };
        let drops_by_one = b.edges.iter().all(|&(s, t)| height(s) == height(t) + 1);
        assert_eq!(h.pure, drops_by_one, "{name}");
    }
}

#[test]
fn json_round_trip() {
    for name in catalog::NAMES {
        let p = catalog::lookup(name).unwrap();
        let j = PosetJson::from_poset(&p);
        let text = serde_json::to_string(&j).unwrap();
        let back: PosetJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let q = back.to_poset().unwrap();
        assert_eq!(q.names(), p.names());
        assert_eq!(q.covers(), p.covers());
        assert_eq!(q.embedding(), p.embedding());
    }
}

#[test]
fn extensions_strip_and_rebuild() {
    let zigzag = Poset::new(&["a", "b", "c", "d"], &[("b", "a"), ("b", "c"), ("d", "c")]).unwrap();
    let z = zigzag.extend(true);
    let (core, d) = z.reduce_extensions();
    assert_eq!(d, 1);
    assert!(core.is_isomorphic(&zigzag));
    assert!(Poset::chain(4).extend(true).is_isomorphic(&Poset::chain(5)));
}
