mod common;

use num_rational::BigRational;
use proptest::prelude::*;

use cicy_core::bps;
use cicy_core::ode::{self, ThetaOperator};
use cicy_core::schubert::SIGMA_WORD;
use cicy_core::{catalog, hibi, DistributiveLattice, Poset, PosetJson};
use common::*;

/// A poset on n ≤ 6 elements from a random upper-triangular relation.
fn small_poset() -> impl Strategy<Value = Poset> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut rel = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        rel.push((j, i));
                    }
                    k += 1;
                }
            }
            Poset::from_relation((0..n).map(|i| format!("p{i}")).collect(), &rel).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn ehrhart_counts_match_brute_force(p in small_poset(), k in 0usize..=4) {
        prop_assert_eq!(hibi::lattice_points(&p, k).unwrap() as u64, monotone_maps(&p, k));
        prop_assert_eq!(hibi::interior_points(&p, k).unwrap() as u64, strict_maps(&p, k));
    }

    #[test]
    fn lattice_matches_brute_force_ideals(p in small_poset()) {
        let l = DistributiveLattice::new(&p).unwrap();
        let mut mine: Vec<u64> = l.ideals().iter().map(|&b| b as u64).collect();
        mine.sort_unstable();
        prop_assert_eq!(mine, order_ideals(&p));
        prop_assert_eq!(l.count_maximal_chains().unwrap(), linear_extensions(&p));
        prop_assert!(l.join_irreducibles().unwrap().is_isomorphic(&p));
    }

    #[test]
    fn poset_json_round_trip(p in small_poset()) {
        let j = PosetJson::from_poset(&p);
        let back: PosetJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        let q = back.to_poset().unwrap();
        prop_assert_eq!(q.covers(), p.covers());
    }

    #[test]
    fn distributivity_on_catalog(name in prop::sample::select(vec!["sigma", "og510", "rect-3-3", "quadric-6", "op2"]),
                                 a in any::<prop::sample::Index>(),
                                 b in any::<prop::sample::Index>(),
                                 c in any::<prop::sample::Index>()) {
        let p = catalog::lookup(name).unwrap();
        let l = DistributiveLattice::new(&p).unwrap();
        let (a, b, c) = (a.index(l.len()), b.index(l.len()), c.index(l.len()));
        prop_assert_eq!(l.meet(a, l.join(b, c)), l.join(l.meet(a, b), l.meet(a, c)));
        prop_assert_eq!(l.join(a, l.meet(b, c)), l.meet(l.join(a, b), l.join(a, c)));
        // join and meet are union and intersection of ideals
        prop_assert_eq!(l.ideal(l.join(a, b)), l.ideal(a) | l.ideal(b));
        prop_assert_eq!(l.ideal(l.meet(a, b)), l.ideal(a) & l.ideal(b));
    }
}

/// chains = Chevalley = Ehrhart leading term, on every catalog poset.
#[test]
fn degree_triple_consistency() {
    for name in catalog::NAMES {
        let cp = catalog::lookup_colored(name).unwrap();
        let p = &cp.poset;
        let chains = DistributiveLattice::new(p).unwrap().count_maximal_chains().unwrap();
        let wq = cicy_core::WQLattice::generate(&cp.rs, minuscule_node(name)).unwrap();
        let w = if *name == "sigma" { wq.find_word(SIGMA_WORD).unwrap() } else { wq.longest() };
        assert_eq!(wq.chevalley_degree(w), chains, "{name}");
        if p.len() <= 16 {
            let e = hibi::ehrhart_polynomial(p).unwrap();
            let lead = e.last().unwrap() * BigRational::from_integer(factorial(p.len() as u64));
            assert_eq!(lead, BigRational::from_integer(chains.into()), "{name}");
        }
    }
}

fn minuscule_node(name: &str) -> usize {
    match name {
        "sigma" | "op2" | "chain-4" | "quadric-6" => 1,
        "og510" => 5,
        "e7" => 7,
        "rect-2-3" => 2,
        other => panic!("no node for {other}"),
    }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=40)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// K_ttt and n₀ do not see the normalization of the period.
    #[test]
    fn bps_gauge_invariance(c in rational(), sigma in any::<bool>()) {
        let (op, deg) = if sigma {
            (ThetaOperator::parse("x", "121θ^4 - 77x(130θ^4+266θ^3+210θ^2+77θ+11) - x^2(32126θ^4+89990θ^3+103725θ^2+55253θ+11198) - x^3(28723θ^4+74184θ^3+63474θ^2+20625θ+1716) - 7x^4(1135θ^4+2336θ^3+1881θ^2+713θ+110) - 49x^5(θ+1)^4").unwrap(), 33)
        } else {
            (ThetaOperator::parse("x", "θ^4 - 5x(5θ+1)(5θ+2)(5θ+3)(5θ+4)").unwrap(), 5)
        };
        let n = 6;
        let fb = ode::frobenius_basis(&op, n).unwrap();
        let base = bps::yukawa(&op, deg, &bps::mirror_map(&fb, n).unwrap(), n).unwrap();
        let scaled = bps::rescale(&fb, &c);
        let ys = bps::yukawa(&op, deg, &bps::mirror_map(&scaled, n).unwrap(), n).unwrap();
        prop_assert_eq!(&ys.k, &base.k);
        prop_assert_eq!(bps::bps_genus0(&ys, n - 1).unwrap(), bps::bps_genus0(&base, n - 1).unwrap());
    }
}
