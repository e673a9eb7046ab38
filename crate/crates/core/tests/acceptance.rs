//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//! Published values are written out here, independently of the CLI's
//! expected-values file.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use cicy_core::monodromy::{self, MonodromyReport, ScanRange};
use cicy_core::ode::{self, ThetaOperator};
use cicy_core::schubert::{classify_cicy3, DynkinType, RankGuards, RootSystem, WQLattice};
use cicy_core::series::rat;
use cicy_core::{bps, catalog, hibi, invariants, period, quantum};
use cicy_core::{BoundedPoset, CicyInstance, DistributiveLattice, Poset};
use common::*;

const SIGMA_PF: &str = "121θ^4 - 77x(130θ^4+266θ^3+210θ^2+77θ+11) - x^2(32126θ^4+89990θ^3+103725θ^2+55253θ+11198) - x^3(28723θ^4+74184θ^3+63474θ^2+20625θ+1716) - 7x^4(1135θ^4+2336θ^3+1881θ^2+713θ+110) - 49x^5(θ+1)^4";

type Outcome = Result<(), String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

#[derive(Default)]
struct State {
    sigma_op: Option<ThetaOperator>,
    monodromy: Option<MonodromyReport>,
}

fn within(t: Instant, limit: Duration, what: &str) -> Outcome {
    check!(t.elapsed() < limit, "{what} took {:?}, limit {:?}", t.elapsed(), limit);
    Ok(())
}

fn c1_combinatorics(_: &mut State) -> Outcome {
    let t = Instant::now();
    let p = catalog::lookup("sigma").unwrap();
    let l = DistributiveLattice::new(&p).unwrap();
    let h = p.heights();
    check!(l.len() == 21, "|J(P)| = {}", l.len());
    check!(h.pure && h.h_p == 9, "pure {} h_P {}", h.pure, h.h_p);
    let chains = l.count_maximal_chains().unwrap();
    check!(chains == 33, "maximal chains {chains}");
    let e = BoundedPoset::new(&p).edges.len();
    check!(e == 17, "|E| = {e}");
    within(t, Duration::from_secs(1), "Σ lattice")?;
    for name in catalog::NAMES {
        let t = Instant::now();
        let q = catalog::lookup(name).unwrap();
        let back = DistributiveLattice::new(&q).unwrap().join_irreducibles().unwrap();
        check!(back.is_isomorphic(&q), "Birkhoff round trip fails on {name}");
        within(t, Duration::from_secs(1), name)?;
    }
    Ok(())
}

fn c2_schubert(_: &mut State) -> Outcome {
    let cp = catalog::lookup_colored("sigma").unwrap();
    let r = cp.report();
    check!(r.gorenstein, "not Gorenstein");
    check!(r.fano_index == Some(9), "index {:?}", r.fano_index);
    check!(r.locally_factorial, "not locally factorial");
    let ph = cp.peaks_holes();
    let colors: Vec<usize> = ph.essential.iter().map(|&u| cp.color[u] + 1).collect();
    check!(colors == [2], "essential hole colors {colors:?}");
    let sing: Vec<(usize, u128)> = r.singular_components.iter().map(|c| (c.dimension, c.degree)).collect();
    check!(sing == [(5, 1)], "singular components {sing:?}");
    Ok(())
}

fn c3_classification(_: &mut State) -> Outcome {
    let t = Instant::now();
    let classes = classify_cicy3(RankGuards::default()).unwrap();
    within(t, Duration::from_secs(60), "classification")?;
    let got: BTreeSet<String> = classes.iter().filter(|c| c.picard_one).map(|c| c.label.clone()).collect();
    let want: BTreeSet<String> = [
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
    .iter()
    .map(|s| s.to_string())
    .collect();
    check!(got == want, "classes differ: extra {:?}, missing {:?}", got.difference(&want).collect::<Vec<_>>(), want.difference(&got).collect::<Vec<_>>());
    println!("    {} Picard-one classes; {} further smooth classes in non-factorial X(w)", got.len(), classes.len() - got.len());
    Ok(())
}

fn c4_invariants(_: &mut State) -> Outcome {
    let t = Instant::now();
    let inst = CicyInstance::threefold(catalog::lookup("sigma").unwrap(), vec![1; 9]).unwrap();
    let r = invariants::invariant_report(&inst).unwrap();
    within(t, Duration::from_secs(60), "invariants")?;
    check!((r.deg, r.c2h, r.chi_x) == (33, 78, -102), "(deg, c2H, chi) = ({}, {}, {})", r.deg, r.c2h, r.chi_x);
    check!((r.h11_y, r.h21_y, r.chi_y) == (5, 37, -64), "Y: ({}, {}, {})", r.h11_y, r.h21_y, r.chi_y);
    check!(r.nodes == 19, "nodes {}", r.nodes);
    check!(r.facet_sum == 59, "facet sum {}", r.facet_sum);
    check!(r.facets.iter().any(|f| f.interior.contains(&(9, 3))), "no facet with l*(9θ) = 3");
    Ok(())
}

fn c5_period(_: &mut State) -> Outcome {
    let cases: [(&str, Vec<usize>); 4] =
        [("sigma", vec![1; 9]), ("rect-2-3", vec![1; 5]), ("rect-2-4", vec![1, 1, 1, 1, 2]), ("chain-4", vec![5])];
    for (name, d) in &cases {
        let p = catalog::lookup(name).unwrap();
        let f = period::period_flow(&p, d, 5).unwrap();
        let b = period::period_binomial(&p, d, 5).unwrap();
        check!(f == b, "flow and binomial differ on {name}");
        let a1 = f.coeff(1);
        let paths = BigRational::from_integer(bounded_paths(&p).into());
        let prefactor = BigRational::from_integer(period::prefactor(d, p.heights().h_p, 1));
        check!(a1 == paths * prefactor, "a1 on {name} is {a1}");
    }
    let q = period::period_flow(&catalog::lookup("chain-4").unwrap(), &[5], 10).unwrap();
    for m in 0..10u64 {
        let want = factorial(5 * m) / factorial(m).pow(5);
        check!(q.coeff(m as usize) == BigRational::from_integer(want), "quintic coefficient {m}");
    }
    Ok(())
}

fn c6_picard_fuchs(st: &mut State) -> Outcome {
    let t = Instant::now();
    let s = period::period_flow(&catalog::lookup("sigma").unwrap(), &[1; 9], 50).unwrap();
    let op = ode::fit_operator(&s, 4, 5).unwrap();
    let sc = ode::riemann_scheme(&op).unwrap();
    within(t, Duration::from_secs(60), "fit and scheme")?;
    let printed = ThetaOperator::parse("x", SIGMA_PF).unwrap();
    check!(op.same_up_to_sign(&printed), "fitted {op}");
    check!(sc.discriminant_display == "x^3 + 159x^2 + 84x - 1", "discriminant {}", sc.discriminant_display);
    let ex = |d: &str| sc.point(d).map(|p| p.exponents.clone()).unwrap_or_default();
    check!(ex("0") == ["0", "0", "0", "0"], "at 0: {:?}", ex("0"));
    check!(ex("root of x^3 + 159x^2 + 84x - 1") == ["0", "1", "1", "2"], "at the conifolds");
    check!(ex("-11/7") == ["0", "1", "3", "4"], "at -11/7: {:?}", ex("-11/7"));
    check!(sc.infinity == ["1", "1", "1", "1"], "at ∞: {:?}", sc.infinity);
    st.sigma_op = Some(op);
    Ok(())
}

fn c7_appendix(_: &mut State) -> Outcome {
    let t = Instant::now();
    let quantum_printed = [
        (DynkinType::D(5), 5, "θ^11(θ-1)^5 - qθ^5(2θ+1)(17θ^2+17θ+5) + q^2"),
        (DynkinType::E6, 1, "θ^17(θ-1)^9 - 3qθ^9(2θ+1)(3θ^2+3θ+1)(15θ^2+15θ+4) - 3q^2(3θ+2)(3θ+4)"),
    ];
    for (kind, node, s) in quantum_printed {
        let wq = WQLattice::generate(&RootSystem::new(kind), node).unwrap();
        let (_, op) = quantum::quantum_operator(&wq).unwrap();
        check!(op.same_up_to_sign(&ThetaOperator::parse("q", s).unwrap()), "{kind}: {op}");
    }
    let og = catalog::lookup("og510").unwrap();
    let op2 = catalog::lookup("op2").unwrap();
    let fits: [(&Poset, Vec<usize>, usize, &str); 3] = [
        (&og, vec![1, 1, 1, 1, 1, 1, 2], 4, "θ^4 - 2x(2θ+1)^2(17θ^2+17θ+5) + 4x^2(θ+1)^2(2θ+1)(2θ+3)"),
        (&og, vec![1; 8], 3, "θ^3 - x(2θ+1)(17θ^2+17θ+5) + x^2(θ+1)^3"),
        (&op2, vec![1; 12], 5, "θ^5 - 3x(2θ+1)(3θ^2+3θ+1)(15θ^2+15θ+4) - 3x^2(θ+1)^3(3θ+2)(3θ+4)"),
    ];
    for (p, d, order, s) in fits {
        let series = period::period_flow(p, &d, 3 * (order + 1) + ode::FIT_MARGIN + 2).unwrap();
        let op = ode::fit_operator(&series, order, 2).unwrap();
        check!(op.same_up_to_sign(&ThetaOperator::parse("x", s).unwrap()), "degrees {d:?}: {op}");
    }
    within(t, Duration::from_secs(300), "appendix")
}

fn c8_monodromy(st: &mut State) -> Outcome {
    let t = Instant::now();
    let op = st.sigma_op.clone().unwrap_or_else(|| ThetaOperator::parse("x", SIGMA_PF).unwrap());
    let r = monodromy::monodromy_report(&op, 120, (33, 78, -102), Some(&rat(-1)), None, &ScanRange::default())
        .map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(1800), "monodromy")?;
    let z = r.z.as_ref().ok_or("no far side")?;
    check!(r.x.normalization.a == "-1/2" && z.normalization.a == "-1/2", "a = {} / {}", r.x.normalization.a, z.normalization.a);
    for (side, s) in [("X", &r.x), ("Z", z)] {
        check!(s.normalization.residual_log10 < -20.0, "{side} residual 1e{:.1}", s.normalization.residual_log10);
        check!(s.product_is_identity, "{side} product of loops is not I");
    }
    check!(r.z_scan == [(21, 66, -102)], "scan {:?}", r.z_scan);
    let e03 = vec![vec![1, 0, 0, 1], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]];
    let mx: [(&str, Vec<Vec<i64>>); 5] = [
        ("ζ1", vec![vec![169, -80, 32, 64], vec![84, -39, 16, 32], vec![210, -100, 41, 80], vec![-441, 210, -84, -167]]),
        ("ζ2", vec![vec![13, -8, 2, 4], vec![6, -3, 1, 2], vec![24, -16, 5, 8], vec![-36, 24, -6, -11]]),
        ("0", vec![vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![16, 33, 1, 0], vec![-12, -17, -1, 1]]),
        ("ζ3", e03.clone()),
        ("∞", vec![vec![286, -130, 55, 111], vec![89, -43, 17, 34], vec![-307, 127, -60, -122], vec![-465, 218, -89, -179]]),
    ];
    let mz: [(&str, Vec<Vec<i64>>); 5] = [
        ("ζ1", e03),
        ("ζ2", vec![vec![1, 3, 0, 1], vec![0, 1, 0, 0], vec![0, -9, 1, -3], vec![0, 0, 0, 1]]),
        ("0", vec![vec![343, -17, 83, 168], vec![104, -9, 25, 50], vec![-496, 8, -121, -247], vec![-432, 32, -104, -209]]),
        ("ζ3", vec![vec![211, -20, 50, 100], vec![105, -9, 25, 50], vec![42, -4, 11, 20], vec![-441, 42, -105, -209]]),
        ("∞", vec![vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![10, 21, 1, 0], vec![-9, -11, -1, 1]]),
    ];
    for (side, s, printed) in [("X", &r.x, &mx), ("Z", z, &mz)] {
        for (label, want) in printed {
            let got = s.matrices.iter().find(|m| m.label == *label).map(|m| &m.matrix);
            check!(got == Some(want), "M^{side} at {label}: {got:?}");
        }
    }
    let s_printed = vec![vec![8, 4, 2, 5], vec![4, 0, 1, 2], vec![10, -25, 2, -1], vec![-21, 2, -5, -10]];
    let s = r.connection.clone().ok_or("no connection matrix")?;
    let neg: Vec<Vec<i64>> = s.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
    check!(s == s_printed || neg == s_printed, "S = {s:?}");
    println!(
        "    S = {}S_xz with N_z = {}, residual 1e{:.0}",
        if s == s_printed { "" } else { "-" },
        r.n_z.as_deref().unwrap_or("?"),
        r.connection_residual_log10.unwrap_or(0.0)
    );
    st.monodromy = Some(r);
    Ok(())
}

fn c9_bps(st: &mut State) -> Outcome {
    let t = Instant::now();
    let op = st.sigma_op.clone().unwrap_or_else(|| ThetaOperator::parse("x", SIGMA_PF).unwrap());
    // the far degree comes from the integrality scan when it has run
    let deg_z = st.monodromy.as_ref().and_then(|r| r.z.as_ref()).map_or(21, |z| z.normalization.deg);
    let ints = |v: &[&str]| v.iter().map(|s| s.parse::<BigInt>().unwrap()).collect::<Vec<_>>();
    let (ys, nx) = bps::bps_from_operator(&op, 33, 11).map_err(|e| e.to_string())?;
    check!(ys.constant() == rat(33), "K(0) = {}", ys.constant());
    let want_x = ints(&[
        "252", "1854", "27156", "567063", "14514039", "424256409", "13599543618", "466563312360", "16861067232735",
        "634912711612848", "24717672325914858",
    ]);
    check!(nx == want_x, "X: {nx:?}");
    let zop = ode::invert_and_conjugate(&op, &rat(-1), "z").unwrap();
    let (ys, nz) = bps::bps_from_operator(&zop, deg_z, 10).map_err(|e| e.to_string())?;
    check!(ys.constant() == rat(21), "K_Z(0) = {}", ys.constant());
    let want_z = ints(&[
        "387", "4671", "124323", "4782996", "226411803", "12249769449", "727224033330", "46217599569117",
        "3094575464496057", "215917815744645750",
    ]);
    check!(nz == want_z, "Z: {nz:?}");
    within(t, Duration::from_secs(300), "BPS")
}

fn c11_properties(_: &mut State) -> Outcome {
    // Ehrhart counts against enumeration: every relation on ≤ 5 points, every 61st on 6
    for n in 1..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (j, i))).collect();
        let step = if n == 6 { 61 } else { 1 };
        for mask in (0u64..1 << pairs.len()).step_by(step) {
            let rel: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &r)| r).collect();
            let p = Poset::from_relation((0..n).map(|i| i.to_string()).collect(), &rel).unwrap();
            for k in 0..=4 {
                check!(hibi::lattice_points(&p, k).unwrap() as u64 == monotone_maps(&p, k), "l({k}Δ) on {rel:?}");
                check!(hibi::interior_points(&p, k).unwrap() as u64 == strict_maps(&p, k), "l*({k}Δ) on {rel:?}");
            }
        }
    }
    // degree triple: chains = Chevalley = n!·(Ehrhart leading coefficient)
    for (name, kind, node) in [
        ("chain-4", DynkinType::A(4), 1),
        ("rect-2-3", DynkinType::A(4), 2),
        ("quadric-6", DynkinType::D(4), 1),
        ("og510", DynkinType::D(5), 5),
        ("op2", DynkinType::E6, 1),
    ] {
        let p = catalog::lookup(name).unwrap();
        let chains = DistributiveLattice::new(&p).unwrap().count_maximal_chains().unwrap();
        let wq = WQLattice::generate(&RootSystem::new(kind), node).unwrap();
        let lead = hibi::ehrhart_polynomial(&p).unwrap().pop().unwrap() * BigRational::from_integer(factorial(p.len() as u64));
        check!(wq.chevalley_degree(wq.longest()) == chains, "Chevalley degree on {name}");
        check!(lead == BigRational::from_integer(chains.into()), "Ehrhart leading term on {name}");
    }
    // distributivity on every triple of J(P_Σ)
    let l = DistributiveLattice::new(&catalog::lookup("sigma").unwrap()).unwrap();
    for a in 0..l.len() {
        for b in 0..l.len() {
            for c in 0..l.len() {
                check!(l.meet(a, l.join(b, c)) == l.join(l.meet(a, b), l.meet(a, c)), "distributivity at {a},{b},{c}");
            }
        }
    }
    // gauge invariance of the BPS pipeline
    let op = ThetaOperator::parse("x", SIGMA_PF).unwrap();
    let fb = ode::frobenius_basis(&op, 6).unwrap();
    let base = bps::yukawa(&op, 33, &bps::mirror_map(&fb, 6).unwrap(), 6).unwrap();
    for (n, d) in [(-7, 3), (1, 121), (5, 1), (-1, 1)] {
        let c = BigRational::new(BigInt::from(n), BigInt::from(d));
        let ys = bps::yukawa(&op, 33, &bps::mirror_map(&bps::rescale(&fb, &c), 6).unwrap(), 6).unwrap();
        check!(ys.k == base.k, "Yukawa changes under rescaling by {c}");
    }
    Ok(())
}

fn main() {
    let criteria: [(u32, &str, fn(&mut State) -> Outcome); 10] = [
        (1, "combinatorial core of P_Σ and Birkhoff round trip", c1_combinatorics),
        (2, "Schubert analysis of Σ", c2_schubert),
        (3, "classification of smooth CICY 3-folds", c3_classification),
        (4, "invariants of Σ(1^9)", c4_invariants),
        (5, "period engine", c5_period),
        (6, "Picard-Fuchs recovery and Riemann scheme", c6_picard_fuchs),
        (7, "quantum and Picard-Fuchs operators of the appendix", c7_appendix),
        (8, "monodromy at 120 digits", c8_monodromy),
        (9, "genus-0 BPS numbers of X and Z", c9_bps),
        (11, "property suites", c11_properties),
    ];
    let mut st = State::default();
    let mut failed = 0;
    for (n, what, f) in criteria {
        if n == 11 {
            println!("criterion 10  SKIP  genus >= 1 BPS columns (out of scope)");
        }
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(|| f(&mut st))).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(()) => println!("criterion {n:>2}  PASS  {what} ({secs:.2}s)"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2}  FAIL  {what} ({secs:.2}s): {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
