use num_bigint::BigInt;
use num_rational::BigRational;

use cicy_core::linalg;
use cicy_core::monodromy::{self, MonodromyError, ScanRange};
use cicy_core::ode::ThetaOperator;
use cicy_core::series::{int, rat};

const SIGMA_PF: &str = "121θ^4 - 77x(130θ^4+266θ^3+210θ^2+77θ+11) - x^2(32126θ^4+89990θ^3+103725θ^2+55253θ+11198) - x^3(28723θ^4+74184θ^3+63474θ^2+20625θ+1716) - 7x^4(1135θ^4+2336θ^3+1881θ^2+713θ+110) - 49x^5(θ+1)^4";

fn q(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter().map(|r| r.iter().map(|&x| int(BigInt::from(x))).collect()).collect()
}

fn rank_of_m_minus_one(m: &[Vec<i64>]) -> usize {
    let a: Vec<Vec<BigInt>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, &x)| BigInt::from(x - i64::from(i == j))).collect())
        .collect();
    4 - linalg::nullspace(&a).len()
}

#[test]
fn sigma_monodromy_at_forty_digits() {
    let op = ThetaOperator::parse("x", SIGMA_PF).unwrap();
    let c = rat(-1);
    let cont = monodromy::continue_solutions(&op, 40, Some(&c)).unwrap();
    let labels: Vec<&str> = cont.plan.loops.iter().map(|l| l.label.as_str()).collect();
    assert_eq!(labels, ["ζ1", "-11/7", "ζ2", "0", "ζ3", "∞"]);

    let r = monodromy::report_from(&cont, (33, 78, -102), None, &ScanRange::default()).unwrap();
    assert_eq!(r.x.normalization.a, "-1/2");
    assert_eq!(r.z_scan, vec![(21, 66, -102)]);
    let z = r.z.as_ref().unwrap();
    assert_eq!(z.normalization.a, "-1/2");
    for side in [&r.x, z] {
        assert!(side.product_is_identity);
        assert!(side.mum_unipotent);
        assert!(side.conifold_normal);
        assert!(side.symplectic_form.is_some());
        let m = |l: &str| &side.matrices.iter().find(|m| m.label == l).unwrap().matrix;
        // no monodromy around the apparent singularity
        assert_eq!(rank_of_m_minus_one(m("-11/7")), 0);
    }
    // conifolds are transvections
    for l in ["ζ1", "ζ2", "ζ3"] {
        let mx = &r.x.matrices.iter().find(|m| m.label == l).unwrap().matrix;
        assert_eq!(rank_of_m_minus_one(mx), 1, "{l}");
    }
    let s = r.connection.as_ref().unwrap();
    let d = linalg::det(&q(s));
    assert!(d == rat(1) || d == rat(-1));
    assert_eq!(r.n_z.as_deref(), Some("1"));

    // negative controls
    let bad = monodromy::report_from(&cont, (22, 78, -102), None, &ScanRange::default());
    assert!(matches!(bad, Err(MonodromyError::NoIntegralBasis { .. })));
    // c2.H = 42 is integral too but misses the conifold normal form
    let shifted = monodromy::report_from(&cont, (33, 78, -102), Some((21, 42, -102)), &ScanRange::default()).unwrap();
    assert!(!shifted.z.unwrap().conifold_normal);
}

#[test]
fn mum_matrix_is_unipotent_with_deg_entry() {
    let a = BigRational::new((-1).into(), 2.into());
    let m = monodromy::mum_matrix(33, 78, &a).unwrap();
    assert_eq!(m[1][0], rat(1));
    assert_eq!(m[2][1], rat(33));
}
