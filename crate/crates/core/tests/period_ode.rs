mod common;

use num_bigint::BigInt;
use num_rational::BigRational;

use cicy_core::ode::{self, ThetaOperator};
use cicy_core::series::rat;
use cicy_core::{catalog, period, RationalPowerSeries};
use common::*;

const SIGMA_PF: &str = "121θ^4 - 77x(130θ^4+266θ^3+210θ^2+77θ+11) - x^2(32126θ^4+89990θ^3+103725θ^2+55253θ+11198) - x^3(28723θ^4+74184θ^3+63474θ^2+20625θ+1716) - 7x^4(1135θ^4+2336θ^3+1881θ^2+713θ+110) - 49x^5(θ+1)^4";

fn quintic_op() -> ThetaOperator {
    ThetaOperator::parse("x", "θ^4 - 5x(5θ+1)(5θ+2)(5θ+3)(5θ+4)").unwrap()
}

#[test]
fn quintic_coefficients() {
    let p = catalog::lookup("chain-4").unwrap();
    let flow = period::period_flow(&p, &[5], 12).unwrap();
    let bin = period::period_binomial(&p, &[5], 12).unwrap();
    for m in 0..12u64 {
        let want = factorial(5 * m) / factorial(m).pow(5);
        assert_eq!(flow.coeff(m as usize), BigRational::from_integer(want.clone()), "m={m}");
        assert_eq!(bin.coeff(m as usize), BigRational::from_integer(want));
    }
}

#[test]
fn flow_and_binomial_agree() {
    let cases: [(&str, Vec<usize>); 4] = [
        ("sigma", vec![1; 9]),
        ("rect-2-3", vec![1; 5]),
        ("rect-2-4", vec![1, 1, 1, 1, 2]),
        ("chain-4", vec![5]),
    ];
    for (name, d) in cases {
        let p = catalog::lookup(name).unwrap();
        let f = period::period_flow(&p, &d, 5).unwrap();
        let b = period::period_binomial(&p, &d, 5).unwrap();
        assert_eq!(f, b, "{name}");
    }
}

#[test]
fn first_coefficient_counts_maximal_chains_of_bounded_poset() {
    for name in ["sigma", "rect-2-3", "og510", "chain-4"] {
        let p = catalog::lookup(name).unwrap();
        assert_eq!(period::flow_count(&p, 1).unwrap(), BigInt::from(bounded_paths(&p)), "{name}");
    }
    let sigma = catalog::lookup("sigma").unwrap();
    assert_eq!(period::period_flow(&sigma, &[1; 9], 2).unwrap().coeff(1), rat(7));
}

/// Σ_{s,t,u,v} C(m,s)² C(m,v)² C(m,t) C(s,t) C(t,u) C(v,u), evaluated term by term.
fn displayed_sum(m: u64) -> u128 {
    let mut tot = 0;
    for s in 0..=m {
        for t in 0..=m {
            for u in 0..=m {
                for v in 0..=m {
                    tot += binomial(m, s).pow(2)
                        * binomial(m, v).pow(2)
                        * binomial(m, t)
                        * binomial(s, t)
                        * binomial(t, u)
                        * binomial(v, u);
                }
            }
        }
    }
    tot
}

#[test]
fn sigma_period_matches_displayed_sum() {
    let p = catalog::lookup("sigma").unwrap();
    let s = period::period_flow(&p, &[1; 9], 10).unwrap();
    for m in 0..10 {
        assert_eq!(s.coeff(m), BigRational::from_integer(displayed_sum(m as u64).into()), "m={m}");
    }
}

#[test]
fn sigma_operator_annihilates_period() {
    let op = ThetaOperator::parse("x", SIGMA_PF).unwrap();
    let s = period::period_flow(&catalog::lookup("sigma").unwrap(), &[1; 9], 50).unwrap();
    let r = ode::apply(&op, &s).unwrap();
    assert!(r.coeffs.iter().take(45).all(|c| *c == rat(0)));
    let fitted = ode::fit_operator(&s, 4, 6).unwrap();
    assert!(fitted.same_up_to_sign(&op));
}

#[test]
fn quintic_fit_and_scheme() {
    let p = catalog::lookup("chain-4").unwrap();
    let s = period::period_flow(&p, &[5], 30).unwrap();
    let op = ode::fit_operator(&s, 4, 3).unwrap();
    assert!(op.same_up_to_sign(&quintic_op()));
    assert_eq!(ode::fit_operator_exact(&s, 4, 1).unwrap(), op);
    let sc = ode::riemann_scheme(&op).unwrap();
    assert_eq!(sc.point("0").unwrap().exponents, ["0", "0", "0", "0"]);
    assert_eq!(sc.infinity, ["1/5", "2/5", "3/5", "4/5"]);
    assert!(sc.fuchs_ok());
}

#[test]
fn sigma_scheme() {
    let op = ThetaOperator::parse("x", SIGMA_PF).unwrap();
    let sc = ode::riemann_scheme(&op).unwrap();
    assert_eq!(sc.discriminant_display, "x^3 + 159x^2 + 84x - 1");
    let apparent = sc.point("-11/7").unwrap();
    assert_eq!(apparent.exponents, ["0", "1", "3", "4"]);
    assert!(apparent.apparent_candidate);
    assert_eq!(sc.point("root of x^3 + 159x^2 + 84x - 1").unwrap().exponents, ["0", "1", "1", "2"]);
    assert_eq!(sc.infinity, ["1", "1", "1", "1"]);
}

#[test]
fn frobenius_basis_of_quintic() {
    let fb = ode::frobenius_basis(&quintic_op(), 6).unwrap();
    let p = period::period_flow(&catalog::lookup("chain-4").unwrap(), &[5], 6).unwrap();
    assert_eq!(fb.omega0(), &p);
    assert_eq!(fb.reg(1).coeff(0), rat(0));
    assert_eq!(fb.reg(1).coeff(1), rat(770));
}

#[test]
fn inversion() {
    let op = ThetaOperator::parse("x", SIGMA_PF).unwrap();
    let c = rat(-1);
    let z = ode::invert_and_conjugate(&op, &c, "z").unwrap();
    assert!(ode::is_mum(&z));
    assert_eq!(ode::exponents_at_zero(&z).unwrap(), vec![rat(0); 4]);
    let back = ode::invert_and_conjugate(&z, &c, "x").unwrap();
    assert!(back.same_up_to_sign(&op));
    // the far period is integral as well
    let fb = ode::frobenius_basis(&z, 6).unwrap();
    assert!(fb.omega0().integers().is_some());
}

#[test]
fn operator_json_round_trip() {
    let op = ThetaOperator::parse("x", SIGMA_PF).unwrap();
    let j = ode::OperatorJson::from(&op);
    let back: ode::OperatorJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
    assert_eq!(ThetaOperator::try_from(&back).unwrap(), op);
    let s = RationalPowerSeries::new("x", vec![rat(1), BigRational::new(3.into(), 7.into())]);
    let sj = cicy_core::series::SeriesJson::from(&s);
    assert_eq!(RationalPowerSeries::try_from(&sj).unwrap(), s);
}
