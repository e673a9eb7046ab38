//! Analytic continuation of Picard–Fuchs solutions by Taylor recentering in
//! fixed-point complex arithmetic, monodromy in the Frobenius and integral
//! bases, the connection between two MUM points and the integrality search.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, QMat};
use crate::ode::{self, OdeError, ThetaOperator};
use crate::poly;
use crate::precision::{CMat, Ctx, Cx};
use crate::series::{int, rat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonodromyError {
    #[error("singular point {0:?} is not on the real line")]
    NonReal((f64, f64)),
    #[error("step underflow near {0:?}")]
    StepUnderflow((f64, f64)),
    #[error("singular matrix at working precision ({0})")]
    Singular(&'static str),
    #[error("no integral symplectic basis found for deg={deg} c2H={c2h} chi={chi}")]
    NoIntegralBasis { deg: i64, c2h: i64, chi: i64 },
    #[error("precision exhausted: residual 1e{0:.1}")]
    Precision(f64),
    #[error("continuation scale must be a nonzero rational")]
    BadScale,
    #[error(transparent)]
    Ode(#[from] OdeError),
}

pub type Result<T> = std::result::Result<T, MonodromyError>;

/// A regular singular operator in ∂-form, ready for Taylor stepping.
pub struct Solver {
    pub ctx: Ctx,
    order: usize,
    /// coefficients of a_k(x), k = 0..=order, lowest degree first
    coeffs: Vec<Vec<Cx>>,
    /// finite singular points (approximate)
    pub singular: Vec<(f64, f64)>,
    /// largest step as a fraction of the distance to the nearest singularity
    pub step_fraction: f64,
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

impl Solver {
    pub fn new(ctx: Ctx, op: &ThetaOperator) -> Solver {
        let a = ode::d_form(op);
        let coeffs = a.iter().map(|p| p.iter().map(|c| ctx.from_rational(c)).collect()).collect();
        let mut singular = vec![(0.0, 0.0)];
        for (f, _) in poly::squarefree(&op.leading_polynomial()) {
            for r in poly::approx_roots(&f) {
                if singular.iter().all(|&s| dist(s, r) > 1e-9) {
                    singular.push(r);
                }
            }
        }
        Solver { ctx, order: op.order(), coeffs, singular, step_fraction: 0.5 }
    }

    fn nearest(&self, x: (f64, f64)) -> f64 {
        self.singular.iter().map(|&s| dist(s, x)).fold(f64::INFINITY, f64::min)
    }

    /// Jets (y, y′, …, y^(r−1)) at x + h from jets at x, for every row of `jets`.
    fn step(&self, x: &Cx, h: &Cx, jets: &[Vec<Cx>], terms: usize) -> Result<Vec<Vec<Cx>>> {
        // jets are rescaled by h^i inside, so short steps need extra bits
        let hl = self.ctx.abs_f64(h).log2();
        let extra = if hl < 0.0 { (-hl * self.order as f64).ceil() as u64 + 8 } else { 0 };
        if extra == 0 {
            return self.step_at(&self.ctx, &self.coeffs, x, h, jets, terms);
        }
        let wide = Ctx { bits: self.ctx.bits + extra };
        let up = |v: &Cx| Cx { re: &v.re << extra, im: &v.im << extra };
        let coeffs: Vec<Vec<Cx>> = self.coeffs.iter().map(|p| p.iter().map(up).collect()).collect();
        let jets: Vec<Vec<Cx>> = jets.iter().map(|j| j.iter().map(up).collect()).collect();
        let out = self.step_at(&wide, &coeffs, &up(x), &up(h), &jets, terms)?;
        Ok(out.iter().map(|j| j.iter().map(|v| Cx { re: &v.re >> extra, im: &v.im >> extra }).collect()).collect())
    }

    fn step_at(&self, c: &Ctx, coeffs: &[Vec<Cx>], x: &Cx, h: &Cx, jets: &[Vec<Cx>], terms: usize) -> Result<Vec<Vec<Cx>>> {
        let r = self.order;
        // a_k(x + t) = Σ_j a_{k,j} t^j
        let shifted: Vec<Vec<Cx>> = coeffs
            .iter()
            .map(|p| {
                let xp: Vec<Cx> = (0..p.len()).map(|e| c.pow(x, e as u32)).collect();
                (0..p.len())
                    .map(|j| {
                        let mut acc = Cx::zero();
                        for i in j..p.len() {
                            if !p[i].is_zero() {
                                acc.add_assign(&c.mul(&p[i], &xp[i - j]).mul_int(&binom(i, j)));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        if h.is_zero() {
            return Err(MonodromyError::Singular("step"));
        }
        let lead = shifted[r].first().cloned().unwrap_or_else(Cx::zero);
        if lead.is_zero() {
            return Err(MonodromyError::StepUnderflow(c.to_c64(x)));
        }
        // b_{k,j} = a_{k,j} h^{j + r − k} / a_{r,0}, so that b_{r,0} = 1
        let width = shifted.iter().map(|p| p.len()).max().unwrap_or(1);
        let hp: Vec<Cx> = (0..=width + r).map(|j| c.pow(h, j as u32)).collect();
        let b: Vec<Vec<Cx>> = shifted
            .iter()
            .enumerate()
            .map(|(k, p)| p.iter().enumerate().map(|(j, a)| c.div(&c.mul(a, &hp[j + r - k]), &lead).unwrap_or_else(Cx::zero)).collect())
            .collect();
        let ff = |n: usize, k: usize| -> BigInt { (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i)) };
        let mut out = Vec::with_capacity(jets.len());
        for jet in jets {
            let mut d: Vec<Cx> = Vec::with_capacity(terms);
            for (i, y) in jet.iter().enumerate() {
                let fact: BigInt = (1..=i).fold(BigInt::one(), |a, k| a * BigInt::from(k));
                d.push(c.mul(y, &hp[i]).div_int(&fact));
            }
            for m in 0..terms.saturating_sub(r) {
                let mut acc = Cx::zero();
                for (k, bk) in b.iter().enumerate() {
                    for (j, bkj) in bk.iter().enumerate() {
                        if (k == r && j == 0) || j > m {
                            continue;
                        }
                        let idx = m - j + k;
                        let t = c.mul(bkj, &d[idx]).mul_int(&ff(idx, k));
                        acc.add_assign(&t);
                    }
                }
                d.push((-&acc).div_int(&ff(m + r, r)));
            }
            let mut nj = Vec::with_capacity(r);
            for i in 0..r {
                let mut s = Cx::zero();
                for (n, dn) in d.iter().enumerate().skip(i) {
                    s.add_assign(&dn.mul_int(&ff(n, i)));
                }
                nj.push(c.div(&s, &hp[i]).unwrap_or_else(Cx::zero));
            }
            out.push(nj);
        }
        Ok(out)
    }

    /// Continue jets along a polygon; `path[0]` is the current point.
    pub fn transport(&self, path: &[Cx], jets: &[Vec<Cx>]) -> Result<Vec<Vec<Cx>>> {
        let c = &self.ctx;
        let mut jets = jets.to_vec();
        let Some(first) = path.first() else { return Ok(jets) };
        let mut x = first.clone();
        for target in &path[1..] {
            loop {
                let xf = c.to_c64(&x);
                let rad = self.nearest(xf);
                let diff = target - &x;
                let len = c.abs_f64(&diff);
                if len == 0.0 {
                    break;
                }
                let max = self.step_fraction * rad;
                if max < 1e-30 {
                    return Err(MonodromyError::StepUnderflow(xf));
                }
                // never leave a sliver: split the last two steps evenly
                let h = if len <= max {
                    diff
                } else {
                    let s = c.from_f64((max / len).min(0.5), 0.0);
                    c.mul(&diff, &s)
                };
                let ratio = rad / c.abs_f64(&h);
                let terms = (c.bits as f64 / ratio.log2()).ceil() as usize + 24;
                jets = self.step(&x, &h, &jets, terms)?;
                x = &x + &h;
                if len <= max {
                    x = target.clone();
                    break;
                }
            }
        }
        Ok(jets)
    }

    /// Transition matrix of a closed or open path: rows are the transported unit jets.
    pub fn transition(&self, path: &[Cx]) -> Result<CMat> {
        self.transport(path, &self.ctx.identity(self.order))
    }
}

/// A labelled loop based at the base point.
#[derive(Clone, Debug, Serialize)]
pub struct LoopSpec {
    pub label: String,
    /// location on the real line; `None` for ∞
    pub point: Option<f64>,
    pub radius: f64,
}

/// Base point, loops and working precision.
#[derive(Clone, Debug, Serialize)]
pub struct ContinuationPlan {
    pub digits: u32,
    /// base point 2^(−base_exp) on the positive real axis
    pub base_exp: u32,
    pub loops: Vec<LoopSpec>,
    /// radius of the loop around ∞
    pub infinity_radius: f64,
    pub step_fraction: f64,
}

fn real_singular(solver: &Solver) -> Result<Vec<f64>> {
    let mut v = Vec::new();
    for &s in &solver.singular {
        if s.1.abs() > 1e-9 {
            return Err(MonodromyError::NonReal(s));
        }
        v.push(s.0);
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(v)
}

/// Smallest e with 2^(−e) at most a quarter of the distance from 0 to the
/// nearest other singular point.
pub fn base_exponent(op: &ThetaOperator) -> u32 {
    let solver = Solver::new(Ctx::with_digits(16), op);
    let rho = solver.singular.iter().map(|&s| dist(s, (0.0, 0.0))).filter(|&d| d > 1e-12).fold(f64::INFINITY, f64::min);
    if !rho.is_finite() {
        return 1;
    }
    ((4.0 / rho).log2().ceil().max(1.0)) as u32
}

/// Loops around every finite singular point (left to right) and ∞. Points
/// of irrational factors of the leading polynomial are labelled ζ1, ζ2, …
pub fn plan_for(op: &ThetaOperator, digits: u32) -> Result<ContinuationPlan> {
    let base_exp = base_exponent(op);
    let solver = Solver::new(Ctx::with_digits(16), op);
    let pts = real_singular(&solver)?;
    let (rat_roots, _) = poly::rational_roots(&op.leading_polynomial());
    let mut loops = Vec::new();
    let mut zeta = 0;
    for (i, &p) in pts.iter().enumerate() {
        let gap = pts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &q)| (q - p).abs())
            .fold(f64::INFINITY, f64::min);
        let label = if p == 0.0 {
            "0".to_string()
        } else if let Some((r, _)) = rat_roots.iter().find(|(r, _)| (r.to_f64().unwrap_or(f64::NAN) - p).abs() < 1e-9) {
            r.to_string()
        } else {
            zeta += 1;
            format!("ζ{zeta}")
        };
        let radius = if p == 0.0 { 2f64.powi(-(base_exp as i32)) } else { 0.5 * gap };
        loops.push(LoopSpec { label, point: Some(p), radius });
    }
    let far = pts.iter().fold(0.0f64, |m, &p| m.max(p.abs()));
    loops.push(LoopSpec { label: "∞".into(), point: None, radius: 0.0 });
    Ok(ContinuationPlan { digits, base_exp, loops, infinity_radius: 4.0 * far.max(1.0), step_fraction: 0.5 })
}

const CIRCLE: usize = 16;

fn base_f(plan: &ContinuationPlan) -> f64 {
    2f64.powi(-(plan.base_exp as i32))
}

/// From the base point along a quarter circle to the imaginary axis, then up to height y.
fn lift(base: f64, y: f64) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = (0..=4)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / 8.0;
            if k == 0 {
                (base, 0.0)
            } else if k == 4 {
                (0.0, base)
            } else {
                (base * t.cos(), base * t.sin())
            }
        })
        .collect();
    if (y - base).abs() > 0.0 {
        v.push((0.0, y));
    }
    v
}

fn close(mut approach: Vec<(f64, f64)>, circle: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let back: Vec<(f64, f64)> = approach.iter().rev().skip(1).copied().collect();
    approach.extend(circle);
    approach.extend(back);
    approach
}

/// Waypoints of a loop, counterclockwise around finite points and clockwise
/// (i.e. positively around ∞ in 1/x) for ∞.
pub fn loop_path(plan: &ContinuationPlan, spec: &LoopSpec) -> Vec<(f64, f64)> {
    let base = base_f(plan);
    let tau = 2.0 * std::f64::consts::PI;
    match spec.point {
        Some(p) if p == 0.0 => (0..=CIRCLE)
            .map(|k| {
                if k == 0 || k == CIRCLE {
                    (base, 0.0)
                } else {
                    let t = tau * k as f64 / CIRCLE as f64;
                    (base * t.cos(), base * t.sin())
                }
            })
            .collect(),
        Some(p) => {
            let r = spec.radius;
            let mut approach = lift(base, r);
            approach.push((p, r));
            let circle = (1..=CIRCLE)
                .map(|k| {
                    if k == CIRCLE {
                        (p, r)
                    } else {
                        let t = tau / 4.0 + tau * k as f64 / CIRCLE as f64;
                        (p + r * t.cos(), r * t.sin())
                    }
                })
                .collect();
            close(approach, circle)
        }
        None => {
            let r = plan.infinity_radius;
            let approach = lift(base, r);
            let circle = (1..=CIRCLE)
                .map(|k| {
                    if k == CIRCLE {
                        (0.0, r)
                    } else {
                        let t = tau / 4.0 - tau * k as f64 / CIRCLE as f64;
                        (r * t.cos(), r * t.sin())
                    }
                })
                .collect();
            close(approach, circle)
        }
    }
}

fn to_cx(ctx: &Ctx, v: &[(f64, f64)]) -> Vec<Cx> {
    v.iter().map(|&(a, b)| ctx.from_f64(a, b)).collect()
}

/// Signed Stirling numbers of the first kind: x(x−1)…(x−m+1) = Σ s(m, i) x^i.
fn stirling1(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for m in 1..=n {
        for i in 1..=m {
            s[m][i] = &s[m - 1][i - 1] - BigInt::from(m - 1) * &s[m - 1][i];
        }
    }
    s
}

fn binom(n: usize, k: usize) -> BigInt {
    crate::invariants::binomial(n, k)
}

/// (2πi)^(−k) for k = 0..r.
pub fn n_factors(ctx: &Ctx, r: usize) -> Vec<Cx> {
    let two_pi_i = Cx { re: BigInt::zero(), im: ctx.pi() * 2 };
    let inv = ctx.recip(&two_pi_i).expect("2πi ≠ 0");
    (0..r).map(|k| ctx.pow(&inv, k as u32)).collect()
}

/// Jets at 2^(−e) of the Frobenius-normalized solutions n_k ω_k, one row each.
pub fn frobenius_jets(ctx: &Ctx, op: &ThetaOperator, e: u32) -> Result<CMat> {
    let r = op.order();
    let solver = Solver::new(Ctx::with_digits(16), op);
    let x = 2f64.powi(-(e as i32));
    let rho = solver.singular.iter().filter(|s| dist(**s, (0.0, 0.0)) > 1e-12).map(|&s| dist(s, (0.0, 0.0))).fold(f64::INFINITY, f64::min);
    let terms = (ctx.bits as f64 / (rho / x).log2()).ceil() as usize + 24;
    let fb = ode::frobenius_basis(op, terms)?;
    let xb = BigRational::new(BigInt::one(), BigInt::one() << e);
    // θ^s f_j at x_b
    let mut tf = vec![vec![Cx::zero(); r]; r];
    for (j, row) in tf.iter_mut().enumerate() {
        let f = &fb.series[j];
        for (s, slot) in row.iter_mut().enumerate() {
            let mut acc = BigRational::zero();
            let mut xp = BigRational::one();
            for (n, cn) in f.coeffs.iter().enumerate() {
                if !cn.is_zero() {
                    acc += cn * &xp * rat((n as i64).pow(s as u32));
                }
                xp *= &xb;
            }
            *slot = ctx.from_rational(&acc);
        }
    }
    let l = Cx { re: -(ctx.ln2() * BigInt::from(e)), im: BigInt::zero() };
    let lp: Vec<Cx> = (0..r).map(|k| ctx.pow(&l, k as u32)).collect();
    let ff = |n: usize, k: usize| -> BigInt { (0..k).fold(BigInt::one(), |a, i| a * BigInt::from(n - i)) };
    let st = stirling1(r);
    let nk = n_factors(ctx, r);
    let xinv = Cx { re: BigInt::one() << (ctx.bits + e as u64), im: BigInt::zero() };
    let mut w = Vec::with_capacity(r);
    for k in 0..r {
        // θ^i ω_k
        let theta: Vec<Cx> = (0..r)
            .map(|i| {
                let mut acc = Cx::zero();
                for j in 0..=k {
                    for q in 0..=i.min(k - j) {
                        let coef = binom(k, j) * binom(i, q) * ff(k - j, q);
                        let t = ctx.mul(&lp[k - j - q], &tf[j][i - q]).mul_int(&coef);
                        acc.add_assign(&t);
                    }
                }
                acc
            })
            .collect();
        let jet: Vec<Cx> = (0..r)
            .map(|m| {
                let mut acc = Cx::zero();
                for (i, th) in theta.iter().enumerate().take(m + 1) {
                    acc.add_assign(&th.mul_int(&st[m][i]));
                }
                ctx.mul(&ctx.mul(&acc, &ctx.pow(&xinv, m as u32)), &nk[k])
            })
            .collect();
        w.push(jet);
    }
    Ok(w)
}

/// x-jets at x₀ = c/z_b of h(x) = z·g(z), z = c/x, from z-jets of g at z_b.
pub fn pull_back_jets(ctx: &Ctx, zjets: &CMat, c: &BigRational, zb: &BigRational) -> CMat {
    let r = zjets.first().map_or(0, |j| j.len());
    // u(t) = z(x₀ + t) − z_b = z_b Σ_{n≥1} (−t/x₀)^n
    let x0 = c / zb;
    let ratio = -x0.recip();
    let mut u = vec![BigRational::zero(); r];
    let mut p = BigRational::one();
    for slot in u.iter_mut().skip(1) {
        p *= &ratio;
        *slot = zb * &p;
    }
    let mul_q = |a: &[BigRational], b: &[BigRational]| -> Vec<BigRational> {
        let mut o = vec![BigRational::zero(); r];
        for i in 0..r {
            for j in 0..r - i {
                o[i + j] += &a[i] * &b[j];
            }
        }
        o
    };
    // powers u^m as exact series
    let mut upow = vec![{
        let mut one = vec![BigRational::zero(); r];
        one[0] = BigRational::one();
        one
    }];
    for m in 1..r {
        let next = mul_q(&upow[m - 1], &u);
        upow.push(next);
    }
    let mut z = u.clone();
    z[0] = zb.clone();
    let fact = |n: usize| -> BigInt { (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k)) };
    zjets
        .iter()
        .map(|jet| {
            // G(t) = Σ_m g^(m)/m! u(t)^m
            let mut g = vec![Cx::zero(); r];
            for (m, gm) in jet.iter().enumerate() {
                let gm = gm.div_int(&fact(m));
                for (n, coef) in upow[m].iter().enumerate() {
                    if !coef.is_zero() {
                        g[n].add_assign(&ctx.scale_real(&gm, &ctx.real(coef)));
                    }
                }
            }
            (0..r)
                .map(|n| {
                    let mut acc = Cx::zero();
                    for i in 0..=n {
                        if !z[i].is_zero() {
                            acc.add_assign(&ctx.scale_real(&g[n - i], &ctx.real(&z[i])));
                        }
                    }
                    acc.mul_int(&fact(n))
                })
                .collect()
        })
        .collect()
}

/// The matrix of the expected integral symplectic basis in terms of (n_k ω_k):
/// [[1,0,0,0],[0,1,0,0],[β/24, a, −κ/2, 0],[γ, β/24, 0, κ/6]] with κ = −deg,
/// β = −c₂·H, γ = −n₃ζ(3)χ.
pub fn t_matrix(ctx: &Ctx, deg: i64, c2h: i64, chi: i64, a: &BigRational) -> CMat {
    let q = |n: i64, d: i64| ctx.from_rational(&BigRational::new(n.into(), d.into()));
    let kappa = -deg;
    let beta = -c2h;
    let n3 = &n_factors(ctx, 4)[3];
    let z3 = Cx { re: ctx.zeta3() * BigInt::from(-chi), im: BigInt::zero() };
    let gamma = ctx.mul(n3, &z3);
    let z = Cx::zero;
    vec![
        vec![ctx.one(), z(), z(), z()],
        vec![z(), ctx.one(), z(), z()],
        vec![q(beta, 24), ctx.from_rational(a), q(-kappa, 2), z()],
        vec![gamma, q(beta, 24), z(), q(kappa, 6)],
    ]
}

fn conjugate(ctx: &Ctx, t: &CMat, tinv: &CMat, f: &CMat) -> CMat {
    ctx.matmul(&ctx.matmul(t, f), tinv)
}

/// Monodromies in the Frobenius basis n_k ω_k for each loop, from transition
/// matrices: M = W Φ W⁻¹ with W the jets of the basis.
pub fn frobenius_monodromy(ctx: &Ctx, w: &CMat, transitions: &[CMat]) -> Result<Vec<CMat>> {
    let winv = ctx.inverse(w).ok_or(MonodromyError::Singular("Wronskian"))?;
    Ok(transitions.iter().map(|phi| ctx.matmul(&ctx.matmul(w, phi), &winv)).collect())
}

/// Transition matrices for all loops of a plan.
pub fn loop_transitions(solver: &Solver, plan: &ContinuationPlan) -> Result<Vec<CMat>> {
    plan.loops.iter().map(|l| solver.transition(&to_cx(&solver.ctx, &loop_path(plan, l)))).collect()
}

/// Integral monodromy candidates and the worst log10 distance from integers.
pub fn integral_monodromy(ctx: &Ctx, frob: &[CMat], t: &CMat) -> Result<(Vec<Vec<Vec<BigInt>>>, f64)> {
    let tinv = ctx.inverse(t).ok_or(MonodromyError::Singular("T"))?;
    let mut worst = f64::NEG_INFINITY;
    let mut out = Vec::new();
    for f in frob {
        let (m, w) = ctx.round_matrix(&conjugate(ctx, t, &tinv, f));
        worst = worst.max(w);
        out.push(m);
    }
    Ok((out, worst))
}

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticNormalization {
    pub deg: i64,
    pub c2h: i64,
    pub chi: i64,
    pub a: String,
    pub residual_log10: f64,
}

/// Candidates a ∈ deg/2 + ℤ with |a| ≤ bound, by |a| and negative first.
pub fn a_candidates(deg: i64, bound: i64) -> Vec<BigRational> {
    let half = BigRational::new(deg.into(), 2.into());
    let frac = &half - half.floor();
    let mut v: Vec<BigRational> = (-bound..=bound).map(|k| &frac + int(k.into())).collect();
    v.sort_by(|x, y| x.abs().cmp(&y.abs()).then(x.cmp(y)));
    v
}

/// First a for which every monodromy is integral to 10^(−digits/2).
pub fn integral_basis_search(
    ctx: &Ctx,
    frob: &[CMat],
    deg: i64,
    c2h: i64,
    chi: i64,
    tol_log10: f64,
) -> Result<SymplecticNormalization> {
    for a in a_candidates(deg, 3) {
        let t = t_matrix(ctx, deg, c2h, chi, &a);
        let (_, worst) = integral_monodromy(ctx, frob, &t)?;
        if worst < tol_log10 {
            return Ok(SymplecticNormalization { deg, c2h, chi, a: a.to_string(), residual_log10: worst });
        }
    }
    Err(MonodromyError::NoIntegralBasis { deg, c2h, chi })
}

type C64 = (f64, f64);

fn cm(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn c64_matmul(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold((0.0, 0.0), |s, k| {
                        let p = cm(a[i][k], b[k][j]);
                        (s.0 + p.0, s.1 + p.1)
                    })
                })
                .collect()
        })
        .collect()
}

/// Exact T without γ (γ only enters through the ζ(3) column).
fn t_rational(deg: i64, c2h: i64, a: &BigRational) -> QMat {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let z = BigRational::zero;
    vec![
        vec![rat(1), z(), z(), z()],
        vec![z(), rat(1), z(), z()],
        vec![q(-c2h, 24), a.clone(), q(deg, 2), z()],
        vec![z(), q(-c2h, 24), z(), q(-deg, 6)],
    ]
}

/// T U T⁻¹ for the maximally unipotent local monodromy U = (C(i, j)).
pub fn mum_matrix(deg: i64, c2h: i64, a: &BigRational) -> Option<QMat> {
    let t = t_rational(deg, c2h, a);
    let u: QMat = (0..4).map(|i| (0..4).map(|j| int(binom(i, j))).collect()).collect();
    let tinv = linalg::inverse(&t)?;
    Some(linalg::matmul(&linalg::matmul(&t, &u), &tinv))
}

/// Ranges of the invariant scan on the far side.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRange {
    pub deg: (i64, i64),
    pub c2h: (i64, i64),
    pub chi: (i64, i64),
}

impl Default for ScanRange {
    fn default() -> Self {
        ScanRange { deg: (1, 50), c2h: (-100, 400), chi: (-1000, 1000) }
    }
}

/// (deg, c₂·H, χ) for which all monodromies are integral and the conifold
/// loop `conifold` is the transvection Π₀ ↦ Π₀ + Π₃.
///
/// Integrality alone fixes c₂·H only modulo 24 (β ↦ β − 24 is an integral
/// symplectic base change), hence the conifold normal form.
pub fn invariant_scan(ctx: &Ctx, frob: &[CMat], conifold: usize, range: &ScanRange, tol_log10: f64) -> Vec<(i64, i64, i64)> {
    let f64s: Vec<Vec<Vec<C64>>> = frob.iter().map(|m| ctx.to_f64_matrix(m)).collect();
    let n3 = ctx.to_c64(&n_factors(ctx, 4)[3]);
    let zeta3 = ctx.to_f64(&ctx.zeta3());
    let mut out = Vec::new();
    for deg in range.deg.0..=range.deg.1 {
        let a = &a_candidates(deg, 0)[0];
        for c2h in range.c2h.0..=range.c2h.1 {
            let Some(mum) = mum_matrix(deg, c2h, a) else { continue };
            if !linalg::is_integral(&mum) {
                continue;
            }
            let af = a.to_f64().unwrap_or(f64::NAN);
            for chi in range.chi.0..=range.chi.1 {
                let g = cm(n3, (-zeta3 * chi as f64, 0.0));
                let b = -c2h as f64 / 24.0;
                let k = -deg as f64;
                let r = |x: f64| (x, 0.0);
                let t = vec![
                    vec![r(1.0), r(0.0), r(0.0), r(0.0)],
                    vec![r(0.0), r(1.0), r(0.0), r(0.0)],
                    vec![r(b), r(af), r(-k / 2.0), r(0.0)],
                    vec![g, r(b), r(0.0), r(k / 6.0)],
                ];
                // T⁻¹ for this lower triangular shape
                let d = k / 6.0;
                let e = -k / 2.0;
                let ti = vec![
                    vec![r(1.0), r(0.0), r(0.0), r(0.0)],
                    vec![r(0.0), r(1.0), r(0.0), r(0.0)],
                    vec![r(-b / e), r(-af / e), r(1.0 / e), r(0.0)],
                    vec![((-g.0) / d, (-g.1) / d), r(-b / d), r(0.0), r(1.0 / d)],
                ];
                let m = c64_matmul(&c64_matmul(&t, &f64s[conifold]), &ti);
                let ok = (0..4).all(|i| {
                    (0..4).all(|j| {
                        let want = if i == j || (i == 0 && j == 3) { 1.0 } else { 0.0 };
                        (m[i][j].0 - want).abs() < 1e-6 && m[i][j].1.abs() < 1e-6
                    })
                });
                if !ok {
                    continue;
                }
                let tt = t_matrix(ctx, deg, c2h, chi, a);
                if let Ok((_, worst)) = integral_monodromy(ctx, frob, &tt) {
                    if worst < tol_log10 {
                        out.push((deg, c2h, chi));
                    }
                }
            }
        }
    }
    out
}

pub fn to_i64(m: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()).collect()
}

fn to_q(m: &[Vec<BigInt>]) -> QMat {
    m.iter().map(|r| r.iter().map(|x| int(x.clone())).collect()).collect()
}

/// An integral antisymmetric form Ω with Mᵀ Ω M = Ω for every M, if the
/// fixed forms are one-dimensional and unimodular.
pub fn symplectic_form(ms: &[Vec<Vec<BigInt>>]) -> Option<Vec<Vec<BigInt>>> {
    let n = ms.first()?.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let basis = |p: usize| -> QMat {
        let mut o = vec![vec![BigRational::zero(); n]; n];
        let (i, j) = pairs[p];
        o[i][j] = rat(1);
        o[j][i] = rat(-1);
        o
    };
    // rows: entries of Mᵀ Ω M − Ω, linear in the coordinates of Ω
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for m in ms {
        let mq = to_q(m);
        let mt = linalg::transpose(&mq);
        let imgs: Vec<QMat> = (0..pairs.len())
            .map(|p| {
                let b = basis(p);
                let mut r = linalg::matmul(&linalg::matmul(&mt, &b), &mq);
                for i in 0..n {
                    for j in 0..n {
                        r[i][j] -= &b[i][j];
                    }
                }
                r
            })
            .collect();
        for i in 0..n {
            for j in 0..n {
                rows.push(imgs.iter().map(|im| im[i][j].to_integer()).collect());
            }
        }
    }
    let ns = linalg::nullspace(&rows);
    if ns.len() != 1 {
        return None;
    }
    let v = &ns[0];
    let mut o = vec![vec![BigInt::zero(); n]; n];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        o[i][j] = v[p].clone();
        o[j][i] = -v[p].clone();
    }
    let det = linalg::det(&to_q(&o));
    det.is_one().then_some(o)
}

#[derive(Clone, Debug, Serialize)]
pub struct LoopMatrix {
    pub label: String,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SideReport {
    pub normalization: SymplecticNormalization,
    pub matrices: Vec<LoopMatrix>,
    pub product_is_identity: bool,
    pub mum_unipotent: bool,
    /// the conifold nearest to this side's MUM point has the form I + E₀₃
    pub conifold_normal: bool,
    pub symplectic_form: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyReport {
    pub digits: u32,
    pub plan: ContinuationPlan,
    pub x: SideReport,
    pub z: Option<SideReport>,
    pub connection: Option<Vec<Vec<i64>>>,
    /// rational factor N_z with S_xz integral and primitive
    pub n_z: Option<String>,
    pub connection_residual_log10: Option<f64>,
    pub z_scan: Vec<(i64, i64, i64)>,
}

/// Everything computed by continuation, before any normalization is chosen.
pub struct Continuation {
    pub ctx: Ctx,
    pub plan: ContinuationPlan,
    pub frob_x: Vec<CMat>,
    /// Frobenius data of the far MUM point, continued to the base point
    pub far: Option<FarSide>,
}

pub struct FarSide {
    pub op: ThetaOperator,
    pub scale: BigRational,
    pub frob: Vec<CMat>,
    /// jets of the far Frobenius basis z·n_k ω^Z_k at the base point
    pub jets: CMat,
    pub near_jets: CMat,
}

/// Continue the Frobenius basis of `op` at 0 around all loops; with `scale`,
/// also bring in the basis at ∞ in z = scale/x.
pub fn continue_solutions(op: &ThetaOperator, digits: u32, scale: Option<&BigRational>) -> Result<Continuation> {
    let ctx = Ctx::with_digits(digits);
    let plan = plan_for(op, digits)?;
    let mut solver = Solver::new(ctx, op);
    solver.step_fraction = plan.step_fraction;
    let transitions = loop_transitions(&solver, &plan)?;
    let wx = frobenius_jets(&ctx, op, plan.base_exp)?;
    let frob_x = frobenius_monodromy(&ctx, &wx, &transitions)?;
    let far = match scale {
        None => None,
        Some(c) => {
            if c.is_zero() {
                return Err(MonodromyError::BadScale);
            }
            let zop = ode::invert_and_conjugate(op, c, "z")?;
            let ze = base_exponent(&zop);
            let zb = BigRational::new(BigInt::one(), BigInt::one() << ze);
            let wz = frobenius_jets(&ctx, &zop, ze)?;
            let wzx = pull_back_jets(&ctx, &wz, c, &zb);
            let x0 = (c / &zb).to_f64().unwrap_or(f64::NAN);
            // from x₀ along |x| = |x₀| to the imaginary axis, then down to the base
            let r = x0.abs();
            let start = if x0 < 0.0 { std::f64::consts::PI } else { 0.0 };
            let end = std::f64::consts::FRAC_PI_2;
            let mut path: Vec<(f64, f64)> = (0..=4)
                .map(|k| {
                    if k == 0 {
                        (x0, 0.0)
                    } else if k == 4 {
                        (0.0, r)
                    } else {
                        let t = start + (end - start) * k as f64 / 4.0;
                        (r * t.cos(), r * t.sin())
                    }
                })
                .collect();
            path.extend(lift(base_f(&plan), r).into_iter().rev().skip(1));
            // transporting the jets themselves avoids the cancellation in wzx·Φ
            let jets = solver.transport(&to_cx(&ctx, &path), &wzx)?;
            let frob = frobenius_monodromy(&ctx, &jets, &transitions)?;
            Some(FarSide { op: zop, scale: c.clone(), frob, jets, near_jets: wx.clone() })
        }
    };
    Ok(Continuation { ctx, plan, frob_x, far })
}

fn side_report(
    ctx: &Ctx,
    plan: &ContinuationPlan,
    frob: &[CMat],
    norm: SymplecticNormalization,
    conifold: usize,
) -> Result<SideReport> {
    let a: BigRational = norm.a.parse().map_err(|_| MonodromyError::Singular("a"))?;
    let t = t_matrix(ctx, norm.deg, norm.c2h, norm.chi, &a);
    let (ms, _) = integral_monodromy(ctx, frob, &t)?;
    let finite: Vec<usize> = (0..ms.len()).collect();
    let mut prod = linalg::identity(4);
    for &i in &finite {
        prod = linalg::matmul(&prod, &to_q(&ms[i]));
    }
    // loops in left-to-right order, ∞ last; the apparent point contributes I
    let product_is_identity = prod == linalg::identity(4);
    let zero = plan.loops.iter().position(|l| l.label == "0");
    let mum_unipotent = zero.is_some_and(|z| {
        let mut n = to_q(&ms[z]);
        for (i, row) in n.iter_mut().enumerate() {
            row[i] -= rat(1);
        }
        let n2 = linalg::matmul(&n, &n);
        let n3 = linalg::matmul(&n2, &n);
        let n4 = linalg::matmul(&n3, &n);
        n4.iter().flatten().all(|x| x.is_zero()) && n3.iter().flatten().any(|x| !x.is_zero())
    });
    let mut normal = linalg::identity(4);
    normal[0][3] = rat(1);
    let conifold_normal = ms.get(conifold).is_some_and(|m| to_q(m) == normal);
    let form = symplectic_form(&ms).map(|o| to_i64(&o));
    Ok(SideReport {
        normalization: norm,
        matrices: plan.loops.iter().zip(&ms).map(|(l, m)| LoopMatrix { label: l.label.clone(), matrix: to_i64(m) }).collect(),
        product_is_identity,
        mum_unipotent,
        conifold_normal,
        symplectic_form: form,
    })
}

/// S with Π^X = S · zΠ^Z at the base point, and its worst distance from integers.
pub fn connection_matrix(ctx: &Ctx, cont: &Continuation, tx: &CMat, tz: &CMat) -> Result<(Vec<Vec<BigInt>>, f64)> {
    let far = cont.far.as_ref().ok_or(MonodromyError::BadScale)?;
    let px = ctx.matmul(tx, &far.near_jets);
    let pz = ctx.matmul(tz, &far.jets);
    let pzinv = ctx.inverse(&pz).ok_or(MonodromyError::Singular("far basis"))?;
    Ok(ctx.round_matrix(&ctx.matmul(&px, &pzinv)))
}

/// Full pipeline: continuation, integral basis on the near side with the
/// given invariants, and on the far side either given invariants or the scan.
pub fn monodromy_report(
    op: &ThetaOperator,
    digits: u32,
    near: (i64, i64, i64),
    scale: Option<&BigRational>,
    far_invariants: Option<(i64, i64, i64)>,
    range: &ScanRange,
) -> Result<MonodromyReport> {
    let cont = continue_solutions(op, digits, scale)?;
    report_from(&cont, near, far_invariants, range)
}

pub fn tolerance(digits: u32) -> f64 {
    -(digits as f64) / 2.0
}

pub fn report_from(
    cont: &Continuation,
    near: (i64, i64, i64),
    far_invariants: Option<(i64, i64, i64)>,
    range: &ScanRange,
) -> Result<MonodromyReport> {
    let ctx = &cont.ctx;
    let tol = tolerance(cont.plan.digits);
    let nx = integral_basis_search(ctx, &cont.frob_x, near.0, near.1, near.2, tol)?;
    if nx.residual_log10 > -20.0 {
        return Err(MonodromyError::Precision(nx.residual_log10));
    }
    let x = side_report(ctx, &cont.plan, &cont.frob_x, nx.clone(), near_conifold(&cont.plan))?;
    let mut z = None;
    let mut connection = None;
    let mut n_z = None;
    let mut conn_res = None;
    let mut scan = Vec::new();
    if let Some(far) = &cont.far {
        // the far MUM point is ∞; its nearest conifold is the extreme finite point
        let conifold = far_conifold(&cont.plan);
        let inv = match far_invariants {
            Some(v) => v,
            None => {
                scan = invariant_scan(ctx, &far.frob, conifold, range, tol);
                match scan.as_slice() {
                    [one] => *one,
                    _ => return Err(MonodromyError::NoIntegralBasis { deg: 0, c2h: 0, chi: 0 }),
                }
            }
        };
        let nz = integral_basis_search(ctx, &far.frob, inv.0, inv.1, inv.2, tol)?;
        let zr = side_report(ctx, &cont.plan, &far.frob, nz.clone(), conifold)?;
        let ax: BigRational = nx.a.parse().map_err(|_| MonodromyError::Singular("a"))?;
        let az: BigRational = nz.a.parse().map_err(|_| MonodromyError::Singular("a"))?;
        let tx = t_matrix(ctx, nx.deg, nx.c2h, nx.chi, &ax);
        let tz = t_matrix(ctx, nz.deg, nz.c2h, nz.chi, &az);
        let (s, res) = connection_matrix(ctx, cont, &tx, &tz)?;
        let g = s.iter().flatten().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        let s: Vec<Vec<BigInt>> = if g.is_zero() { s } else { s.iter().map(|r| r.iter().map(|x| x / &g).collect()).collect() };
        n_z = Some(g.to_string());
        connection = Some(to_i64(&s));
        conn_res = Some(res);
        z = Some(zr);
    }
    Ok(MonodromyReport {
        digits: cont.plan.digits,
        plan: cont.plan.clone(),
        x,
        z,
        connection,
        n_z,
        connection_residual_log10: conn_res,
        z_scan: scan,
    })
}

/// Index of the loop around the nonzero singular point nearest to x = 0.
pub fn near_conifold(plan: &ContinuationPlan) -> usize {
    plan.loops
        .iter()
        .enumerate()
        .filter(|(_, l)| l.point.is_some_and(|p| p != 0.0))
        .min_by(|a, b| a.1.point.unwrap().abs().partial_cmp(&b.1.point.unwrap().abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Index of the loop around the finite singular point nearest to x = ∞.
pub fn far_conifold(plan: &ContinuationPlan) -> usize {
    plan.loops
        .iter()
        .enumerate()
        .filter(|(_, l)| l.point.is_some_and(|p| p != 0.0))
        .max_by(|a, b| a.1.point.unwrap().abs().partial_cmp(&b.1.point.unwrap().abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0)
}
