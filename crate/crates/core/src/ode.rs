//! Differential operators Σ c_ij x^i θ^j (θ = x d/dx): application to series,
//! exact fitting, Riemann schemes, Frobenius bases at MUM points and the
//! coordinate inversion x = c/z.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::poly::{self, NumberField, QPoly};
use crate::series::{int, rat, RationalPowerSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OdeError {
    #[error("series has {have} terms; {need} needed")]
    TooShort { need: usize, have: usize },
    #[error("no annihilating operator with order ≤ {order} and degree ≤ {degree}")]
    NoAnnihilator { order: usize, degree: usize },
    #[error("annihilator not unique at order {order}, degree {degree} (nullity {nullity}); supply more terms")]
    NotUnique { order: usize, degree: usize, nullity: usize },
    #[error("irregular singular point at {0}")]
    Irregular(String),
    #[error("x = 0 is not a point of maximally unipotent monodromy")]
    NotMum,
    #[error("zero operator")]
    Zero,
    #[error("c must be nonzero")]
    ZeroScale,
    #[error("cannot parse operator: {0}")]
    Parse(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, OdeError>;

/// Σ_{i,j} c[i][j] x^i θ^j, content-normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaOperator {
    pub var: String,
    pub coeffs: Vec<Vec<BigInt>>,
}

impl ThetaOperator {
    /// Builds from rows P_i(θ) (lowest θ-power first) and normalizes.
    pub fn new(var: &str, rows: Vec<Vec<BigInt>>) -> Result<ThetaOperator> {
        let mut op = ThetaOperator { var: var.to_string(), coeffs: rows };
        op.normalize()?;
        Ok(op)
    }

    pub fn from_rational_rows(var: &str, rows: &[QPoly]) -> Result<ThetaOperator> {
        let flat: Vec<BigRational> = rows.iter().flatten().cloned().collect();
        let l = flat.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let lr = int(l);
        let ints = rows.iter().map(|r| r.iter().map(|c| (c * &lr).to_integer()).collect()).collect();
        ThetaOperator::new(var, ints)
    }

    fn normalize(&mut self) -> Result<()> {
        let order = self.coeffs.iter().filter_map(|r| r.iter().rposition(|c| !c.is_zero())).max().ok_or(OdeError::Zero)?;
        for r in self.coeffs.iter_mut() {
            r.resize(order + 1, BigInt::zero());
        }
        while self.coeffs.last().is_some_and(|r| r.iter().all(|c| c.is_zero())) {
            self.coeffs.pop();
        }
        // drop common powers of x
        while self.coeffs.first().is_some_and(|r| r.iter().all(|c| c.is_zero())) {
            self.coeffs.remove(0);
        }
        let g = self.coeffs.iter().flatten().fold(BigInt::zero(), |g, c| g.gcd(c));
        // sign: the θ^order coefficient of the lowest row with one is positive
        let lead = self.coeffs.iter().map(|r| &r[order]).find(|c| !c.is_zero()).cloned().unwrap_or_else(BigInt::one);
        let g = if lead.is_negative() { -g } else { g };
        for c in self.coeffs.iter_mut().flatten() {
            *c = &*c / &g;
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// P_i as a rational polynomial in θ.
    pub fn row(&self, i: usize) -> QPoly {
        self.coeffs.get(i).map(|r| poly::from_ints(r)).unwrap_or_default()
    }

    pub fn eval_row(&self, i: usize, s: &BigRational) -> BigRational {
        poly::eval(&self.row(i), s)
    }

    /// Σ_i c[i][order] x^i: the symbol; its roots are the finite singular points besides 0.
    pub fn leading_polynomial(&self) -> QPoly {
        let r = self.order();
        let mut p: QPoly = self.coeffs.iter().map(|row| int(row[r].clone())).collect();
        poly::trim(&mut p);
        p
    }

    pub fn rows_json(&self) -> Vec<Vec<String>> {
        self.coeffs.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()
    }

    /// Reads an expression in x and θ such as `θ^4 - 5x(5θ+1)(5θ+2)(5θ+3)(5θ+4)`.
    /// Powers of the variable are taken to stand left of θ-polynomials, as in
    /// the usual way of writing these operators. `var` names the coordinate.
    pub fn parse(var: &str, s: &str) -> Result<ThetaOperator> {
        let p = parse_expr(var, s)?;
        let deg = p.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let ord = p.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let mut rows = vec![vec![BigInt::zero(); ord + 1]; deg + 1];
        for ((i, j), c) in p {
            rows[i][j] = c;
        }
        ThetaOperator::new(var, rows)
    }

    /// Equal up to an overall sign (both are content-normalized).
    pub fn same_up_to_sign(&self, other: &ThetaOperator) -> bool {
        let neg: Vec<Vec<BigInt>> = other.coeffs.iter().map(|r| r.iter().map(|c| -c).collect()).collect();
        self.coeffs == other.coeffs || self.coeffs == neg
    }
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let th = "θ";
        let mut first = true;
        for (i, row) in self.coeffs.iter().enumerate() {
            if row.iter().all(|c| c.is_zero()) {
                continue;
            }
            let g = row.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
            let lead_neg = row.iter().rev().find(|c| !c.is_zero()).unwrap().is_negative();
            let g = if lead_neg { -g } else { g };
            let prim: Vec<BigInt> = row.iter().map(|c| c / &g).collect();
            let neg = g.is_negative();
            let ga = g.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let body = poly::format_poly(&prim, th);
            let monomial = prim.iter().filter(|c| !c.is_zero()).count() == 1;
            let xpart = match i {
                0 => String::new(),
                1 => self.var.clone(),
                _ => format!("{}^{i}", self.var),
            };
            let gpart = if ga.is_one() { String::new() } else { ga.to_string() };
            if monomial && prim.iter().rev().find(|c| !c.is_zero()).unwrap().is_one() {
                let only = body.as_str();
                if only == "1" {
                    let s = format!("{gpart}{xpart}");
                    write!(f, "{}", if s.is_empty() { "1".to_string() } else { s })?;
                } else {
                    write!(f, "{gpart}{xpart}{only}")?;
                }
            } else if gpart.is_empty() && xpart.is_empty() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{gpart}{xpart}({body})")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OperatorJson {
    pub var: String,
    pub coeffs: Vec<Vec<String>>,
}

impl From<&ThetaOperator> for OperatorJson {
    fn from(op: &ThetaOperator) -> Self {
        OperatorJson { var: op.var.clone(), coeffs: op.rows_json() }
    }
}

impl TryFrom<&OperatorJson> for ThetaOperator {
    type Error = OdeError;
    fn try_from(j: &OperatorJson) -> Result<Self> {
        let rows = j
            .coeffs
            .iter()
            .map(|r| r.iter().map(|c| c.trim().parse::<BigInt>().map_err(|_| OdeError::Parse(c.clone()))).collect())
            .collect::<Result<Vec<Vec<BigInt>>>>()?;
        ThetaOperator::new(&j.var, rows)
    }
}

type Bivariate = BTreeMap<(usize, usize), BigInt>;

fn parse_expr(var: &str, s: &str) -> Result<Bivariate> {
    let mut toks = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let err = |m: &str| OdeError::Parse(m.to_string());
    let sup = |c: char| "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|d| d == c);
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '·' {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            toks.push(Tok::Num(chars[st..i].iter().collect::<String>().parse().unwrap()));
        } else if let Some(d) = sup(c) {
            let mut v = d;
            i += 1;
            while i < chars.len() {
                match sup(chars[i]) {
                    Some(d) => v = v * 10 + d,
                    None => break,
                }
                i += 1;
            }
            toks.push(Tok::Caret);
            toks.push(Tok::Num(BigInt::from(v)));
        } else if c == 'θ' || s[s.char_indices().nth(i).unwrap().0..].starts_with("theta") {
            i += if c == 'θ' { 1 } else { 5 };
            // optional subscript θ_x
            if i + 1 < chars.len() && chars[i] == '_' && chars[i + 1].is_alphabetic() {
                i += 2;
            }
            toks.push(Tok::Theta);
        } else if c.is_alphabetic() {
            let name: String = c.to_string();
            if name != var {
                return Err(err(&format!("unknown symbol `{c}`")));
            }
            i += 1;
            toks.push(Tok::Var);
        } else {
            toks.push(match c {
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(err(&format!("unexpected `{c}`"))),
            });
            i += 1;
        }
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(err("trailing input"));
    }
    Ok(e)
}

#[derive(Clone, Debug)]
enum Tok {
    Num(BigInt),
    Var,
    Theta,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

fn bmul(a: &Bivariate, b: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for (&(i, j), x) in a {
        for (&(k, l), y) in b {
            *out.entry((i + k, j + l)).or_insert_with(BigInt::zero) += x * y;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn badd(a: &mut Bivariate, b: &Bivariate, sign: i32) {
    for (k, v) in b {
        let e = a.entry(*k).or_insert_with(BigInt::zero);
        if sign > 0 {
            *e += v;
        } else {
            *e -= v;
        }
    }
    a.retain(|_, v| !v.is_zero());
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn sum(&mut self) -> Result<Bivariate> {
        let mut acc = Bivariate::new();
        let mut sign = 1;
        if let Some(Tok::Minus) = self.peek() {
            sign = -1;
            self.pos += 1;
        } else if let Some(Tok::Plus) = self.peek() {
            self.pos += 1;
        }
        loop {
            let t = self.product()?;
            badd(&mut acc, &t, sign);
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn product(&mut self) -> Result<Bivariate> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = bmul(&acc, &f);
                }
                Some(Tok::Num(_)) | Some(Tok::Var) | Some(Tok::Theta) | Some(Tok::LParen) => {
                    let f = self.power()?;
                    acc = bmul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Bivariate> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return Err(OdeError::Parse("exponent expected".into()));
            };
            self.pos += 1;
            let n = n.to_usize().ok_or_else(|| OdeError::Parse("exponent too large".into()))?;
            let mut out: Bivariate = [((0, 0), BigInt::one())].into_iter().collect();
            for _ in 0..n {
                out = bmul(&out, &base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Bivariate> {
        let t = self.peek().cloned().ok_or_else(|| OdeError::Parse("unexpected end".into()))?;
        self.pos += 1;
        Ok(match t {
            Tok::Num(n) => [((0, 0), n)].into_iter().collect(),
            Tok::Var => [((1, 0), BigInt::one())].into_iter().collect(),
            Tok::Theta => [((0, 1), BigInt::one())].into_iter().collect(),
            Tok::LParen => {
                let e = self.sum()?;
                match self.peek() {
                    Some(Tok::RParen) => self.pos += 1,
                    _ => return Err(OdeError::Parse("`)` expected".into())),
                }
                e
            }
            Tok::Minus => {
                let e = self.power()?;
                let mut z = Bivariate::new();
                badd(&mut z, &e, -1);
                z
            }
            other => return Err(OdeError::Parse(format!("unexpected {other:?}"))),
        })
    }
}

/// L(s) coefficientwise: (L s)_n = Σ_i P_i(n − i) s_{n−i}.
pub fn apply(op: &ThetaOperator, s: &RationalPowerSeries) -> Result<RationalPowerSeries> {
    if s.len() <= op.degree() {
        return Err(OdeError::TooShort { need: op.degree() + 1, have: s.len() });
    }
    let rows: Vec<QPoly> = (0..=op.degree()).map(|i| op.row(i)).collect();
    let out = (0..s.len())
        .map(|n| {
            let mut acc = BigRational::zero();
            for (i, row) in rows.iter().enumerate().take(n + 1) {
                let a = &s.coeffs[n - i];
                if !a.is_zero() {
                    acc += poly::eval(row, &rat((n - i) as i64)) * a;
                }
            }
            acc
        })
        .collect();
    Ok(RationalPowerSeries::new(&s.var, out))
}

/// Rows of the linear system for an ansatz of the given order and degree,
/// applied to an integer series b.
fn ansatz_matrix(b: &[BigInt], order: usize, degree: usize) -> Vec<Vec<BigInt>> {
    let n = b.len();
    (0..n)
        .map(|m| {
            let mut row = Vec::with_capacity((order + 1) * (degree + 1));
            for i in 0..=degree {
                for j in 0..=order {
                    if i > m {
                        row.push(BigInt::zero());
                    } else {
                        let k = BigInt::from(m - i);
                        row.push(k.pow(j as u32) * &b[m - i]);
                    }
                }
            }
            row
        })
        .collect()
}

/// Extra equations beyond the unknown count demanded by [`fit_operator`].
pub const FIT_MARGIN: usize = 10;

fn rows_to_operator(var: &str, v: &[BigInt], order: usize, degree: usize) -> Result<ThetaOperator> {
    let rows = (0..=degree).map(|i| v[i * (order + 1)..(i + 1) * (order + 1)].to_vec()).collect();
    ThetaOperator::new(var, rows)
}

/// Minimal operator (by order, then degree) annihilating `s` to its truncation.
///
/// Each candidate is screened modulo a prime; a one-dimensional kernel is
/// lifted by Chinese remaindering and rational reconstruction, and accepted
/// only if the lifted operator kills the series exactly.
pub fn fit_operator(s: &RationalPowerSeries, max_order: usize, max_degree: usize) -> Result<ThetaOperator> {
    let primes: Vec<u64> = linalg::primes()
        .filter(|&p| s.coeffs.iter().all(|c| linalg::reduce_rational(c, p).is_some()))
        .take(MAX_PRIMES)
        .collect();
    let residues: Vec<Vec<u64>> = primes
        .iter()
        .map(|&p| s.coeffs.iter().map(|c| linalg::reduce_rational(c, p).unwrap()).collect())
        .collect();
    let modular = |k: usize, order: usize, degree: usize| -> Vec<Vec<u64>> {
        let p = primes[k];
        let b = &residues[k];
        (0..b.len())
            .map(|m| {
                let mut row = Vec::with_capacity((order + 1) * (degree + 1));
                for i in 0..=degree {
                    let mut pw = 1u64;
                    let base = (m.saturating_sub(i) as u64) % p;
                    for _ in 0..=order {
                        row.push(if i > m { 0 } else { linalg::mulmod(pw, b[m - i], p) });
                        pw = linalg::mulmod(pw, base, p);
                    }
                }
                row
            })
            .collect()
    };
    for order in 1..=max_order {
        for degree in 1..=max_degree {
            let unknowns = (order + 1) * (degree + 1);
            if s.len() < unknowns + FIT_MARGIN {
                if degree == 1 && order == 1 {
                    return Err(OdeError::TooShort { need: unknowns + FIT_MARGIN, have: s.len() });
                }
                continue;
            }
            let mut acc: Option<(usize, Vec<BigInt>, BigInt)> = None;
            let mut wide = 0;
            for k in 0..primes.len() {
                let p = primes[k];
                let ns = linalg::nullspace_mod_p(&modular(k, order, degree), p);
                match ns.len() {
                    0 => break,
                    1 => {}
                    n => {
                        wide += 1;
                        if wide >= 3 {
                            return Err(OdeError::NotUnique { order, degree, nullity: n });
                        }
                        continue;
                    }
                }
                let (free, v) = &ns[0];
                let (r, m) = match acc.take() {
                    Some((f, r, m)) if f == *free => {
                        let r = r.iter().zip(v).map(|(x, &y)| linalg::crt(x, &m, y, p)).collect();
                        (r, m * p)
                    }
                    _ => (v.iter().map(|&y| BigInt::from(y)).collect::<Vec<_>>(), BigInt::from(p)),
                };
                let lifted: Option<Vec<BigRational>> =
                    r.iter().map(|x| linalg::rational_reconstruction(x, &m)).collect();
                if let Some(q) = lifted {
                    let op = rows_to_operator(&s.var, &linalg::primitive_vector(&q), order, degree)?;
                    if apply(&op, s)?.coeffs.iter().all(|c| c.is_zero()) {
                        return Ok(op);
                    }
                }
                acc = Some((*free, r, m));
            }
        }
    }
    Err(OdeError::NoAnnihilator { order: max_order, degree: max_degree })
}

/// Primes tried per candidate in [`fit_operator`].
pub const MAX_PRIMES: usize = 48;

/// [`fit_operator`] by fraction-free elimination over Z; slow but independent.
pub fn fit_operator_exact(s: &RationalPowerSeries, max_order: usize, max_degree: usize) -> Result<ThetaOperator> {
    let l = s.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let b: Vec<BigInt> = s.coeffs.iter().map(|c| (c * int(l.clone())).to_integer()).collect();
    for order in 1..=max_order {
        for degree in 1..=max_degree {
            let unknowns = (order + 1) * (degree + 1);
            if s.len() < unknowns + FIT_MARGIN {
                if degree == 1 && order == 1 {
                    return Err(OdeError::TooShort { need: unknowns + FIT_MARGIN, have: s.len() });
                }
                continue;
            }
            let m = ansatz_matrix(&b, order, degree);
            if linalg::rank_mod_p(&m) == unknowns {
                continue;
            }
            let ns = linalg::nullspace(&m);
            match ns.len() {
                0 => continue,
                1 => return rows_to_operator(&s.var, &ns[0], order, degree),
                k => return Err(OdeError::NotUnique { order, degree, nullity: k }),
            }
        }
    }
    Err(OdeError::NoAnnihilator { order: max_order, degree: max_degree })
}

/// S(j, k): θ^j = Σ_k S(j, k) x^k ∂^k.
fn stirling2(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for j in 1..=n {
        for k in 1..=j {
            s[j][k] = BigInt::from(k) * &s[j - 1][k] + &s[j - 1][k - 1];
        }
    }
    s
}

/// Coefficients a_k(x) of ∂^k in the ∂-form of the operator.
pub fn d_form(op: &ThetaOperator) -> Vec<QPoly> {
    let r = op.order();
    let st = stirling2(r);
    let mut a = vec![QPoly::new(); r + 1];
    for (i, row) in op.coeffs.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for k in 0..=j {
                if st[j][k].is_zero() {
                    continue;
                }
                let deg = i + k;
                let mut term = vec![BigRational::zero(); deg + 1];
                term[deg] = int(c * &st[j][k]);
                a[k] = poly::add(&a[k], &term);
            }
        }
    }
    a
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularPoint {
    /// primitive minimal polynomial (lowest first); `[-p, q]` for x = p/q
    pub minimal_polynomial: Vec<String>,
    pub display: String,
    /// numerical locations of the conjugate points
    pub approx: Vec<(f64, f64)>,
    pub exponents: Vec<String>,
    /// distinct nonnegative integer exponents: a candidate apparent singularity
    pub apparent_candidate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RiemannScheme {
    pub var: String,
    pub points: Vec<SingularPoint>,
    pub infinity: Vec<String>,
    /// product of the singular factors that are not apparent candidates, primitive
    pub discriminant: Vec<String>,
    pub discriminant_display: String,
    pub fuchs_sum: String,
    pub fuchs_expected: String,
}

impl RiemannScheme {
    pub fn fuchs_ok(&self) -> bool {
        self.fuchs_sum == self.fuchs_expected
    }

    pub fn point(&self, display: &str) -> Option<&SingularPoint> {
        self.points.iter().find(|p| p.display == display)
    }
}

fn exponent_strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|e| e.to_string()).collect()
}

fn roots_with_multiplicity(p: &QPoly) -> Option<Vec<BigRational>> {
    let (roots, rest) = poly::rational_roots(p);
    if poly::degree(&rest).unwrap_or(0) > 0 {
        return None;
    }
    let mut out = Vec::new();
    for (r, k) in roots {
        out.extend(std::iter::repeat(r).take(k));
    }
    out.sort();
    Some(out)
}

/// Local exponents at a root of the modulus of `k`.
fn local_exponents(op: &ThetaOperator, k: &NumberField, label: &str) -> Result<Vec<BigRational>> {
    let r = op.order();
    let a = d_form(op);
    let x0 = k.gen();
    // Taylor coefficients of a_k(x0 + t) in K
    let shifted: Vec<Vec<QPoly>> = a
        .iter()
        .map(|p| {
            let mut acc: Vec<QPoly> = Vec::new();
            for c in p.iter().rev() {
                // acc ← acc·(x0 + t) + c
                let mut next = vec![QPoly::new(); acc.len() + 1];
                for (i, ai) in acc.iter().enumerate() {
                    next[i] = poly::add(&next[i], &k.mul(ai, &x0));
                    next[i + 1] = poly::add(&next[i + 1], ai);
                }
                if next.is_empty() {
                    next.push(QPoly::new());
                }
                next[0] = poly::add(&next[0], &vec![c.clone()]);
                acc = next;
            }
            acc.into_iter().map(|c| k.reduce(&c)).collect()
        })
        .collect();
    let ord = |v: &Vec<QPoly>| v.iter().position(|c| !c.is_empty());
    let mu = ord(&shifted[r]).ok_or(OdeError::Zero)?;
    let mut indicial: Vec<QPoly> = vec![QPoly::new(); r + 1];
    for kk in 0..=r {
        let need = mu as isize - r as isize + kk as isize;
        if let Some(o) = ord(&shifted[kk]) {
            if (o as isize) < need {
                return Err(OdeError::Irregular(label.to_string()));
            }
        }
        if need < 0 {
            continue;
        }
        let Some(coef) = shifted[kk].get(need as usize).cloned() else { continue };
        if coef.is_empty() {
            continue;
        }
        // falling factorial s(s−1)…(s−kk+1)
        let mut ff: QPoly = vec![BigRational::one()];
        for t in 0..kk {
            ff = poly::mul(&ff, &vec![rat(-(t as i64)), BigRational::one()]);
        }
        for (d, fc) in ff.iter().enumerate() {
            let v = poly::scale(&coef, fc);
            indicial[d] = poly::add(&indicial[d], &v);
        }
    }
    let lead = indicial[r].clone();
    let inv = k.inv(&lead).ok_or_else(|| OdeError::Irregular(label.to_string()))?;
    let monic: Option<QPoly> = indicial.iter().map(|c| NumberField::as_rational(&k.mul(c, &inv))).collect();
    let monic = monic.ok_or_else(|| OdeError::Irregular(format!("{label}: exponents outside Q")))?;
    roots_with_multiplicity(&monic).ok_or_else(|| OdeError::Irregular(format!("{label}: exponents outside Q")))
}

pub fn exponents_at_zero(op: &ThetaOperator) -> Result<Vec<BigRational>> {
    let r = op.order();
    if op.coeffs[0][r].is_zero() {
        return Err(OdeError::Irregular("0".into()));
    }
    roots_with_multiplicity(&op.row(0)).ok_or_else(|| OdeError::Irregular("0: exponents outside Q".into()))
}

pub fn exponents_at_infinity(op: &ThetaOperator) -> Result<Vec<BigRational>> {
    let r = op.order();
    let d = op.degree();
    if op.coeffs[d][r].is_zero() {
        return Err(OdeError::Irregular("∞".into()));
    }
    // in w = 1/x, θ_x = −θ_w and the indicial polynomial is P_deg(−s)
    let p = op.row(d);
    let flipped: QPoly = p.iter().enumerate().map(|(j, c)| if j % 2 == 0 { c.clone() } else { -c }).collect();
    roots_with_multiplicity(&flipped).ok_or_else(|| OdeError::Irregular("∞: exponents outside Q".into()))
}

fn point_display(minpoly: &QPoly, var: &str) -> String {
    if poly::degree(minpoly) == Some(1) {
        let r = -&minpoly[0] / &minpoly[1];
        r.to_string()
    } else {
        format!("root of {}", poly::format_poly(&poly::primitive(minpoly), var))
    }
}

pub fn riemann_scheme(op: &ThetaOperator) -> Result<RiemannScheme> {
    let r = op.order();
    let mut points = Vec::new();
    let mut total = BigRational::zero();
    let mut count = 0usize;
    let e0 = exponents_at_zero(op)?;
    total += e0.iter().cloned().sum::<BigRational>();
    count += 1;
    points.push(SingularPoint {
        minimal_polynomial: vec!["0".into(), "1".into()],
        display: "0".into(),
        approx: vec![(0.0, 0.0)],
        exponents: exponent_strings(&e0),
        apparent_candidate: false,
    });
    let lead = op.leading_polynomial();
    let mut disc: QPoly = vec![BigRational::one()];
    for (factor, _) in poly::squarefree(&lead) {
        let (roots, rest) = poly::rational_roots(&factor);
        let mut pieces: Vec<(QPoly, NumberField)> =
            roots.iter().map(|(x, _)| (vec![-x.clone(), BigRational::one()], NumberField::rational(x))).collect();
        if poly::degree(&rest).unwrap_or(0) > 0 {
            pieces.push((rest.clone(), NumberField::new(&rest)));
        }
        for (mp, k) in pieces {
            let label = point_display(&mp, &op.var);
            let ex = local_exponents(op, &k, &label)?;
            let deg = k.degree();
            total += ex.iter().cloned().sum::<BigRational>() * rat(deg as i64);
            count += deg;
            let distinct = ex.windows(2).all(|w| w[0] != w[1]);
            let apparent = distinct && ex.iter().all(|e| e.is_integer() && !e.is_negative());
            if !apparent {
                disc = poly::mul(&disc, &mp);
            }
            points.push(SingularPoint {
                minimal_polynomial: poly::primitive(&mp).iter().map(|c| c.to_string()).collect(),
                display: label,
                approx: poly::approx_roots(&mp),
                exponents: exponent_strings(&ex),
                apparent_candidate: apparent,
            });
        }
    }
    let einf = exponents_at_infinity(op)?;
    total += einf.iter().cloned().sum::<BigRational>();
    count += 1;
    let disc_int = poly::primitive(&disc);
    // Fuchs: Σ exponents = (#points − 2)·r(r−1)/2
    let expected = rat((count as i64 - 2) * (r * (r - 1) / 2) as i64);
    Ok(RiemannScheme {
        var: op.var.clone(),
        points,
        infinity: exponent_strings(&einf),
        discriminant_display: poly::format_poly(&disc_int, &op.var),
        discriminant: disc_int.iter().map(|c| c.to_string()).collect(),
        fuchs_sum: total.to_string(),
        fuchs_expected: expected.to_string(),
    })
}

/// ω₀ and ω_k^reg (k = 1..order−1) at a MUM point x = 0, where
/// ω_k = Σ_{j≤k} C(k, j) ω_j^reg (log x)^{k−j}.
#[derive(Clone, Debug)]
pub struct FrobeniusBasis {
    pub order: usize,
    pub series: Vec<RationalPowerSeries>,
}

impl FrobeniusBasis {
    pub fn omega0(&self) -> &RationalPowerSeries {
        &self.series[0]
    }

    pub fn reg(&self, k: usize) -> &RationalPowerSeries {
        &self.series[k]
    }
}

pub fn is_mum(op: &ThetaOperator) -> bool {
    let r = op.order();
    op.coeffs[0].iter().enumerate().all(|(j, c)| (j == r) != c.is_zero())
}

/// P(s + ε) as a polynomial in ε truncated at ε^len.
fn shift_eval(p: &QPoly, s: &BigRational, len: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(len);
    let mut d = p.clone();
    let mut fact = BigRational::one();
    for k in 0..len {
        if k > 0 {
            d = poly::derivative(&d);
            fact *= rat(k as i64);
        }
        out.push(poly::eval(&d, s) / &fact);
    }
    out
}

pub fn frobenius_basis(op: &ThetaOperator, terms: usize) -> Result<FrobeniusBasis> {
    if !is_mum(op) {
        return Err(OdeError::NotMum);
    }
    let r = op.order();
    let c0 = int(op.coeffs[0][r].clone());
    let rows: Vec<QPoly> = (0..=op.degree()).map(|i| op.row(i)).collect();
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(terms);
    let mut first = vec![BigRational::zero(); r];
    first[0] = BigRational::one();
    a.push(first);
    for n in 1..terms {
        let mut rhs = vec![BigRational::zero(); r];
        for (i, row) in rows.iter().enumerate().skip(1) {
            if i > n {
                break;
            }
            let pe = shift_eval(row, &rat((n - i) as i64), r);
            let prev = &a[n - i];
            for (k1, x) in pe.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (k2, y) in prev.iter().enumerate().take(r - k1) {
                    rhs[k1 + k2] -= x * y;
                }
            }
        }
        // divide by c0 (n + ε)^r
        let nn = rat(n as i64);
        let inv: Vec<BigRational> = (0..r)
            .map(|k| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let c = crate::invariants::binomial(r + k - 1, k) * sign;
                int(c) / nn.pow((r + k) as i32)
            })
            .collect();
        let mut an = vec![BigRational::zero(); r];
        for (k1, x) in rhs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k2, y) in inv.iter().enumerate().take(r - k1) {
                an[k1 + k2] += x * y;
            }
        }
        for v in an.iter_mut() {
            *v /= &c0;
        }
        a.push(an);
    }
    let mut series = Vec::with_capacity(r);
    let mut fact = BigRational::one();
    for k in 0..r {
        if k > 0 {
            fact *= rat(k as i64);
        }
        let coeffs = a.iter().map(|an| &an[k] * &fact).collect();
        series.push(RationalPowerSeries::new(&op.var, coeffs));
    }
    Ok(FrobeniusBasis { order: r, series })
}

/// P(a + bθ) for a polynomial P in θ.
fn compose_linear(p: &QPoly, a: &BigRational, b: &BigRational) -> QPoly {
    let lin = vec![a.clone(), b.clone()];
    let mut acc = QPoly::new();
    for c in p.iter().rev() {
        acc = poly::add(&poly::mul(&acc, &lin), &vec![c.clone()]);
    }
    acc
}

/// The operator in z = c/x, conjugated so that solutions are divided by z:
/// D^Z = Σ_k z^k c^{deg−k} P_{deg−k}(−θ_z − 1).
pub fn invert_and_conjugate(op: &ThetaOperator, c: &BigRational, var: &str) -> Result<ThetaOperator> {
    if c.is_zero() {
        return Err(OdeError::ZeroScale);
    }
    let d = op.degree();
    let rows: Vec<QPoly> = (0..=d)
        .map(|k| {
            let p = op.row(d - k);
            let q = compose_linear(&p, &rat(-1), &rat(-1));
            poly::scale(&q, &c.pow((d - k) as i32))
        })
        .collect();
    ThetaOperator::from_rational_rows(var, &rows)
}

/// The operator in z = c/x without the gauge change; its exponents at z = 0
/// are those of the original at ∞.
pub fn invert(op: &ThetaOperator, c: &BigRational, var: &str) -> Result<ThetaOperator> {
    if c.is_zero() {
        return Err(OdeError::ZeroScale);
    }
    let d = op.degree();
    let rows: Vec<QPoly> = (0..=d)
        .map(|k| {
            let q = compose_linear(&op.row(d - k), &rat(0), &rat(-1));
            poly::scale(&q, &c.pow((d - k) as i32))
        })
        .collect();
    ThetaOperator::from_rational_rows(var, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::period::prefactor;

    fn quintic() -> ThetaOperator {
        ThetaOperator::parse("x", "θ^4 - 5x(5θ+1)(5θ+2)(5θ+3)(5θ+4)").unwrap()
    }

    fn quintic_series(n: usize) -> RationalPowerSeries {
        RationalPowerSeries::from_integers("x", (0..n).map(|m| prefactor(&[5], 5, m)))
    }

    #[test]
    fn parse_and_print() {
        let op = quintic();
        assert_eq!(op.order(), 4);
        assert_eq!(op.degree(), 1);
        assert_eq!(op.coeffs[1][4], BigInt::from(-3125));
        let again = ThetaOperator::parse("x", &op.to_string()).unwrap();
        assert_eq!(again, op);
        assert!(ThetaOperator::parse("x", "θ^4 - y").is_err());
        let sup = ThetaOperator::parse("x", "θ⁴ − 5x(5θ+1)(5θ+2)(5θ+3)(5θ+4)").unwrap();
        assert_eq!(sup, op);
    }

    #[test]
    fn theta_on_series() {
        let s = RationalPowerSeries::from_integers("x", (0..6).map(BigInt::from));
        let th = ThetaOperator::parse("x", "θ").unwrap();
        let out = apply(&th, &s).unwrap();
        assert_eq!(out.coeff(5), rat(25));
    }

    #[test]
    fn quintic_annihilates_and_fits() {
        let s = quintic_series(30);
        let out = apply(&quintic(), &s).unwrap();
        assert!(out.coeffs.iter().all(|c| c.is_zero()));
        let fit = fit_operator(&s, 4, 2).unwrap();
        assert_eq!(fit, quintic());
    }

    #[test]
    fn quintic_scheme_and_frobenius() {
        let sc = riemann_scheme(&quintic()).unwrap();
        assert_eq!(sc.infinity, vec!["1/5", "2/5", "3/5", "4/5"]);
        assert_eq!(sc.points[0].exponents, vec!["0"; 4]);
        assert!(sc.fuchs_ok(), "{} vs {}", sc.fuchs_sum, sc.fuchs_expected);
        let fb = frobenius_basis(&quintic(), 5).unwrap();
        assert_eq!(fb.reg(1).coeff(1), rat(770));
        assert_eq!(fb.omega0().coeff(2), rat(113400));
        assert!(fb.reg(1).coeff(0).is_zero());
    }

    #[test]
    fn double_inversion() {
        let op = quintic();
        let c = rat(-3);
        let z = invert_and_conjugate(&op, &c, "z").unwrap();
        let back = invert_and_conjugate(&z, &c, "x").unwrap();
        assert_eq!(back, op);
        let plain = invert(&op, &rat(1), "z").unwrap();
        assert_eq!(exponents_at_zero(&plain).unwrap(), exponents_at_infinity(&op).unwrap());
    }
}
