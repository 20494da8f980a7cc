//! Homogeneous polynomials over Q(zeta12) and the formal-variable actions
//! of PSL(2,Z) on (X0, X1) and PU(2,1) on (X0, X1, X2).

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclotomic::CycNum;
use crate::matgroup::{IntMat2, ProjMat};
use crate::Error;

/// A homogeneous polynomial.  Monomials are exponent vectors; zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomPoly {
    vars: Vec<String>,
    degree: u32,
    terms: BTreeMap<Vec<u32>, CycNum>,
}

pub fn x_vars(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("X{i}")).collect()
}

impl HomPoly {
    pub fn zero(vars: &[String], degree: u32) -> Self {
        HomPoly {
            vars: vars.to_vec(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: CycNum) -> Self {
        let mut p = Self::zero(vars, 0);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn var(vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, CycNum::one())
    }

    pub fn monomial(vars: &[String], exps: Vec<u32>, c: CycNum) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(vars, exps.iter().sum());
        p.add_term(exps, c);
        p
    }

    /// sum_j coeffs[j] * vars[j].
    pub fn linear(vars: &[String], coeffs: &[CycNum]) -> Self {
        let mut p = Self::zero(vars, 1);
        for (j, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[j] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> CycNum {
        self.terms.get(exps).cloned().unwrap_or_else(CycNum::zero)
    }

    /// Terms in graded lexicographic order, X0 > X1 > X2 > ...
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &CycNum)> {
        self.terms.iter().rev()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: CycNum) {
        debug_assert_eq!(exps.iter().sum::<u32>(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    fn check_compatible(&self, o: &HomPoly) -> Result<(), Error> {
        if self.vars != o.vars {
            return Err(Error::Domain("variable lists differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &HomPoly) -> Result<HomPoly, Error> {
        self.check_compatible(o)?;
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != o.degree {
            return Err(Error::Domain("degrees differ".into()));
        }
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &HomPoly) -> Result<HomPoly, Error> {
        self.add(&o.scale(&-CycNum::one()))
    }

    pub fn scale(&self, s: &CycNum) -> HomPoly {
        let mut out = Self::zero(&self.vars, self.degree);
        if s.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), s * c);
        }
        out
    }

    pub fn mul(&self, o: &HomPoly) -> Result<HomPoly, Error> {
        self.check_compatible(o)?;
        let mut out = Self::zero(&self.vars, self.degree + o.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> HomPoly {
        let mut acc = Self::constant(&self.vars, CycNum::one());
        for _ in 0..n {
            acc = acc.mul(self).expect("same variables");
        }
        acc
    }

    /// Applies conj to every coefficient.
    pub fn conj(&self) -> HomPoly {
        let mut out = Self::zero(&self.vars, self.degree);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.conj());
        }
        out
    }

    /// lambda with self = lambda * other, if the two are proportional.
    pub fn ratio_to(&self, other: &HomPoly) -> Option<CycNum> {
        if self.vars != other.vars || self.terms.len() != other.terms.len() {
            return None;
        }
        if self.is_zero() {
            return Some(CycNum::one());
        }
        let mut lam: Option<CycNum> = None;
        for (e, a) in &self.terms {
            let b = other.terms.get(e)?;
            match &lam {
                None => lam = Some(a / b),
                Some(l) => {
                    if *a != l * b {
                        return None;
                    }
                }
            }
        }
        lam
    }

    /// Numerical evaluation with coefficients embedded at z = exp(i pi/6).
    pub fn eval<T: crate::Real>(
        &self,
        x: &[num_complex::Complex<T>],
    ) -> num_complex::Complex<T> {
        let mut acc = num_complex::Complex::new(T::zero(), T::zero());
        for (e, c) in self.terms() {
            let mut t: num_complex::Complex<T> = c.embed();
            for (xi, &ei) in x.iter().zip(e) {
                t = t * xi.powu(ei);
            }
            acc = acc + t;
        }
        acc
    }

    /// Parses the serialized form, e.g. "3 * X0^2 X1 + (-1/2 + z) * X2^3".
    pub fn parse(vars: &[String], degree: u32, s: &str) -> Result<HomPoly, Error> {
        let mut out = Self::zero(vars, degree);
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(out);
        }
        for term in split_top(s) {
            let term = term.trim();
            let is_mono = |t: &str| {
                t.split_whitespace().all(|tok| {
                    let name = tok.split_once('^').map_or(tok, |(n, _)| n);
                    vars.iter().any(|v| v == name)
                })
            };
            let (coef, mono) = match term.rfind(" * ") {
                Some(p) if is_mono(&term[p + 3..]) => (&term[..p], &term[p + 3..]),
                _ if is_mono(term) => ("1", term),
                _ => (term, ""),
            };
            let c: CycNum = coef.trim().parse()?;
            let mut e = vec![0u32; vars.len()];
            for tok in mono.split_whitespace() {
                let (name, pw) = match tok.split_once('^') {
                    Some((n, p)) => (
                        n,
                        p.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?,
                    ),
                    None => (tok, 1),
                };
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                e[idx] += pw;
            }
            if e.iter().sum::<u32>() != degree {
                return Err(Error::Parse(format!("term {term:?} has wrong degree")));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }
}

/// Splits at '+' signs outside parentheses that separate terms.
fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let cs: Vec<char> = s.chars().collect();
    for (i, &c) in cs.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 && i > 0 && cs[i - 1] == ' ' => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out
}

fn coeff_text(c: &CycNum) -> String {
    let t = c.to_string();
    if t.contains(' ') || t.starts_with('-') {
        format!("({t})")
    } else {
        t
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", coeff_text(c))?;
            } else {
                write!(f, "{} * {}", coeff_text(c), mono.join(" "))?;
            }
        }
        Ok(())
    }
}

impl Serialize for HomPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A linear change of variables X_k -> sum_j m[k][j] X_j, with an overall
/// scalar multiplying the substituted polynomial.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LinearSub {
    pub m: Vec<Vec<CycNum>>,
    pub scalar: CycNum,
}

impl LinearSub {
    pub fn new(m: Vec<Vec<CycNum>>) -> Self {
        LinearSub {
            m,
            scalar: CycNum::one(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { CycNum::one() } else { CycNum::zero() })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn from_proj(g: &ProjMat) -> Self {
        Self::new(g.m.iter().map(|r| r.to_vec()).collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| CycNum::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn with_scalar(mut self, s: CycNum) -> Self {
        self.scalar = s;
        self
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// Substitution `self` followed by `then`: X -> M_self (M_then X).
    pub fn then(&self, then: &LinearSub) -> LinearSub {
        let n = self.dim();
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.m[i][k] * &then.m[k][j]).sum())
                    .collect()
            })
            .collect();
        LinearSub {
            m,
            scalar: &self.scalar * &then.scalar,
        }
    }

    /// The images of the variables as text, e.g. ["X2", "-X1", "X0"].
    pub fn image_text(&self, vars: &[String]) -> Vec<String> {
        self.m
            .iter()
            .map(|row| HomPoly::linear(vars, row).to_string())
            .collect()
    }

    /// Whether the matrices agree after scaling the whole substitution by
    /// some root of unity whose `degree`-th power is 1.
    pub fn same_action_on_degree(&self, o: &LinearSub, degree: u32) -> bool {
        let a = ProjLike(&self.m);
        match a.ratio(&o.m) {
            Some(l) => l.pow(i64::from(degree)) == CycNum::one(),
            None => false,
        }
    }
}

struct ProjLike<'a>(&'a [Vec<CycNum>]);

impl ProjLike<'_> {
    fn ratio(&self, o: &[Vec<CycNum>]) -> Option<CycNum> {
        let mut lam: Option<CycNum> = None;
        for (r1, r2) in self.0.iter().zip(o) {
            for (a, b) in r1.iter().zip(r2) {
                match (a.is_zero(), b.is_zero()) {
                    (true, true) => continue,
                    (false, false) => {}
                    _ => return None,
                }
                match &lam {
                    None => lam = Some(a / b),
                    Some(l) if *a != l * b => return None,
                    _ => {}
                }
            }
        }
        lam.or_else(|| Some(CycNum::one()))
    }
}

/// p(M X) times the substitution's scalar.
pub fn substitute(p: &HomPoly, s: &LinearSub) -> Result<HomPoly, Error> {
    let n = p.nvars();
    if s.dim() != n || s.m.iter().any(|r| r.len() != n) {
        return Err(Error::Domain(format!(
            "substitution of size {} for {} variables",
            s.dim(),
            n
        )));
    }
    let images: Vec<HomPoly> = s.m.iter().map(|row| HomPoly::linear(p.vars(), row)).collect();
    let mut powers: Vec<Vec<HomPoly>> = images
        .iter()
        .map(|_| vec![HomPoly::constant(p.vars(), CycNum::one())])
        .collect();
    let mut out = HomPoly::zero(p.vars(), p.degree());
    for (e, c) in p.terms() {
        let mut t = HomPoly::constant(p.vars(), c.clone());
        for (i, &ei) in e.iter().enumerate() {
            while powers[i].len() <= ei as usize {
                let next = powers[i].last().unwrap().mul(&images[i])?;
                powers[i].push(next);
            }
            t = t.mul(&powers[i][ei as usize])?;
        }
        for (e2, c2) in t.terms {
            out.add_term(e2, c2);
        }
    }
    out.degree = p.degree();
    Ok(out.scale(&s.scalar))
}

/// The substitution matrix of g: M[k][j] = conj(g[2-k][2-j]).
pub fn pu21_matrix(g: &ProjMat) -> LinearSub {
    LinearSub::new(
        (0..3)
            .map(|k| (0..3).map(|j| g.m[2 - k][2 - j].conj()).collect())
            .collect(),
    )
}

/// (det g)^(k-1), exact.
pub fn pu21_scalar(g: &ProjMat, k: i64) -> CycNum {
    g.det().pow(k - 1)
}

/// The substitution and scalar by which g acts on weight-k polynomials.
pub fn pu21_sub(g: &ProjMat, k: i64) -> LinearSub {
    pu21_matrix(g).with_scalar(pu21_scalar(g, k))
}

/// The action on polynomials of degree 3k - 3 in X0, X1, X2.  Acting by a
/// product g h equals acting by g first and then by h.
pub fn act_pu21(g: &ProjMat, p: &HomPoly, k: i64) -> Result<HomPoly, Error> {
    if p.nvars() != 3 {
        return Err(Error::Domain("act_pu21 needs three variables".into()));
    }
    if p.degree() % 3 != 0 {
        return Err(Error::Domain(format!(
            "degree {} is not divisible by 3",
            p.degree()
        )));
    }
    if i64::from(p.degree()) != 3 * k - 3 {
        return Err(Error::Domain(format!(
            "degree {} does not match weight {k}",
            p.degree()
        )));
    }
    substitute(p, &pu21_sub(g, k))
}

/// The substitution for gamma on (X0, X1):
/// X_k -> (-1)^k a_{(1-k)1} X0 + (-1)^{k+1} a_{(1-k)0} X1.
pub fn psl2_sub(gamma: &IntMat2) -> Result<LinearSub, Error> {
    if gamma.det() != 1 {
        return Err(Error::Domain(format!(
            "determinant {} is not 1",
            gamma.det()
        )));
    }
    let a = &gamma.0;
    Ok(LinearSub::from_ints(&[
        &[a[1][1], -a[1][0]],
        &[-a[0][1], a[0][0]],
    ]))
}

pub fn act_psl2(gamma: &IntMat2, p: &HomPoly) -> Result<HomPoly, Error> {
    if p.nvars() != 2 {
        return Err(Error::Domain("act_psl2 needs two variables".into()));
    }
    substitute(p, &psl2_sub(gamma)?)
}

/// Exact check that the form (z1 X0 + z2 X1 + X2)^(3k-3) dz1^dz2, twisted by
/// j_g^k, is preserved by g.  Works with homogeneous coordinates
/// eta = (z1, z2, w) so every identity is polynomial:
///  * (g eta) . (M_g X) = mu (eta . X) with mu^3 = 1,
///  * the Jacobian numerator of z -> g z equals det(g) w (g eta)_2,
///  * mu^(3k-3) = 1, so the leftover factor is trivial.
#[derive(Clone, Debug, Serialize)]
pub struct TwoFormCheck {
    pub k: i64,
    pub mu: Option<CycNum>,
    pub linear_form_ok: bool,
    pub jacobian_ok: bool,
    pub pass: bool,
}

pub fn two_form_invariance(g: &ProjMat, k: i64) -> TwoFormCheck {
    let vars: Vec<String> = ["z1", "z2", "w", "X0", "X1", "X2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let v = |i: usize| HomPoly::var(&vars, i);
    let c = |x: &CycNum| HomPoly::constant(&vars, x.clone());
    let eta = [v(0), v(1), v(2)];
    let x = [v(3), v(4), v(5)];
    let lin = |coeffs: &[CycNum], basis: &[HomPoly; 3]| -> HomPoly {
        let mut acc = HomPoly::zero(&vars, 1);
        for (cj, bj) in coeffs.iter().zip(basis) {
            acc = acc.add(&bj.scale(cj)).unwrap();
        }
        acc
    };
    let geta: Vec<HomPoly> = (0..3).map(|i| lin(&g.m[i], &eta)).collect();
    let m = pu21_matrix(g);
    let mx: Vec<HomPoly> = (0..3).map(|i| lin(&m.m[i], &x)).collect();
    let dot = |a: &[HomPoly], b: &[HomPoly]| -> HomPoly {
        let mut acc = HomPoly::zero(&vars, 2);
        for (p, q) in a.iter().zip(b) {
            acc = acc.add(&p.mul(q).unwrap()).unwrap();
        }
        acc
    };
    let lhs = dot(&geta, &mx);
    let base = dot(&eta, &x);
    let mu = lhs.ratio_to(&base);
    let linear_form_ok = mu
        .as_ref()
        .is_some_and(|m| m.pow(3) == CycNum::one());
    let gm = &g.m;
    let e2 = &geta[2];
    let part = |a: usize, b: usize| -> HomPoly {
        e2.scale(&gm[a][b]).sub(&geta[a].scale(&gm[2][b])).unwrap()
    };
    let num = part(0, 0)
        .mul(&part(1, 1))
        .unwrap()
        .sub(&part(0, 1).mul(&part(1, 0)).unwrap())
        .unwrap();
    let rhs = c(&g.det()).mul(&v(2)).unwrap().mul(e2).unwrap();
    let jacobian_ok = num == rhs;
    let power_ok = mu
        .as_ref()
        .is_some_and(|m| m.pow(3 * k - 3) == CycNum::one());
    TwoFormCheck {
        k,
        mu,
        linear_form_ok,
        jacobian_ok,
        pass: linear_form_ok && jacobian_ok && power_ok,
    }
}

/// A homogeneous polynomial with complex floating coefficients, used for
/// numerically computed period polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct NumPoly<T> {
    pub nvars: usize,
    pub degree: u32,
    pub coeffs: BTreeMap<Vec<u32>, Complex<T>>,
}

/// Exponent vectors of the given degree, in graded lexicographic order.
pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n - 1, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, degree, &mut Vec::new(), &mut out);
    }
    out
}

impl<T: crate::Real> NumPoly<T> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        NumPoly {
            nvars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_hompoly(p: &HomPoly) -> Self {
        let mut out = Self::zero(p.nvars(), p.degree());
        for (e, c) in p.terms() {
            out.coeffs.insert(e.clone(), c.embed());
        }
        out
    }

    pub fn coeff(&self, e: &[u32]) -> Complex<T> {
        self.coeffs
            .get(e)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.coeffs {
            let v = out.coeff(e) + c;
            out.coeffs.insert(e.clone(), v);
        }
        out
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = *v * s;
        }
        out
    }

    pub fn max_norm(&self) -> T {
        self.coeffs.values().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.degree + o.degree);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = out.coeff(&e) + c1 * c2;
                out.coeffs.insert(e, v);
            }
        }
        out
    }

    /// p(M X) times `scalar`.
    pub fn substitute(&self, m: &[Vec<Complex<T>>], scalar: Complex<T>) -> Self {
        let n = self.nvars;
        let one = {
            let mut p = Self::zero(n, 0);
            p.coeffs.insert(vec![0; n], Complex::new(T::one(), T::zero()));
            p
        };
        let images: Vec<Self> = m
            .iter()
            .map(|row| {
                let mut p = Self::zero(n, 1);
                for (j, c) in row.iter().enumerate() {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    p.coeffs.insert(e, *c);
                }
                p
            })
            .collect();
        let mut powers: Vec<Vec<Self>> = images.iter().map(|_| vec![one.clone()]).collect();
        let mut out = Self::zero(n, self.degree);
        for (e, c) in &self.coeffs {
            let mut t = one.scale(*c * scalar);
            for (i, &ei) in e.iter().enumerate() {
                while powers[i].len() <= ei as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][ei as usize]);
            }
            out = out.add(&t);
        }
        out.degree = self.degree;
        out
    }

    pub fn substitute_exact(&self, s: &LinearSub) -> Self {
        let m: Vec<Vec<Complex<T>>> = s
            .m
            .iter()
            .map(|r| r.iter().map(|c| c.embed()).collect())
            .collect();
        self.substitute(&m, s.scalar.embed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{int2, named, PU21_NAMES};

    fn x3() -> Vec<String> {
        x_vars(3)
    }

    #[test]
    fn substitute_examples() {
        let v = x3();
        let p = HomPoly::monomial(&v, vec![1, 1, 1], CycNum::one());
        assert_eq!(substitute(&p, &LinearSub::identity(3)).unwrap(), p);
        let x1c = HomPoly::monomial(&v, vec![0, 3, 0], CycNum::one());
        let mut s = LinearSub::identity(3);
        s.m[1][1] = -CycNum::rho();
        assert_eq!(substitute(&x1c, &s).unwrap(), x1c.scale(&-CycNum::one()));
        let v2 = x_vars(2);
        let q = HomPoly::linear(&v2, &[CycNum::one(), CycNum::one()]).pow(2);
        let swap = LinearSub::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(substitute(&q, &swap).unwrap(), q);
    }

    #[test]
    fn pu21_examples() {
        let v = x3();
        let r = named("R").unwrap();
        let p = HomPoly::monomial(&v, vec![2, 1, 0], CycNum::one());
        let img = act_pu21(&r, &p, 2).unwrap();
        let expect = HomPoly::monomial(&v, vec![0, 1, 2], -CycNum::one()).scale(&r.det());
        assert_eq!(img, expect);
        assert_eq!(r.det(), CycNum::one());
        let r1 = named("R1").unwrap();
        let p = HomPoly::monomial(&v, vec![0, 3, 0], CycNum::one());
        let img = act_pu21(&r1, &p, 2).unwrap();
        assert_eq!(img, p.scale(&CycNum::rho().pow(2)));
        assert!(act_pu21(&r1, &HomPoly::var(&v, 0), 2).is_err());
    }

    #[test]
    fn psl2_examples() {
        let v = x_vars(2);
        let s = int2("S").unwrap();
        // S: X0 -> X1, X1 -> -X0; for even degree this is P(-X1, X0)
        let img = act_psl2(&s, &HomPoly::var(&v, 0)).unwrap();
        assert_eq!(img, HomPoly::var(&v, 1));
        let t = int2("T").unwrap();
        let img = act_psl2(&t, &HomPoly::var(&v, 1)).unwrap();
        assert_eq!(img.to_string(), "(-1) * X0 + 1 * X1");
        assert!(act_psl2(&IntMat2::identity().neg(), &HomPoly::var(&v, 0)).is_ok());
        assert!(act_psl2(&crate::matgroup::IntMat([[2, 0], [0, 1]]), &HomPoly::var(&v, 0)).is_err());
    }

    #[test]
    fn text_round_trip() {
        let v = x3();
        let p: HomPoly = HomPoly::parse(&v, 3, "3 * X0^2 X1 + (-1/2 + z) * X2^3 + (-1) * X0 X1 X2").unwrap();
        assert_eq!(p.len(), 3);
        let t = p.to_string();
        assert_eq!(t, "3 * X0^2 X1 + (-1) * X0 X1 X2 + (-1/2 + z) * X2^3");
        assert_eq!(HomPoly::parse(&v, 3, &t).unwrap(), p);
    }

    #[test]
    fn two_form_all_generators() {
        for n in PU21_NAMES {
            let g = named(n).unwrap();
            let c = two_form_invariance(&g, 2);
            assert!(c.pass, "{n}: {c:?}");
        }
    }

    #[test]
    fn composition_order() {
        let v = x3();
        let g = named("P").unwrap();
        let h = named("R1").unwrap();
        let p = HomPoly::parse(&v, 3, "X0^2 X1 + rho * X1 X2^2 + X2^3").unwrap();
        let direct = act_pu21(&g.mul(&h), &p, 2).unwrap();
        let stepwise = act_pu21(&h, &act_pu21(&g, &p, 2).unwrap(), 2).unwrap();
        assert_eq!(direct, stepwise);
    }
}
