//! Panel quadrature of the Picard period polynomial over the chain D.
//!
//! D = L + R*L.  L is parameterized by (s, u) in [0, 2] x [0, u_max] as
//! [-1 - u/2 : a(s) : 1], oriented by ds ^ du, so dz1 ^ dz2 = a'(s)/2 ds du.
//! R*L is the reoriented R-image; with v = 2/(2 + u) in (0, 1] it is the
//! compact family [-v : a(s) v : 1] and contributes a'(s) v ds dv.

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;

use crate::chgeometry::{j3_a, Side};
use crate::cyclotomic::CycNum;
use crate::polyaction::{monomials, LinearSub, NumPoly};
use crate::thetaforms::{BallCoord, ThetaFunction};
use crate::{Error, C64};

/// a'(s) on the two legs of j3: -rho, then 1 (as a function of s, the
/// first leg is a = -rho (1 - s)).
fn j3_da(s: f64) -> C64 {
    if s < 1.0 {
        CycNum::rho().embed()
    } else {
        C64::new(1.0, 0.0)
    }
}

#[derive(Clone, Debug)]
pub struct IntegrandSpec {
    pub f: ThetaFunction,
    /// Weight; the polynomial degree is 3k - 3.
    pub k: u32,
    pub radius: u32,
    pub u_max: f64,
    /// Panel counts (n_s, n_u); n_s even so s = 1 is a panel edge.
    pub grid: (usize, usize),
    /// Gauss-Legendre points per panel direction.
    pub order: usize,
}

impl IntegrandSpec {
    pub fn new(f: ThetaFunction, k: u32) -> Self {
        IntegrandSpec {
            f,
            k,
            radius: 10,
            u_max: 16.0,
            grid: (32, 32),
            order: 3,
        }
    }

    pub fn degree(&self) -> u32 {
        (3 * self.k).saturating_sub(3)
    }

    fn validate(&self) -> Result<(), Error> {
        if self.k < 1 {
            return Err(Error::Domain("k must be at least 1".into()));
        }
        if !(self.u_max > 0.0) {
            return Err(Error::Domain("u_max must be positive".into()));
        }
        if self.grid.0 < 8 || self.grid.1 < 8 || self.grid.0 % 2 == 1 {
            return Err(Error::Domain("grid must be at least 8x8 with n_s even".into()));
        }
        if self.order < 2 {
            return Err(Error::Domain("order must be at least 2".into()));
        }
        Ok(())
    }
}

/// Moments m[a][b] = int f z1^a z2^b dz1 ^ dz2 with a + b <= n.
#[derive(Clone, Debug)]
struct Moments {
    n: u32,
    m: Vec<C64>,
}

impl Moments {
    fn zero(n: u32) -> Self {
        let len = ((n + 1) * (n + 2) / 2) as usize;
        Moments {
            n,
            m: vec![C64::new(0.0, 0.0); len],
        }
    }

    fn idx(a: u32, b: u32) -> usize {
        let d = a + b;
        (d * (d + 1) / 2 + b) as usize
    }

    fn add_sample(&mut self, z1: C64, z2: C64, w: C64) {
        let n = self.n;
        let mut p1 = w;
        for a in 0..=n {
            let mut p = p1;
            for b in 0..=n - a {
                self.m[Self::idx(a, b)] += p;
                p *= z2;
            }
            p1 *= z1;
        }
    }

    fn add(&mut self, o: &Moments) {
        for (x, y) in self.m.iter_mut().zip(&o.m) {
            *x += y;
        }
    }

    /// sum over a+b+c = n of n!/(a! b! c!) m[a][b] X0^a X1^b X2^c.
    fn to_poly(&self) -> NumPoly<f64> {
        let n = self.n;
        let mut fact = vec![1.0f64; n as usize + 1];
        for i in 1..=n as usize {
            fact[i] = fact[i - 1] * i as f64;
        }
        let mut p = NumPoly::zero(3, n);
        for e in monomials(3, n) {
            let c = fact[n as usize] / (fact[e[0] as usize] * fact[e[1] as usize] * fact[e[2] as usize]);
            p.coeffs.insert(e.clone(), self.m[Self::idx(e[0], e[1])] * c);
        }
        p
    }
}

fn gl_rule(order: usize) -> Result<Vec<(f64, f64)>, Error> {
    let r = GaussLegendre::new(order).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(r.as_node_weight_pairs().to_vec())
}

/// A sampled integrand value.
pub type Integrand<'a> = dyn Fn(&BallCoord<f64>) -> Result<C64, Error> + Sync + 'a;

struct Panel {
    s: (f64, f64),
    t: (f64, f64),
    row: usize,
}

fn panels(n_s: usize, n_t: usize, t_max: f64) -> Vec<Panel> {
    let mut out = Vec::with_capacity(n_s * n_t);
    for i in 0..n_s {
        for j in 0..n_t {
            let hs = 2.0 / n_s as f64;
            let ht = t_max / n_t as f64;
            out.push(Panel {
                s: (i as f64 * hs, (i + 1) as f64 * hs),
                t: (j as f64 * ht, (j + 1) as f64 * ht),
                row: j,
            });
        }
    }
    out
}

/// Integrates over one side; returns the moments of each t-row of panels.
fn integrate_side(
    f: &Integrand<'_>,
    n: u32,
    side: Side,
    grid: (usize, usize),
    t_max: f64,
    order: usize,
) -> Result<Vec<Moments>, Error> {
    let rule = gl_rule(order)?;
    let ps = panels(grid.0, grid.1, t_max);
    let parts: Vec<(usize, Moments)> = ps
        .par_iter()
        .map(|p| {
            let mut m = Moments::zero(n);
            for &(xs, ws) in &rule {
                let s = 0.5 * (p.s.0 + p.s.1) + 0.5 * (p.s.1 - p.s.0) * xs;
                let a = j3_a(s);
                let da = j3_da(s);
                for &(xt, wt) in &rule {
                    let t = 0.5 * (p.t.0 + p.t.1) + 0.5 * (p.t.1 - p.t.0) * xt;
                    let w = ws * wt * 0.25 * (p.s.1 - p.s.0) * (p.t.1 - p.t.0);
                    let (z1, z2, jac) = match side {
                        Side::L => (C64::new(-1.0 - t / 2.0, 0.0), a, da * 0.5),
                        Side::RL => (C64::new(-t, 0.0), a * t, da * t),
                    };
                    let v = f(&BallCoord::new(z1, z2))?;
                    if !(v.re.is_finite() && v.im.is_finite()) {
                        return Err(Error::Domain(format!(
                            "non-finite integrand at s = {s}, t = {t}"
                        )));
                    }
                    m.add_sample(z1, z2, v * jac * w);
                }
            }
            Ok((p.row, m))
        })
        .collect::<Result<_, Error>>()?;
    let mut rows: Vec<Moments> = (0..grid.1).map(|_| Moments::zero(n)).collect();
    for (row, m) in &parts {
        rows[*row].add(m);
    }
    Ok(rows)
}

fn sum_rows(rows: &[Moments], n: u32) -> Moments {
    let mut total = Moments::zero(n);
    for r in rows {
        total.add(r);
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodPoly3 {
    pub degree: u32,
    /// (exponents, [re, im]) in graded lex order.
    pub coeffs: Vec<(Vec<u32>, [f64; 2])>,
}

impl PeriodPoly3 {
    pub fn from_num(p: &NumPoly<f64>) -> Self {
        let mut coeffs: Vec<(Vec<u32>, [f64; 2])> =
            p.coeffs.iter().map(|(e, c)| (e.clone(), [c.re, c.im])).collect();
        coeffs.sort_by(|a, b| b.0.cmp(&a.0));
        PeriodPoly3 {
            degree: p.degree,
            coeffs,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DIntegral {
    pub l_side: NumPoly<f64>,
    pub rl_side: NumPoly<f64>,
    pub total: NumPoly<f64>,
    /// Max coefficient of the last u-panel row on L.
    pub tail_estimate: f64,
}

/// P_f over D with the L side truncated at u_max.
pub fn integrate_d(spec: &IntegrandSpec) -> Result<DIntegral, Error> {
    spec.validate()?;
    let f = |p: &BallCoord<f64>| spec.f.eval(p, spec.radius);
    integrate_d_with(&f, spec.degree(), spec.grid, spec.u_max, spec.order)
}

pub fn integrate_d_with(
    f: &Integrand<'_>,
    n: u32,
    grid: (usize, usize),
    u_max: f64,
    order: usize,
) -> Result<DIntegral, Error> {
    let rows = integrate_side(f, n, Side::L, grid, u_max, order)?;
    let rl = integrate_l_free_side(f, n, grid, order)?;
    let l_side = sum_rows(&rows, n).to_poly();
    let total = l_side.add(&rl);
    Ok(DIntegral {
        tail_estimate: rows[rows.len() - 1].to_poly().max_norm(),
        l_side,
        rl_side: rl,
        total,
    })
}

fn integrate_l_free_side(
    f: &Integrand<'_>,
    n: u32,
    grid: (usize, usize),
    order: usize,
) -> Result<NumPoly<f64>, Error> {
    Ok(sum_rows(&integrate_side(f, n, Side::RL, grid, 1.0, order)?, n).to_poly())
}

/// (X0, X1, X2) -> (X2, -X1, X0).
pub fn r_argument_sub() -> LinearSub {
    LinearSub::from_ints(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]])
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationResidual {
    pub relation: String,
    pub residual: f64,
    pub scale: f64,
    /// The R*L side against minus the R-transformed L side.
    pub side_residual: f64,
}

/// max |P(X) + P(X2, -X1, X0)| / max |P|; 0/0 counts as 0.
pub fn relation_residual(d: &DIntegral) -> RelationResidual {
    let sub = r_argument_sub();
    let p = &d.total;
    let r = p.add(&p.substitute_exact(&sub));
    let scale = p.max_norm();
    let rel = |num: f64, den: f64| if num == 0.0 { 0.0 } else { num / den };
    let side = d.rl_side.add(&d.l_side.substitute_exact(&sub));
    RelationResidual {
        relation: "e:R^2".into(),
        residual: rel(r.max_norm(), scale),
        scale,
        side_residual: rel(side.max_norm(), d.rl_side.max_norm().max(d.l_side.max_norm())),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub u_max: f64,
    pub l_norm: f64,
    pub rl_norm: f64,
    pub total_norm: f64,
    pub diff_from_previous: Option<f64>,
    pub tail_estimate: f64,
    pub relation_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceStudy {
    pub f: String,
    pub k: u32,
    pub radius: u32,
    pub grid: (usize, usize),
    pub rows: Vec<ConvergenceRow>,
    pub differences_decreasing: bool,
    /// Max change of the R*L side across u_max values.
    pub rl_variation: f64,
    /// |f| at s = 1/2 along L for u = 0, 2, 4, ... 32.
    pub decay_profile: Vec<(f64, f64)>,
    /// Least-squares slope of log|f| against log(1 + u) on the profile.
    pub decay_exponent: f64,
    pub decays: bool,
}

/// The L side is integrated once on panels of the spec's width
/// u_max / n_u out to the largest u in the list; each row of the table is
/// a partial sum, so every u must be a multiple of the panel width.
pub fn convergence_study(spec: &IntegrandSpec, u_list: &[f64]) -> Result<ConvergenceStudy, Error> {
    Ok(study(spec, u_list)?.0)
}

fn study(spec: &IntegrandSpec, u_list: &[f64]) -> Result<(ConvergenceStudy, Vec<DIntegral>), Error> {
    spec.validate()?;
    if u_list.is_empty() || u_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("u_list must be increasing".into()));
    }
    let h = spec.u_max / spec.grid.1 as f64;
    let counts = u_list
        .iter()
        .map(|&u| {
            let c = (u / h).round();
            if c < 1.0 || (c * h - u).abs() > 1e-9 * u {
                Err(Error::Domain(format!("u_max {u} is not a multiple of the panel width {h}")))
            } else {
                Ok(c as usize)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let f = |p: &BallCoord<f64>| spec.f.eval(p, spec.radius);
    let n = spec.degree();
    let n_max = counts[counts.len() - 1];
    let l_rows = integrate_side(&f, n, Side::L, (spec.grid.0, n_max), h * n_max as f64, spec.order)?;
    let rl = integrate_l_free_side(&f, n, spec.grid, spec.order)?;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let mut prev: Option<NumPoly<f64>> = None;
    let mut integrals = Vec::new();
    let mut rl_variation = 0.0f64;
    for (&u, &c) in u_list.iter().zip(&counts) {
        let l_side = sum_rows(&l_rows[..c], n).to_poly();
        let total = l_side.add(&rl);
        let d = DIntegral {
            l_side: l_side.clone(),
            rl_side: rl.clone(),
            total: total.clone(),
            tail_estimate: l_rows[c - 1].to_poly().max_norm(),
        };
        let diff = prev
            .as_ref()
            .map(|p| total.add(&p.scale(C64::new(-1.0, 0.0))).max_norm());
        rows.push(ConvergenceRow {
            u_max: u,
            l_norm: l_side.max_norm(),
            rl_norm: rl.max_norm(),
            total_norm: total.max_norm(),
            diff_from_previous: diff,
            tail_estimate: d.tail_estimate,
            relation_residual: relation_residual(&d).residual,
        });
        // the R*L part enters every row unchanged; this records the spread
        rl_variation = rl_variation.max(d.rl_side.add(&rl.scale(C64::new(-1.0, 0.0))).max_norm());
        prev = Some(total);
        integrals.push(d);
    }
    let diffs: Vec<f64> = rows.iter().filter_map(|r| r.diff_from_previous).collect();
    let differences_decreasing = diffs.len() >= 2 && diffs.windows(2).all(|w| w[1] < w[0]);
    let decay_profile = (0..=16)
        .map(|i| {
            let u = 2.0 * i as f64;
            let p = BallCoord::new(C64::new(-1.0 - u / 2.0, 0.0), j3_a(0.5));
            Ok((u, f(&p)?.norm()))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let decay_exponent = log_slope(&decay_profile);
    Ok((
        ConvergenceStudy {
            f: spec.f.label().into(),
            k: spec.k,
            radius: spec.radius,
            grid: spec.grid,
            rows,
            differences_decreasing,
            rl_variation,
            decays: decay_exponent < -1.0,
            decay_profile,
            decay_exponent,
        },
        integrals,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadratureReport {
    pub f: String,
    pub k: u32,
    pub degree: u32,
    pub radius: u32,
    pub u_max: f64,
    pub grid: (usize, usize),
    pub order: usize,
    pub tolerance: f64,
    pub polynomial: PeriodPoly3,
    pub tail_estimate: f64,
    pub residual: RelationResidual,
    pub convergence: ConvergenceStudy,
    pub rl_tolerance: f64,
    pub pass: bool,
}

/// The (e:R^2) residual at the spec's u_max plus the convergence table;
/// spec.u_max must be in u_list.
pub fn verify_quadrature(spec: &IntegrandSpec, u_list: &[f64], tol: f64) -> Result<QuadratureReport, Error> {
    let (conv, ints) = study(spec, u_list)?;
    let i = u_list
        .iter()
        .position(|&u| u == spec.u_max)
        .ok_or_else(|| Error::Domain(format!("u_max {} not in the study list", spec.u_max)))?;
    let d = &ints[i];
    let residual = relation_residual(d);
    let rl_tolerance = 1e-12;
    let pass = residual.residual < tol
        && conv.differences_decreasing
        && conv.rl_variation <= rl_tolerance;
    Ok(QuadratureReport {
        f: spec.f.label().into(),
        k: spec.k,
        degree: spec.degree(),
        radius: spec.radius,
        u_max: spec.u_max,
        grid: spec.grid,
        order: spec.order,
        tolerance: tol,
        polynomial: PeriodPoly3::from_num(&d.total),
        tail_estimate: d.tail_estimate,
        residual,
        convergence: conv,
        rl_tolerance,
        pass,
    })
}

fn log_slope(pts: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = pts.iter().map(|p| (1.0 + p.0).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.max(1e-300).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand() {
        // f = 1, degree 0: (a(2) - a(0)) (u_max/2 + 1/2)
        let f = |_: &BallCoord<f64>| Ok(C64::new(1.0, 0.0));
        let d = integrate_d_with(&f, 0, (8, 8), 4.0, 3).unwrap();
        let da = C64::new(1.0, 0.0) - (-CycNum::rho()).embed::<f64>();
        let want = da * 2.5;
        assert!((d.total.coeff(&[0, 0, 0]) - want).norm() < 1e-13);
    }

    #[test]
    fn zero_integrand() {
        let f = |_: &BallCoord<f64>| Ok(C64::new(0.0, 0.0));
        let d = integrate_d_with(&f, 3, (8, 8), 4.0, 3).unwrap();
        assert_eq!(d.total.max_norm(), 0.0);
        assert_eq!(relation_residual(&d).residual, 0.0);
    }

    #[test]
    fn polynomial_moment() {
        // f = z1 on L only, degree 0: int_0^2 a'/2 ds int_0^U (-1 - u/2) du
        let f = |p: &BallCoord<f64>| Ok(p.z1);
        let u = 6.0;
        let l = sum_rows(&integrate_side(&f, 0, Side::L, (8, 8), u, 3).unwrap(), 0);
        let da = C64::new(1.0, 0.0) - (-CycNum::rho()).embed::<f64>();
        let want = da * 0.5 * (-u - u * u / 4.0);
        assert!((l.m[0] - want).norm() < 1e-12);
    }

    #[test]
    fn linearity() {
        let f1 = |p: &BallCoord<f64>| Ok((p.z1 * p.z2).exp());
        let f2 = |p: &BallCoord<f64>| Ok(p.z2 * p.z2 + 1.0);
        let fs = |p: &BallCoord<f64>| Ok(f1(p)? + f2(p)?);
        let a = integrate_d_with(&f1, 3, (8, 8), 4.0, 3).unwrap();
        let b = integrate_d_with(&f2, 3, (8, 8), 4.0, 3).unwrap();
        let s = integrate_d_with(&fs, 3, (8, 8), 4.0, 3).unwrap();
        let diff = s.total.add(&a.total.add(&b.total).scale(C64::new(-1.0, 0.0)));
        assert!(diff.max_norm() < 1e-10);
    }
}
