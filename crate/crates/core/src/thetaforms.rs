//! Period matrix of the ball, theta constants, Runge's polynomials P6 and
//! P12, their exact invariance under the two generator substitutions, and
//! numerical modularity residuals.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::OnceLock;

use crate::cyclotomic::CycNum;
use crate::matgroup::{named, ProjMat};
use crate::polyaction::{substitute, HomPoly, LinearSub};
use crate::{Error, Real};

type C<T> = Complex<T>;

fn c<T: Real>(x: f64) -> T {
    T::from_f64(x).unwrap()
}

fn rho<T: Real>() -> C<T> {
    CycNum::rho().embed()
}

/// A point (z1, z2) of the ball 2 Re z1 + |z2|^2 < 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BallCoord<T> {
    pub z1: C<T>,
    pub z2: C<T>,
}

impl<T: Real> BallCoord<T> {
    pub fn new(z1: C<T>, z2: C<T>) -> Self {
        BallCoord { z1, z2 }
    }

    /// 2 Re z1 + |z2|^2; negative inside, zero on the boundary.
    pub fn ball_value(&self) -> T {
        c::<T>(2.0) * self.z1.re + self.z2.norm_sqr()
    }

    pub fn is_interior(&self) -> bool {
        self.ball_value() < T::zero()
    }

    /// Image under g acting on [z1 : z2 : 1].
    pub fn apply(&self, g: &ProjMat) -> Option<BallCoord<T>> {
        let m: Vec<Vec<C<T>>> = g
            .m
            .iter()
            .map(|r| r.iter().map(|x| x.embed()).collect())
            .collect();
        let v = [self.z1, self.z2, C::one()];
        let w: Vec<C<T>> = (0..3)
            .map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
            .collect();
        if w[2].norm() == T::zero() {
            return None;
        }
        Some(BallCoord::new(w[0] / w[2], w[1] / w[2]))
    }
}

/// j_g(z) = det g / (g20 z1 + g21 z2 + g22)^3.
pub fn jacobian_factor<T: Real>(g: &ProjMat, p: &BallCoord<T>) -> C<T> {
    let d: C<T> = g.det().embed();
    let l = g.m[2][0].embed::<T>() * p.z1 + g.m[2][1].embed::<T>() * p.z2 + g.m[2][2].embed::<T>();
    d / (l * l * l)
}

/// Random interior points with 2 Re z1 + |z2|^2 in [-2, -0.5].
pub fn random_interior_points(seed: u64, n: usize) -> Vec<BallCoord<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r: f64 = rng.gen_range(0.0..0.6);
            let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let z2 = C::from_polar(r, a);
            let depth: f64 = rng.gen_range(0.5..2.0);
            let re = -(z2.norm_sqr() + depth) / 2.0;
            let im: f64 = rng.gen_range(-1.0..1.0);
            BallCoord::new(C::new(re, im), z2)
        })
        .collect()
}

/// A symmetric complex 3x3 matrix with positive-definite imaginary part.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SiegelPoint<T> {
    pub omega: [[C<T>; 3]; 3],
    /// Eigenvalues of Im(omega), ascending.
    pub im_eigenvalues: [T; 3],
}

/// Eigenvalues of a real symmetric 3x3 matrix, ascending.
pub fn sym3_eigenvalues<T: Real>(a: [[T; 3]; 3]) -> [T; 3] {
    let three = c::<T>(3.0);
    let two = c::<T>(2.0);
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    let q = (a[0][0] + a[1][1] + a[2][2]) / three;
    if p1 == T::zero() {
        let mut d = [a[0][0], a[1][1], a[2][2]];
        d.sort_by(|x, y| x.partial_cmp(y).unwrap());
        return d;
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + two * p1;
    let p = (p2 / c::<T>(6.0)).sqrt();
    let mut b = a;
    for (i, row) in b.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (a[i][j] - if i == j { q } else { T::zero() }) / p;
        }
    }
    let det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det_b / two).max(-T::one()).min(T::one());
    let phi = r.acos() / three;
    let e1 = q + two * p * phi.cos();
    let e3 = q + two * p * (phi + two * T::PI() / three).cos();
    let e2 = three * q - e1 - e3;
    let mut e = [e1, e2, e3];
    e.sort_by(|x, y| x.partial_cmp(y).unwrap());
    e
}

/// The period matrix as displayed, without domain checks.
pub fn omega<T: Real>(p: &BallCoord<T>) -> [[C<T>; 3]; 3] {
    let r = rho::<T>();
    let r2 = r * r;
    let one = C::<T>::one();
    let two = C::new(c::<T>(2.0), T::zero());
    let (z1, z2) = (p.z1, p.z2);
    let a = (two * r2 * z1 + z2 * z2) / (one - r);
    let cc = (r2 * z1 - r * z2 * z2) / (r - one);
    let e = (two * z1 + z2 * z2) / ((one - r) * r);
    [[a, r2 * z2, cc], [r2 * z2, -r2, z2], [cc, z2, e]]
}

/// Omega(z1, z2); errors unless Im(Omega) is positive definite.
pub fn period_matrix<T: Real>(p: &BallCoord<T>) -> Result<SiegelPoint<T>, Error> {
    let om = omega(p);
    let im = [
        [om[0][0].im, om[0][1].im, om[0][2].im],
        [om[1][0].im, om[1][1].im, om[1][2].im],
        [om[2][0].im, om[2][1].im, om[2][2].im],
    ];
    let ev = sym3_eigenvalues(im);
    let scale = ev[2].abs().max(T::one());
    if ev[0] <= c::<T>(1e-12) * scale {
        return Err(Error::Domain(format!(
            "Im(Omega) is not positive definite (least eigenvalue {})",
            ev[0]
        )));
    }
    Ok(SiegelPoint {
        omega: om,
        im_eigenvalues: ev,
    })
}

/// The characteristic k/2 for k = 1, 2, 3 (vectors (1,0,0), (0,1,0), (1,1,0)).
pub fn characteristic(label: u8) -> Result<[f64; 3], Error> {
    match label {
        1 => Ok([0.5, 0.0, 0.0]),
        2 => Ok([0.0, 0.5, 0.0]),
        3 => Ok([0.5, 0.5, 0.0]),
        _ => Err(Error::Domain(format!("theta label {label} not in 1..3"))),
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThetaValue<T> {
    pub value: C<T>,
    pub radius: u32,
    /// Gaussian bound on the omitted lattice points.
    pub tail_estimate: T,
}

/// sum over n in Z^3, |n|_inf <= radius, of exp(2 pi i x^t Omega x),
/// x = n + k/2.  Summed in a fixed order for reproducibility.
pub fn theta_constant<T: Real>(
    label: u8,
    s: &SiegelPoint<T>,
    radius: u32,
) -> Result<ThetaValue<T>, Error> {
    if radius < 1 {
        return Err(Error::Domain("radius must be at least 1".into()));
    }
    let k = characteristic(label)?;
    let om = &s.omega;
    let two_pi_i = C::new(T::zero(), c::<T>(2.0) * T::PI());
    let r = radius as i64;
    let xs = |i: usize| -> Vec<T> { (-r..=r).map(|n| c::<T>(n as f64 + k[i])).collect() };
    let (x0s, x1s, x2s) = (xs(0), xs(1), xs(2));
    let two = c::<T>(2.0);
    let cutoff = c::<T>(-700.0);
    let mut total = C::<T>::zero();
    for &x0 in &x0s {
        for &x1 in &x1s {
            // exponent = a x2^2 + b x2 + cst
            let cst = two_pi_i * (om[0][0] * x0 * x0 + om[1][1] * x1 * x1 + om[0][1] * (two * x0 * x1));
            let b = two_pi_i * (om[0][2] * (two * x0) + om[1][2] * (two * x1));
            let a = two_pi_i * om[2][2];
            for &x2 in &x2s {
                let e = a * (x2 * x2) + b * x2 + cst;
                if e.re > cutoff {
                    total = total + e.exp();
                }
            }
        }
    }
    Ok(ThetaValue {
        value: total,
        radius,
        tail_estimate: theta_tail(s.im_eigenvalues[0], radius),
    })
}

/// Bound for lattice points outside the cube of radius R: each has
/// |x|^2 >= (R + 1/2)^2 and modulus exp(-2 pi lambda |x|^2).
pub fn theta_tail<T: Real>(lambda_min: T, radius: u32) -> T {
    let mut t = T::zero();
    let two_pi = c::<T>(2.0) * T::PI();
    for rr in radius + 1..radius + 60 {
        let rr_t = c::<T>(rr as f64);
        let shell = c::<T>(24.0) * rr_t * rr_t + c::<T>(2.0);
        let m = rr_t - c::<T>(0.5);
        t = t + shell * (-two_pi * lambda_min * m * m).exp();
    }
    t
}

/// (f1, f2, f3) at a ball point.
pub fn thetas_at<T: Real>(p: &BallCoord<T>, radius: u32) -> Result<[C<T>; 3], Error> {
    let s = period_matrix(p)?;
    Ok([
        theta_constant(1, &s, radius)?.value,
        theta_constant(2, &s, radius)?.value,
        theta_constant(3, &s, radius)?.value,
    ])
}

/// The 1-dimensional series sum_n exp(2 pi i (-rho^2) (n + delta)^2) left
/// at the boundary point [0:0:1], where Omega = diag(0, -rho^2, 0).
#[derive(Clone, Debug, Serialize)]
pub struct BoundarySeries<T> {
    pub delta: T,
    pub radius: u32,
    pub value: C<T>,
    /// Largest term modulus among n + delta != 0; below 1 when the series
    /// converges absolutely.
    pub max_nonzero_term: T,
}

pub fn boundary_series<T: Real>(delta: T, radius: u32) -> BoundarySeries<T> {
    let r2 = rho::<T>() * rho::<T>();
    let coef = C::new(T::zero(), c::<T>(2.0) * T::PI()) * (-r2);
    let mut v = C::<T>::zero();
    let mut mx = T::zero();
    let r = radius as i64;
    for n in -r..=r {
        let x = c::<T>(n as f64) + delta;
        let t = (coef * x * x).exp();
        v = v + t;
        if x != T::zero() {
            mx = mx.max(t.norm());
        }
    }
    BoundarySeries {
        delta,
        radius,
        value: v,
        max_nonzero_term: mx,
    }
}

/// Which Runge polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RungeName {
    P6,
    P12,
}

impl RungeName {
    pub fn degree(self) -> u32 {
        match self {
            RungeName::P6 => 6,
            RungeName::P12 => 12,
        }
    }

    pub fn expected_terms(self) -> usize {
        match self {
            RungeName::P6 => 28,
            RungeName::P12 => 91,
        }
    }

    fn asset(self) -> &'static str {
        match self {
            RungeName::P6 => include_str!("../data/runge_p6.txt"),
            RungeName::P12 => include_str!("../data/runge_p12.txt"),
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        match s.to_ascii_uppercase().as_str() {
            "P6" => Ok(RungeName::P6),
            "P12" => Ok(RungeName::P12),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// Which transcription of the garbled entries to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    Raw,
    Alternate,
}

pub fn theta_vars() -> Vec<String> {
    vec!["f1".into(), "f2".into(), "f3".into()]
}

/// One row of the coefficient table.
#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub exps: [u32; 3],
    pub raw: CycNum,
    pub alternate: Option<CycNum>,
}

pub fn runge_table(name: RungeName) -> Result<Vec<TableEntry>, Error> {
    let mut out = Vec::new();
    for line in name.asset().lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() < 2 {
            return Err(Error::Parse(format!("bad table line {line:?}")));
        }
        let e: Vec<u32> = fields[0]
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad exponent in {line:?}"))))
            .collect::<Result<_, _>>()?;
        if e.len() != 3 {
            return Err(Error::Parse(format!("bad exponents in {line:?}")));
        }
        let raw: CycNum = fields[1].parse()?;
        let alternate = match fields.get(2) {
            Some(f) => Some(
                f.strip_prefix("alt:")
                    .ok_or_else(|| Error::Parse(format!("bad alt field in {line:?}")))?
                    .trim()
                    .parse()?,
            ),
            None => None,
        };
        out.push(TableEntry {
            exps: [e[0], e[1], e[2]],
            raw,
            alternate,
        });
    }
    Ok(out)
}

pub fn runge_poly(name: RungeName, reading: Reading) -> Result<HomPoly, Error> {
    let vars = theta_vars();
    let mut p = HomPoly::zero(&vars, name.degree());
    for t in runge_table(name)? {
        if t.exps.iter().sum::<u32>() != name.degree() {
            return Err(Error::Parse(format!("entry {:?} has wrong degree", t.exps)));
        }
        let c = match (reading, t.alternate) {
            (Reading::Alternate, Some(a)) => a,
            _ => t.raw,
        };
        p.add_term(t.exps.to_vec(), c);
    }
    Ok(p)
}

/// The reading used for numerical work: the raw table if it is invariant,
/// else the alternate.
pub fn selected_reading(name: RungeName) -> Result<Reading, Error> {
    static P6: OnceLock<Result<Reading, Error>> = OnceLock::new();
    static P12: OnceLock<Result<Reading, Error>> = OnceLock::new();
    let cell = match name {
        RungeName::P6 => &P6,
        RungeName::P12 => &P12,
    };
    cell.get_or_init(|| runge_invariance(name).map(|r| r.selected))
        .clone()
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub invariant_up_to_scalar: bool,
    pub scalar: Option<CycNum>,
    pub scalar_root_of_unity_order: Option<u32>,
    pub same_degree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReadingCheck {
    pub reading: Reading,
    pub terms: usize,
    pub generators: Vec<GeneratorCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub name: RungeName,
    pub term_count_ok: bool,
    pub alternates: usize,
    pub readings: Vec<ReadingCheck>,
    pub selected: Reading,
    pub pass: bool,
}

fn check_reading(p: &HomPoly, reading: Reading) -> Result<ReadingCheck, Error> {
    let gens = ["G1", "G2"];
    let generators = gens
        .par_iter()
        .map(|g| {
            let m = named(g)?;
            let img = substitute(p, &LinearSub::from_proj(&m))?;
            let scalar = img.ratio_to(p);
            let order = scalar.as_ref().and_then(CycNum::root_of_unity_order);
            Ok(GeneratorCheck {
                generator: g.to_string(),
                invariant_up_to_scalar: order.is_some(),
                scalar,
                scalar_root_of_unity_order: order,
                same_degree: img.degree() == p.degree(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ReadingCheck {
        reading,
        terms: p.len(),
        pass: generators.iter().all(|g| g.invariant_up_to_scalar && g.same_degree),
        generators,
    })
}

/// Applies both generator substitutions f -> G f exactly and compares
/// with the original.
pub fn runge_invariance(name: RungeName) -> Result<InvarianceReport, Error> {
    let table = runge_table(name)?;
    let alternates = table.iter().filter(|t| t.alternate.is_some()).count();
    let raw = runge_poly(name, Reading::Raw)?;
    let mut readings = vec![check_reading(&raw, Reading::Raw)?];
    if alternates > 0 {
        let alt = runge_poly(name, Reading::Alternate)?;
        readings.push(check_reading(&alt, Reading::Alternate)?);
    }
    let selected = if readings[0].pass {
        Reading::Raw
    } else {
        readings
            .iter()
            .find(|r| r.pass)
            .map(|r| r.reading)
            .unwrap_or(Reading::Raw)
    };
    let pass = readings.iter().any(|r| r.pass);
    Ok(InvarianceReport {
        name,
        term_count_ok: table.len() == name.expected_terms(),
        alternates,
        readings,
        selected,
        pass,
    })
}

/// A function on the ball built from the theta constants.
#[derive(Clone, Debug)]
pub enum ThetaFunction {
    P6Squared(HomPoly),
    P12(HomPoly),
    /// A polynomial in f1, f2, f3.
    Custom(HomPoly),
    /// The constant function 1.
    One,
}

impl ThetaFunction {
    pub fn p6_squared() -> Result<Self, Error> {
        let p = runge_poly(RungeName::P6, selected_reading(RungeName::P6)?)?;
        Ok(ThetaFunction::P6Squared(p))
    }

    pub fn p12() -> Result<Self, Error> {
        let p = runge_poly(RungeName::P12, selected_reading(RungeName::P12)?)?;
        Ok(ThetaFunction::P12(p))
    }

    pub fn label(&self) -> &'static str {
        match self {
            ThetaFunction::P6Squared(_) => "P6^2",
            ThetaFunction::P12(_) => "P12",
            ThetaFunction::Custom(_) => "custom",
            ThetaFunction::One => "1",
        }
    }

    pub fn eval_thetas<T: Real>(&self, f: &[C<T>; 3]) -> C<T> {
        match self {
            ThetaFunction::P6Squared(p) => {
                let v = p.eval(f);
                v * v
            }
            ThetaFunction::P12(p) | ThetaFunction::Custom(p) => p.eval(f),
            ThetaFunction::One => C::one(),
        }
    }

    pub fn eval<T: Real>(&self, p: &BallCoord<T>, radius: u32) -> Result<C<T>, Error> {
        if let ThetaFunction::One = self {
            return Ok(C::one());
        }
        Ok(self.eval_thetas(&thetas_at(p, radius)?))
    }
}

/// Evaluates P6 or P12 at a ball point.
pub fn runge_eval<T: Real>(name: RungeName, p: &BallCoord<T>, radius: u32) -> Result<C<T>, Error> {
    let poly = runge_poly(name, selected_reading(name)?)?;
    Ok(poly.eval(&thetas_at(p, radius)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularityResidual {
    pub k: i64,
    pub max_residual: f64,
    pub used: usize,
    pub rejected: usize,
}

/// Values f(z) and f(g z) with j_g(z) at the usable samples.
pub struct ModularityData {
    pub values: Vec<(C<f64>, C<f64>, C<f64>)>,
    pub rejected: usize,
}

pub fn modularity_data(
    g: &ProjMat,
    f: &ThetaFunction,
    samples: &[BallCoord<f64>],
    radius: u32,
) -> Result<ModularityData, Error> {
    let res: Vec<Option<(C<f64>, C<f64>, C<f64>)>> = samples
        .par_iter()
        .map(|p| {
            let q = match p.apply(g) {
                Some(q) if q.is_interior() => q,
                _ => return Ok(None),
            };
            if period_matrix(&q).is_err() {
                return Ok(None);
            }
            let fz = f.eval(p, radius)?;
            let fgz = f.eval(&q, radius)?;
            Ok(Some((fz, fgz, jacobian_factor(g, p))))
        })
        .collect::<Result<_, Error>>()?;
    let rejected = res.iter().filter(|r| r.is_none()).count();
    Ok(ModularityData {
        values: res.into_iter().flatten().collect(),
        rejected,
    })
}

impl ModularityData {
    /// max |f(z) - j^k f(gz)| / max(1, |f(z)|).
    pub fn residual(&self, k: i64) -> f64 {
        self.values
            .iter()
            .map(|(fz, fgz, j)| {
                let r = *fz - j.powi(k as i32) * fgz;
                r.norm() / fz.norm().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

pub fn modularity_residual(
    g: &ProjMat,
    k: i64,
    f: &ThetaFunction,
    samples: &[BallCoord<f64>],
    radius: u32,
) -> Result<ModularityResidual, Error> {
    let d = modularity_data(g, f, samples, radius)?;
    Ok(ModularityResidual {
        k,
        max_residual: d.residual(k),
        used: d.values.len(),
        rejected: d.rejected,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightInference {
    pub best_k: i64,
    pub best_residual: f64,
    pub runner_up_residual: f64,
    /// log10(runner-up / best).
    pub separation_decades: f64,
    /// k = 0 is kept apart since it only fits invariant functions.
    pub residual_k0: f64,
    pub residuals: Vec<(i64, f64)>,
    pub used: usize,
    pub rejected: usize,
}

/// Scans k in 1..=12 and returns the k with the least residual.
pub fn weight_infer(
    g: &ProjMat,
    f: &ThetaFunction,
    samples: &[BallCoord<f64>],
    radius: u32,
) -> Result<WeightInference, Error> {
    let d = modularity_data(g, f, samples, radius)?;
    if d.values.is_empty() {
        return Err(Error::Domain("no usable samples".into()));
    }
    let residuals: Vec<(i64, f64)> = (1..=12).map(|k| (k, d.residual(k))).collect();
    let mut sorted = residuals.clone();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let (best_k, best_residual) = sorted[0];
    let runner_up_residual = sorted[1].1;
    Ok(WeightInference {
        best_k,
        best_residual,
        runner_up_residual,
        separation_decades: (runner_up_residual / best_residual.max(f64::MIN_POSITIVE)).log10(),
        residual_k0: d.residual(0),
        residuals,
        used: d.values.len(),
        rejected: d.rejected,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorWeight {
    pub generator: String,
    pub inference: WeightInference,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaReport {
    pub seed: u64,
    pub points: usize,
    pub positive_definite: usize,
    pub min_im_eigenvalue: f64,
    pub symmetric: bool,
    pub radii: (u32, u32),
    pub truncation_difference: f64,
    pub truncation_tolerance: f64,
    pub function: String,
    pub modularity_points: usize,
    pub modularity_radius: u32,
    pub modularity_tolerance: f64,
    pub weights: Vec<GeneratorWeight>,
    pub same_weight: bool,
    pub pass: bool,
}

/// Period matrices on `n` random points, theta truncation stability between
/// two radii, and weight inference for P6^2 under R1, R and P at five points.
pub fn verify_theta(seed: u64, n: usize) -> Result<ThetaReport, Error> {
    let pts = random_interior_points(seed, n);
    let radii = (8, 12);
    let truncation_tolerance = 1e-10;
    let per_point: Vec<Option<(f64, bool, f64)>> = pts
        .par_iter()
        .map(|p| {
            let s = match period_matrix(p) {
                Ok(s) => s,
                Err(_) => return Ok(None),
            };
            let sym = (0..3).all(|i| (0..3).all(|j| s.omega[i][j] == s.omega[j][i]));
            let mut diff = 0.0f64;
            for label in 1..=3 {
                let a = theta_constant(label, &s, radii.0)?.value;
                let b = theta_constant(label, &s, radii.1)?.value;
                diff = diff.max((a - b).norm() / b.norm().max(1.0));
            }
            Ok(Some((s.im_eigenvalues[0], sym, diff)))
        })
        .collect::<Result<_, Error>>()?;
    let ok: Vec<&(f64, bool, f64)> = per_point.iter().flatten().collect();
    let min_im_eigenvalue = ok.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    let symmetric = ok.iter().all(|x| x.1);
    let truncation_difference = ok.iter().map(|x| x.2).fold(0.0, f64::max);

    let f = ThetaFunction::p6_squared()?;
    let mpts = random_interior_points(seed.wrapping_add(1), 5);
    let modularity_radius = 10;
    let modularity_tolerance = 1e-6;
    let weights = ["R1", "R", "P"]
        .iter()
        .map(|g| {
            Ok(GeneratorWeight {
                generator: g.to_string(),
                inference: weight_infer(&named(g)?, &f, &mpts, modularity_radius)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let same_weight = weights.windows(2).all(|w| w[0].inference.best_k == w[1].inference.best_k);
    let pass = ok.len() == n
        && symmetric
        && truncation_difference < truncation_tolerance
        && same_weight
        && weights
            .iter()
            .all(|w| w.inference.best_residual < modularity_tolerance);
    Ok(ThetaReport {
        seed,
        points: n,
        positive_definite: ok.len(),
        min_im_eigenvalue,
        symmetric,
        radii,
        truncation_difference,
        truncation_tolerance,
        function: f.label().into(),
        modularity_points: mpts.len(),
        modularity_radius,
        modularity_tolerance,
        weights,
        same_weight,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_at_minus_one() {
        let p = BallCoord::new(C::new(-1.0, 0.0), C::new(0.0, 0.0));
        let s = period_matrix(&p).unwrap();
        let r: C<f64> = rho();
        let r2 = r * r;
        let one = C::new(1.0, 0.0);
        let close = |a: C<f64>, b: C<f64>| (a - b).norm() < 1e-14;
        assert!(close(s.omega[1][1], -r2));
        assert!(close(s.omega[0][1], C::new(0.0, 0.0)));
        assert!(close(s.omega[0][0], r2 * -2.0 / (one - r)));
        assert!(close(s.omega[0][2], -r2 / (r - one)));
        assert!(close(s.omega[2][2], C::new(-2.0, 0.0) / ((one - r) * r)));
        assert!(s.im_eigenvalues[0] > 0.0);
    }

    #[test]
    fn boundary_point_rejected() {
        let p = BallCoord::new(C::new(0.0, 0.0), C::new(0.0, 0.0));
        assert!(period_matrix(&p).is_err());
        let om = omega(&p);
        assert!(om[0][0].norm() < 1e-15 && om[2][2].norm() < 1e-15);
    }

    #[test]
    fn eigenvalues_match_diagonal() {
        let e = sym3_eigenvalues([[2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 5.0]]);
        assert_eq!(e, [-1.0, 2.0, 5.0]);
        let e: [f64; 3] = sym3_eigenvalues([[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12 && (e[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn tables_complete() {
        assert_eq!(runge_table(RungeName::P6).unwrap().len(), 28);
        assert_eq!(runge_table(RungeName::P12).unwrap().len(), 91);
    }

    #[test]
    fn boundary_series_converges() {
        let b = boundary_series(0.5f64, 10);
        assert!(b.max_nonzero_term < 1.0);
        let b2 = boundary_series(0.5f64, 20);
        assert!((b.value - b2.value).norm() < 1e-12);
    }
}
