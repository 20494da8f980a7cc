//! The complex hyperbolic ball in Siegel form: projective points, the
//! horospherical and geographical charts, fixed points, the spine j3, the
//! integration domain D and exact checks of the incidence claims used in
//! the period relations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomic::CycNum;
use crate::matgroup::{eval_str, named, ProjMat};
use crate::thetaforms::BallCoord;
use crate::{Error, Real};

type C<T> = Complex<T>;

fn c<T: Real>(x: f64) -> T {
    T::from_f64(x).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// Sign of a real element of Q(zeta12), exactly zero or by its embedding.
fn real_sign(x: &CycNum) -> i8 {
    if x.is_zero() {
        return 0;
    }
    let v: C<f64> = x.embed();
    if v.re > 0.0 {
        1
    } else {
        -1
    }
}

/// <v, w> = v0 conj(w2) + v1 conj(w1) + v2 conj(w0).
pub fn hermitian(v: &[CycNum; 3], w: &[CycNum; 3]) -> CycNum {
    &v[0] * &w[2].conj() + &v[1] * &w[1].conj() + &v[2] * &w[0].conj()
}

/// An exact homogeneous point [v0 : v1 : v2].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoint {
    pub v: [CycNum; 3],
}

impl ExactPoint {
    pub fn new(v: [CycNum; 3]) -> Result<Self, Error> {
        if v.iter().all(Zero::is_zero) {
            return Err(Error::Domain("all coordinates zero".into()));
        }
        Ok(ExactPoint { v })
    }

    pub fn q_inf() -> Self {
        ExactPoint {
            v: [CycNum::one(), CycNum::zero(), CycNum::zero()],
        }
    }

    pub fn origin() -> Self {
        ExactPoint {
            v: [CycNum::zero(), CycNum::zero(), CycNum::one()],
        }
    }

    /// Equality up to a nonzero scalar.
    pub fn proj_eq(&self, o: &ExactPoint) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| &self.v[i] * &o.v[j] == &self.v[j] * &o.v[i])
        })
    }

    /// Representative with the last nonzero coordinate equal to 1.
    pub fn normalized(&self) -> ExactPoint {
        let k = (0..3).rev().find(|&i| !self.v[i].is_zero()).unwrap();
        let d = self.v[k].inv().unwrap();
        ExactPoint {
            v: std::array::from_fn(|i| &self.v[i] * &d),
        }
    }

    pub fn apply(&self, g: &ProjMat) -> ExactPoint {
        ExactPoint {
            v: std::array::from_fn(|i| (0..3).map(|j| &g.m[i][j] * &self.v[j]).sum()),
        }
    }

    pub fn location(&self) -> Location {
        match real_sign(&hermitian(&self.v, &self.v)) {
            -1 => Location::Interior,
            0 => Location::Boundary,
            _ => Location::Exterior,
        }
    }

    pub fn embed<T: Real>(&self) -> ProjPoint<T> {
        ProjPoint {
            v: std::array::from_fn(|i| self.v[i].embed()),
        }
    }
}

impl fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        write!(f, "[{} : {} : {}]", n.v[0], n.v[1], n.v[2])
    }
}

impl FromStr for ExactPoint {
    type Err = Error;

    /// "[-1 : -rho : 1]"; "inf" or "q_inf" for [1:0:0].
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t == "inf" || t == "q_inf" || t == "∞" {
            return Ok(Self::q_inf());
        }
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("point {s:?} needs brackets")))?;
        let parts: Vec<&str> = inner.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("point {s:?} needs three coordinates")));
        }
        let v = [parts[0].parse()?, parts[1].parse()?, parts[2].parse()?];
        ExactPoint::new(v)
    }
}

impl Serialize for ExactPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

/// A numerical homogeneous point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjPoint<T> {
    pub v: [C<T>; 3],
}

impl<T: Real> ProjPoint<T> {
    pub fn from_ball(p: &BallCoord<T>) -> Self {
        ProjPoint {
            v: [p.z1, p.z2, C::one()],
        }
    }

    pub fn to_ball(&self) -> Result<BallCoord<T>, Error> {
        if self.v[2].norm() == T::zero() {
            return Err(Error::Domain("point at infinity has no affine chart".into()));
        }
        Ok(BallCoord::new(self.v[0] / self.v[2], self.v[1] / self.v[2]))
    }

    pub fn apply(&self, g: &ProjMat) -> Self {
        ProjPoint {
            v: std::array::from_fn(|i| {
                (0..3).fold(C::zero(), |acc, j| acc + g.m[i][j].embed::<T>() * self.v[j])
            }),
        }
    }

    /// <v, v> / |v|^2, negative inside the ball.
    pub fn form_value(&self) -> T {
        let v = &self.v;
        let h = c::<T>(2.0) * (v[0] * v[2].conj()).re + v[1].norm_sqr();
        h / (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr())
    }

    pub fn location(&self, tol: T) -> Location {
        let h = self.form_value();
        if h < -tol {
            Location::Interior
        } else if h > tol {
            Location::Exterior
        } else {
            Location::Boundary
        }
    }

    /// Largest 2x2 minor after scaling both points to unit length.
    pub fn distance(&self, o: &ProjPoint<T>) -> T {
        let n = |p: &ProjPoint<T>| {
            (p.v[0].norm_sqr() + p.v[1].norm_sqr() + p.v[2].norm_sqr()).sqrt()
        };
        let (a, b) = (n(self), n(o));
        let mut m = T::zero();
        for i in 0..3 {
            for j in i + 1..3 {
                let d = (self.v[i] * o.v[j] - self.v[j] * o.v[i]).norm() / (a * b);
                m = m.max(d);
            }
        }
        m
    }
}

/// Horospherical coordinates (a, t, u) on N x R+.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HoroCoord<T> {
    pub a: C<T>,
    pub t: T,
    pub u: T,
}

impl<T: Real> HoroCoord<T> {
    pub fn new(a: C<T>, t: T, u: T) -> Self {
        HoroCoord { a, t, u }
    }

    /// [(-|a|^2 - u + i t)/2 : a : 1].
    pub fn to_proj(&self) -> ProjPoint<T> {
        let z1 = C::new(-(self.a.norm_sqr() + self.u), self.t) / c::<T>(2.0);
        ProjPoint {
            v: [z1, self.a, C::one()],
        }
    }

    pub fn from_proj(p: &ProjPoint<T>) -> Result<Self, Error> {
        let b = p.to_ball()?;
        Ok(HoroCoord {
            a: b.z2,
            t: c::<T>(2.0) * b.z1.im,
            u: -(c::<T>(2.0) * b.z1.re + b.z2.norm_sqr()),
        })
    }

    /// ||a|^2 + u + i t| - 2, zero on the isometric sphere of R.
    pub fn s_r_defect(&self) -> T {
        C::new(self.a.norm_sqr() + self.u, self.t).norm() - c::<T>(2.0)
    }
}

/// Geographical coordinates on the isometric sphere of R:
/// z1 = -e^(i theta), z2 = r e^(i alpha + i theta / 2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeoCoord<T> {
    pub r: T,
    pub theta: T,
    pub alpha: T,
}

impl<T: Real> GeoCoord<T> {
    pub fn new(r: T, theta: T, alpha: T) -> Self {
        GeoCoord { r, theta, alpha }
    }

    pub fn in_range(&self) -> bool {
        let h = T::FRAC_PI_2();
        let rmax = (c::<T>(2.0) * self.theta.cos()).max(T::zero()).sqrt();
        self.theta >= -h
            && self.theta <= h
            && self.alpha >= -h
            && self.alpha < h
            && self.r.abs() <= rmax
    }

    pub fn to_ball(&self) -> BallCoord<T> {
        let z1 = -C::from_polar(T::one(), self.theta);
        let z2 = C::from_polar(self.r, self.alpha + self.theta / c::<T>(2.0));
        BallCoord::new(z1, z2)
    }

    /// Inverse of [`GeoCoord::to_ball`] for points with |z1| = 1 to `tol`.
    pub fn from_ball(p: &BallCoord<T>, tol: T) -> Result<Self, Error> {
        if (p.z1.norm() - T::one()).abs() > tol {
            return Err(Error::Domain("point is not on the isometric sphere of R".into()));
        }
        let theta = (-p.z1).arg();
        if theta.abs() > T::FRAC_PI_2() + tol {
            return Err(Error::Domain("theta outside [-pi/2, pi/2]".into()));
        }
        let w = p.z2 * C::from_polar(T::one(), -theta / c::<T>(2.0));
        let (mut r, mut alpha) = (w.norm(), w.arg());
        if r == T::zero() {
            alpha = T::zero();
        }
        let h = T::FRAC_PI_2();
        if alpha >= h {
            alpha = alpha - T::PI();
            r = -r;
        } else if alpha < -h {
            alpha = alpha + T::PI();
            r = -r;
        }
        Ok(GeoCoord { r, theta, alpha })
    }
}

/// |<q_inf, z>| = |<q_inf, R z>| with z = [z1 : z2 : 1], i.e. |z1| = 1.
pub fn on_s_r<T: Real>(p: &BallCoord<T>, tol: T) -> bool {
    (p.z1.norm() - T::one()).abs() <= tol
}

/// Exact null space of a 3x3 matrix over Q(zeta12).
fn null_space(a: &[[CycNum; 3]; 3]) -> Vec<[CycNum; 3]> {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..3 {
        let Some(p) = (row..3).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().unwrap();
        for j in 0..3 {
            m[row][j] = &m[row][j] * &inv;
        }
        for r in 0..3 {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..3 {
                    m[r][j] = &m[r][j] - &(&f * &m[row][j]);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..3).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v: [CycNum; 3] = std::array::from_fn(|_| CycNum::zero());
            v[f] = CycNum::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Coefficients of det(x I - g) = x^3 + c2 x^2 + c1 x + c0.
fn char_poly(g: &ProjMat) -> [CycNum; 3] {
    let a = &g.m;
    let tr = &a[0][0] + &a[1][1] + &a[2][2];
    let m2 = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0] + &a[0][0] * &a[2][2]
        - &a[0][2] * &a[2][0]
        + &a[1][1] * &a[2][2]
        - &a[1][2] * &a[2][1];
    [-g.det(), m2, -tr]
}

#[derive(Clone, Debug, Serialize)]
pub struct Eigenspace {
    pub eigenvalue: String,
    pub algebraic_multiplicity: u32,
    /// Projective points spanning the eigenspace (two points span a line).
    pub basis: Vec<String>,
    pub locations: Vec<Location>,
    pub defective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointReport {
    pub element: String,
    /// "exact" when the characteristic polynomial splits over Q(zeta12).
    pub path: String,
    pub eigenspaces: Vec<Eigenspace>,
}

/// Projective fixed points of g with their location in the ball.
pub fn fixed_points(name: &str, g: &ProjMat) -> FixedPointReport {
    // roots among the 12th roots of unity, with multiplicity
    let cp = char_poly(g);
    let mut poly: Vec<CycNum> = vec![cp[0].clone(), cp[1].clone(), cp[2].clone(), CycNum::one()];
    let mut roots: Vec<(CycNum, u32)> = Vec::new();
    for k in 0..12 {
        let lam = CycNum::zeta_pow(k);
        loop {
            if poly.len() < 2 {
                break;
            }
            // synthetic division by (x - lam)
            let n = poly.len() - 1;
            let mut q = vec![CycNum::zero(); n];
            let mut carry = CycNum::zero();
            for i in (0..=n).rev() {
                let v = &poly[i] + &(&carry * &lam);
                if i == 0 {
                    carry = v;
                } else {
                    q[i - 1] = v.clone();
                    carry = v;
                }
            }
            if !carry.is_zero() {
                break;
            }
            poly = q;
            match roots.iter_mut().find(|(r, _)| *r == lam) {
                Some(e) => e.1 += 1,
                None => roots.push((lam.clone(), 1)),
            }
        }
    }
    let split = roots.iter().map(|r| r.1).sum::<u32>() == 3;
    if split {
        let eigenspaces = roots
            .iter()
            .map(|(lam, mult)| {
                let a: [[CycNum; 3]; 3] = std::array::from_fn(|i| {
                    std::array::from_fn(|j| {
                        if i == j {
                            &g.m[i][j] - lam
                        } else {
                            g.m[i][j].clone()
                        }
                    })
                });
                let pts: Vec<ExactPoint> = null_space(&a)
                    .into_iter()
                    .map(|v| ExactPoint::new(v).unwrap())
                    .collect();
                Eigenspace {
                    eigenvalue: lam.to_string(),
                    algebraic_multiplicity: *mult,
                    defective: (pts.len() as u32) < *mult,
                    basis: pts.iter().map(|p| p.to_string()).collect(),
                    locations: pts.iter().map(ExactPoint::location).collect(),
                }
            })
            .collect();
        return FixedPointReport {
            element: name.into(),
            path: "exact".into(),
            eigenspaces,
        };
    }
    FixedPointReport {
        element: name.into(),
        path: "numeric".into(),
        eigenspaces: numeric_eigenspaces(g),
    }
}

fn numeric_eigenspaces(g: &ProjMat) -> Vec<Eigenspace> {
    let cp = char_poly(g);
    let coef: Vec<C<f64>> = cp.iter().map(|x| x.embed()).collect();
    // Durand-Kerner on the monic cubic
    let f = |x: C<f64>| ((x + coef[2]) * x + coef[1]) * x + coef[0];
    let mut z = [C::new(0.4, 0.9), C::new(0.4, 0.9).powu(2), C::new(0.4, 0.9).powu(3)];
    for _ in 0..500 {
        for i in 0..3 {
            let mut d = C::new(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    d *= z[i] - z[j];
                }
            }
            z[i] -= f(z[i]) / d;
        }
    }
    let m: Vec<Vec<C<f64>>> = g.m.iter().map(|r| r.iter().map(|x| x.embed()).collect()).collect();
    z.iter()
        .map(|&lam| {
            let rows: Vec<[C<f64>; 3]> = (0..3)
                .map(|i| std::array::from_fn(|j| m[i][j] - if i == j { lam } else { C::zero() }))
                .collect();
            let cross = |a: &[C<f64>; 3], b: &[C<f64>; 3]| -> [C<f64>; 3] {
                [
                    a[1] * b[2] - a[2] * b[1],
                    a[2] * b[0] - a[0] * b[2],
                    a[0] * b[1] - a[1] * b[0],
                ]
            };
            let cands = [cross(&rows[0], &rows[1]), cross(&rows[0], &rows[2]), cross(&rows[1], &rows[2])];
            let nrm = |v: &[C<f64>; 3]| v.iter().map(|x| x.norm_sqr()).sum::<f64>();
            let best = cands
                .iter()
                .max_by(|a, b| nrm(a).partial_cmp(&nrm(b)).unwrap())
                .unwrap();
            let p = ProjPoint { v: *best };
            Eigenspace {
                eigenvalue: format!("{:.12}", lam),
                algebraic_multiplicity: 1,
                basis: vec![format!(
                    "[{:.12} : {:.12} : {:.12}]",
                    best[0], best[1], best[2]
                )],
                locations: vec![p.location(1e-12)],
                defective: false,
            }
        })
        .collect()
}

/// Point check "g fixes p" or "g maps p to q".
#[derive(Clone, Debug, Serialize)]
pub struct IncidenceCheck {
    pub id: String,
    pub element: String,
    pub from: ExactPoint,
    pub expected: ExactPoint,
    pub image: ExactPoint,
    pub pass: bool,
}

pub fn incidence(id: &str, word: &str, from: &str, to: &str) -> Result<IncidenceCheck, Error> {
    let g = eval_str(word)?;
    let p: ExactPoint = from.parse()?;
    let q: ExactPoint = to.parse()?;
    let img = p.apply(&g);
    Ok(IncidenceCheck {
        id: id.into(),
        element: word.into(),
        pass: img.proj_eq(&q),
        from: p,
        expected: q,
        image: img.normalized(),
    })
}

/// The fixed points named in the text, checked pointwise.
pub fn named_fixed_points() -> Result<Vec<IncidenceCheck>, Error> {
    let list = [
        ("R1", "[0:0:1]"),
        ("R1", "inf"),
        ("R1", "[-1:0:1]"),
        ("R", "[-1:0:1]"),
        ("R2", "[0:0:1]"),
        ("R2", "[-1:-rho:1]"),
        ("R3", "inf"),
        ("R3", "[-1:1:1]"),
    ];
    list.iter()
        .map(|(g, p)| incidence(&format!("{g} fixes {p}"), g, p, p))
        .collect()
}

/// q_inf -> [0:0:1] -> [rho^2:1:1] -> q_inf under R P.
pub fn rp_cusp_cycle() -> Result<Vec<IncidenceCheck>, Error> {
    let pts = ["inf", "[0:0:1]", "[rho^2:1:1]", "inf"];
    pts.windows(2)
        .enumerate()
        .map(|(i, w)| incidence(&format!("RP cusp {}", i + 1), "R P", w[0], w[1]))
        .collect()
}

/// The spine j3 in horospherical coordinates, s in [0, 2]:
/// (e^(-i pi/3)(1 - s), 0, 2 - (1 - s)^2) then (s - 1, 0, 2 - (s - 1)^2).
pub fn j3_param<T: Real>(s: T) -> Result<HoroCoord<T>, Error> {
    let two = c::<T>(2.0);
    if s < T::zero() || s > two {
        return Err(Error::Domain(format!("j3 parameter {s} outside [0, 2]")));
    }
    let a = j3_a(s);
    Ok(HoroCoord::new(a, T::zero(), two - a.norm_sqr()))
}

/// The second coordinate of the j3 point with parameter s.
pub fn j3_a<T: Real>(s: T) -> C<T> {
    if s <= T::one() {
        C::from_polar(T::one() - s, -T::PI() / c::<T>(3.0))
    } else {
        C::new(s - T::one(), T::zero())
    }
}

/// Exact j3 coordinate a(s) for rational s: -rho (1 - s) or s - 1.
pub fn j3_a_exact(s: &CycNum) -> CycNum {
    let one = CycNum::one();
    let s_val: C<f64> = s.embed();
    if s_val.re <= 1.0 {
        -(CycNum::rho() * (&one - s))
    } else {
        s - &one
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    L,
    #[serde(rename = "R*L")]
    RL,
}

/// Point of D: [-1 - u/2 : a(s) : 1] on L, [-2/(2+u) : 2a(s)/(2+u) : 1] on R*L.
pub fn domain_d_param<T: Real>(s: T, u: T, side: Side) -> Result<ProjPoint<T>, Error> {
    if u < T::zero() {
        return Err(Error::Domain("u must be non-negative".into()));
    }
    let a = j3_param(s)?.a;
    let two = c::<T>(2.0);
    let v = match side {
        Side::L => [C::new(-T::one() - u / two, T::zero()), a, C::one()],
        Side::RL => [
            C::new(-two / (two + u), T::zero()),
            a * (two / (two + u)),
            C::one(),
        ],
    };
    Ok(ProjPoint { v })
}

/// Exact version of [`domain_d_param`] for s, u in Q.
pub fn domain_d_exact(s: &CycNum, u: &CycNum, side: Side) -> Result<ExactPoint, Error> {
    let a = j3_a_exact(s);
    let one = CycNum::one();
    let two = CycNum::from_int(2);
    let v = match side {
        Side::L => [-(&one + &(u / &two)), a, one],
        Side::RL => {
            let d = (&two + u).inv()?;
            [-(&two * &d), &two * &a * &d, one]
        }
    };
    ExactPoint::new(v)
}

/// An arrow m_alpha -> m_beta of a pentagon chain.
#[derive(Clone, Debug, Serialize)]
pub struct GeodesicArrow {
    pub element: String,
    pub from: ExactPoint,
    pub to: ExactPoint,
    pub base_image: ExactPoint,
    pub fixes_q_inf: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub id: String,
    pub reading: String,
    pub arrows: Vec<GeodesicArrow>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicTableReport {
    pub chains: Vec<ChainReport>,
    pub hexagon_vertices: Vec<String>,
    /// The vertex set drawn in the schematic.
    pub figure_vertices: Vec<String>,
    pub hexagon_matches_figure: bool,
    pub pass: bool,
}

fn chain(id: &str, reading: &str, pts: &[&str], gens: &[&str]) -> Result<ChainReport, Error> {
    let arrows = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let m = eval_str(g)?;
            let from: ExactPoint = pts[i].parse()?;
            let to: ExactPoint = pts[i + 1].parse()?;
            let img = from.apply(&m);
            let fixes = ExactPoint::q_inf().apply(&m).proj_eq(&ExactPoint::q_inf());
            Ok(GeodesicArrow {
                element: g.to_string(),
                pass: fixes && img.proj_eq(&to),
                base_image: img.normalized(),
                fixes_q_inf: fixes,
                from,
                to,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ChainReport {
        id: id.into(),
        reading: reading.into(),
        pass: arrows.iter().all(|a| a.pass),
        arrows,
    })
}

/// Both pentagon chains, arrow by arrow; chain 1 also in the reading with
/// [-1 : -rho : 1] in place of [-1 : rho : 1].
pub fn geodesic_table_check() -> Result<GeodesicTableReport, Error> {
    let gens = ["P", "R1^-1", "P^-1", "R1^-1", "P"];
    let c1 = ["[-1:-rho:1]", "[-1:1:1]", "[-1:rho:1]", "[rho^2:0:1]", "[rho^2:0:1]", "[-1:-rho:1]"];
    let c1_alt = ["[-1:-rho:1]", "[-1:1:1]", "[-1:-rho:1]", "[rho^2:0:1]", "[rho^2:0:1]", "[-1:-rho:1]"];
    let c2 = ["[-1:1:1]", "[rho:0:1]", "[rho:0:1]", "[-1:1:1]", "[-1:-rho:1]", "[-1:1:1]"];
    let chains = vec![
        chain("chain1", "printed", &c1, &gens)?,
        chain("chain1", "alternate", &c1_alt, &gens)?,
        chain("chain2", "printed", &c2, &gens)?,
    ];
    // vertices met by the leading and trailing edges, chain 1 as printed
    let mut verts: Vec<ExactPoint> = Vec::new();
    for p in c1.iter().chain(c2.iter()) {
        let e: ExactPoint = p.parse()?;
        if !verts.iter().any(|v| v.proj_eq(&e)) && !e.proj_eq(&"[-1:-rho:1]".parse()?) {
            verts.push(e);
        }
    }
    let figure = ["[-1:rho:1]", "[-1:1:1]", "[rho:0:1]", "[rho^2:0:1]"];
    let fig: Vec<ExactPoint> = figure.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let matches = verts.len() == fig.len() && fig.iter().all(|f| verts.iter().any(|v| v.proj_eq(f)));
    let pass = chains[1].pass && chains[2].pass;
    Ok(GeodesicTableReport {
        hexagon_vertices: verts.iter().map(|v| v.to_string()).collect(),
        figure_vertices: fig.iter().map(|v| v.to_string()).collect(),
        hexagon_matches_figure: matches,
        chains,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReflectionCheck {
    pub samples: usize,
    pub max_defect: f64,
    pub s_r_invariance_defect: f64,
    pub theta_zero_fixed_defect: f64,
    pub off_axis_min_move: f64,
    pub pass: bool,
}

/// R maps (r, theta, alpha) to (r, -theta, alpha) on a grid of `n` points.
pub fn r_reflection_check(n: usize, tol: f64) -> Result<ReflectionCheck, Error> {
    let r_mat = named("R")?;
    let side = (n as f64).sqrt().ceil() as usize;
    let mut grid = Vec::new();
    'outer: for i in 0..side {
        for j in 0..side {
            if grid.len() == n {
                break 'outer;
            }
            let theta = -1.4 + 2.8 * (i as f64 + 0.5) / side as f64;
            let alpha = -1.5 + 3.0 * (j as f64 + 0.5) / side as f64;
            let rmax = (2.0 * f64::cos(theta)).sqrt();
            let r = rmax * (0.9 * ((i * 7 + j * 3) % 11) as f64 / 10.0 - 0.45);
            grid.push(GeoCoord::new(r, theta, alpha));
        }
    }
    let mut max_defect = 0.0f64;
    let mut sr_defect = 0.0f64;
    for g in &grid {
        let p = g.to_ball();
        let img = ProjPoint::from_ball(&p).apply(&r_mat).to_ball()?;
        let want = GeoCoord::new(g.r, -g.theta, g.alpha).to_ball();
        max_defect = max_defect.max((img.z1 - want.z1).norm()).max((img.z2 - want.z2).norm());
        sr_defect = sr_defect.max((img.z1.norm() - 1.0).abs());
    }
    // theta = 0 is fixed; theta != 0 moves
    let mut fixed_defect = 0.0f64;
    let mut min_move = f64::INFINITY;
    for k in 0..n {
        let alpha = -1.5 + 3.0 * (k as f64 + 0.5) / n as f64;
        let r = 1.2 * ((k % 9) as f64 / 8.0 - 0.5);
        let p = ProjPoint::from_ball(&GeoCoord::new(r, 0.0, alpha).to_ball());
        fixed_defect = fixed_defect.max(p.distance(&p.apply(&r_mat)));
        let q = ProjPoint::from_ball(&GeoCoord::new(r, 0.3, alpha).to_ball());
        min_move = min_move.min(q.distance(&q.apply(&r_mat)));
    }
    Ok(ReflectionCheck {
        samples: grid.len(),
        pass: max_defect < tol && sr_defect < tol && fixed_defect < tol && min_move > 1e-3,
        max_defect,
        s_r_invariance_defect: sr_defect,
        theta_zero_fixed_defect: fixed_defect,
        off_axis_min_move: min_move,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EndpointCheck {
    pub id: String,
    pub pass: bool,
}

/// j3 endpoints, the L / R*L boundary points and R(L) = R*L, exactly.
pub fn domain_identities() -> Result<Vec<EndpointCheck>, Error> {
    let mut out = Vec::new();
    let named_pts = [("0", "[-1:-rho:1]"), ("1", "[-1:0:1]"), ("2", "[-1:1:1]")];
    for (s, p) in named_pts {
        let sv: CycNum = s.parse()?;
        let a = j3_a_exact(&sv);
        let pt = ExactPoint::new([CycNum::from_int(-1), a, CycNum::one()])?;
        let want: ExactPoint = p.parse()?;
        out.push(EndpointCheck {
            id: format!("j3({s}) = {p}"),
            pass: pt.proj_eq(&want) && pt.location() == Location::Interior,
        });
        let l0 = domain_d_exact(&sv, &CycNum::zero(), Side::L)?;
        out.push(EndpointCheck {
            id: format!("L(s={s}, u=0) on j3"),
            pass: l0.proj_eq(&want),
        });
    }
    let r = named("R")?;
    let mut all = true;
    for sn in 0..=8 {
        for un in [0i64, 1, 3, 10, 100] {
            let s = CycNum::frac(sn, 4);
            let u = CycNum::from_int(un);
            let l = domain_d_exact(&s, &u, Side::L)?;
            let rl = domain_d_exact(&s, &u, Side::RL)?;
            all &= l.apply(&r).proj_eq(&rl);
            all &= l.location() == Location::Interior;
        }
    }
    out.push(EndpointCheck {
        id: "R maps L(s,u) to R*L(s,u) on a 9x5 rational grid".into(),
        pass: all,
    });
    let far = domain_d_param(0.5f64, 1e12, Side::RL)?;
    out.push(EndpointCheck {
        id: "R*L(s,u) tends to [0:0:1] as u grows".into(),
        pass: far.distance(&ExactPoint::origin().embed()) < 1e-11,
    });
    let mr: C<f64> = (-CycNum::rho()).embed();
    out.push(EndpointCheck {
        id: "-rho = e^(-i pi/3)".into(),
        pass: (mr - C::from_polar(1.0, -std::f64::consts::FRAC_PI_3)).norm() < 1e-15,
    });
    Ok(out)
}

/// Interior points map to interior points under each catalog isometry.
pub fn interior_preservation(seed: u64, n: usize) -> Result<(usize, bool), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut ok = true;
    for name in ["R", "P", "R1", "R2", "R3"] {
        let g = named(name)?;
        for _ in 0..n {
            let z2 = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let depth: f64 = rng.gen_range(0.05..3.0);
            let z1 = C::new(-(z2.norm_sqr() + depth) / 2.0, rng.gen_range(-2.0..2.0));
            let p = ProjPoint::from_ball(&BallCoord::new(z1, z2));
            let q = p.apply(&g);
            if q.v[2].norm() < 1e-12 {
                continue;
            }
            checked += 1;
            ok &= q.to_ball()?.is_interior();
        }
    }
    Ok((checked, ok))
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometryReport {
    pub named_fixed_points: Vec<IncidenceCheck>,
    pub fixed_points: Vec<FixedPointReport>,
    pub rp_cusp_cycle: Vec<IncidenceCheck>,
    pub geodesic_table: GeodesicTableReport,
    pub r_reflection: ReflectionCheck,
    pub domain_identities: Vec<EndpointCheck>,
    pub interior_preservation_checked: usize,
    pub interior_preserved: bool,
    pub pass: bool,
}

pub fn verify_geometry(seed: u64) -> Result<GeometryReport, Error> {
    let nf = named_fixed_points()?;
    let fp = ["R", "P", "R1", "R2", "R3"]
        .iter()
        .map(|n| Ok(fixed_points(n, &named(n)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let rp = rp_cusp_cycle()?;
    let gt = geodesic_table_check()?;
    let rr = r_reflection_check(50, 1e-12)?;
    let di = domain_identities()?;
    let (checked, preserved) = interior_preservation(seed, 100)?;
    let pass = nf.iter().all(|c| c.pass)
        && rp.iter().all(|c| c.pass)
        && gt.pass
        && rr.pass
        && di.iter().all(|c| c.pass)
        && preserved;
    Ok(GeometryReport {
        named_fixed_points: nf,
        fixed_points: fp,
        rp_cusp_cycle: rp,
        geodesic_table: gt,
        r_reflection: rr,
        domain_identities: di,
        interior_preservation_checked: checked,
        interior_preserved: preserved,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horo_examples() {
        let p = HoroCoord::new(C::new(0.0, 0.0), 0.0, 0.0).to_proj();
        assert!(p.distance(&ExactPoint::origin().embed()) < 1e-15);
        let h = HoroCoord::new(C::new(1.0f64, 0.0), 0.0, 1.0);
        let want: ExactPoint = "[-1:1:1]".parse().unwrap();
        assert!(h.to_proj().distance(&want.embed()) < 1e-15);
        assert!(h.s_r_defect().abs() < 1e-15);
        let g = GeoCoord::new(0.0, 0.0, 0.3).to_ball();
        assert!((g.z1 - C::new(-1.0, 0.0)).norm() < 1e-15 && g.z2.norm() < 1e-15);
    }

    #[test]
    fn r_swaps_center_and_infinity() {
        let r = named("R").unwrap();
        assert!(ExactPoint::q_inf().apply(&r).proj_eq(&ExactPoint::origin()));
    }

    #[test]
    fn named_fixed_points_hold() {
        for c in named_fixed_points().unwrap() {
            assert!(c.pass, "{}", c.id);
        }
        for c in rp_cusp_cycle().unwrap() {
            assert!(c.pass, "{}", c.id);
        }
    }

    #[test]
    fn r1_eigenspaces() {
        let f = fixed_points("R1", &named("R1").unwrap());
        assert_eq!(f.path, "exact");
        let line = f.eigenspaces.iter().find(|e| e.basis.len() == 2).unwrap();
        assert_eq!(line.algebraic_multiplicity, 2);
    }

    #[test]
    fn chains() {
        let r = geodesic_table_check().unwrap();
        assert!(!r.chains[0].pass);
        assert!(r.chains[1].pass && r.chains[2].pass);
        assert!(r.hexagon_matches_figure);
    }

    #[test]
    fn reflection_and_domain() {
        assert!(r_reflection_check(50, 1e-12).unwrap().pass);
        for c in domain_identities().unwrap() {
            assert!(c.pass, "{}", c.id);
        }
    }

    #[test]
    fn j3_range() {
        assert!(j3_param(2.5f64).is_err());
        let p = j3_param(1.0f64).unwrap();
        assert!((p.u - 2.0).abs() < 1e-15);
    }
}
