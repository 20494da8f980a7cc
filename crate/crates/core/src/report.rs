//! Versioned, deterministic JSON reports for every verification suite.
//!
//! A report holds no timings and no host data, so the same parameters and
//! seed always serialize to the same bytes.

use serde::Serialize;

use crate::cocycle::{verify_theorem1, verify_theorem2, Theorem1Report, Theorem2Report};
use crate::elliptic::{check_theorem1, delta_coefficients, Theorem1Numeric};
use crate::matgroup::{
    builtin, element_order, int6, named, verify_presentation, Builtin, Presentation,
    PresentationReport, CATALOG_NAMES, PU21_NAMES,
};
use crate::modulipaths::{verify_paths, PathsReport};
use crate::quadrature::{verify_quadrature, IntegrandSpec, QuadratureReport};
use crate::thetaforms::{
    runge_invariance, verify_theta, weight_infer, random_interior_points, InvarianceReport,
    RungeName, ThetaFunction, ThetaReport,
};
use crate::chgeometry::{verify_geometry, GeometryReport};
use crate::Error;

pub const SCHEMA: &str = "picard-report";
pub const SCHEMA_VERSION: u32 = 1;

/// The common wrapper around every report.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope<T> {
    pub schema: &'static str,
    pub version: u32,
    pub command: String,
    pub seed: u64,
    pub pass: bool,
    pub failing: Vec<String>,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, seed: u64, failing: Vec<String>, result: T) -> Self {
        Envelope {
            schema: SCHEMA,
            version: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            pass: failing.is_empty(),
            failing,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Suites that decide the presentation criterion.
pub const PRESENTATION_SUITES: [Presentation; 5] = [
    Presentation::FalbelParkerR123,
    Presentation::FalbelParkerRpr1,
    Presentation::Squares,
    Presentation::BracketR,
    Presentation::Gamma1Identities,
];

#[derive(Clone, Debug, Serialize)]
pub struct PresentationsSection {
    pub suites: Vec<PresentationReport>,
    /// Suites reported alongside that do not decide `pass`.
    pub extra: Vec<PresentationReport>,
    pub pass: bool,
}

pub fn presentations() -> (PresentationsSection, Vec<String>) {
    let suites: Vec<PresentationReport> =
        PRESENTATION_SUITES.iter().map(|p| verify_presentation(*p)).collect();
    let extra: Vec<PresentationReport> = Presentation::ALL
        .iter()
        .filter(|p| !PRESENTATION_SUITES.contains(p))
        .map(|p| verify_presentation(*p))
        .collect();
    let failing: Vec<String> = suites
        .iter()
        .flat_map(|s| {
            s.checks
                .iter()
                .filter(|c| !c.pass)
                .map(move |c| format!("{}/{}", s.id, c.id))
        })
        .collect();
    let pass = suites.iter().all(|s| s.pass);
    (PresentationsSection { suites, extra, pass }, failing)
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberLine {
    pub name: String,
    pub preserves_j0: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipSection {
    pub pu21: Vec<MemberLine>,
    /// 3x3 catalog matrices that are not group elements (conjugators and
    /// the theta-space generators), listed for completeness.
    pub other_3x3: Vec<MemberLine>,
    pub m_symplectic: bool,
    pub m_order: Option<u32>,
    pub order_cap: u32,
    pub pass: bool,
}

pub fn membership() -> Result<(MembershipSection, Vec<String>), Error> {
    let cap = 24;
    let mut pu21 = Vec::new();
    let mut other = Vec::new();
    for n in CATALOG_NAMES {
        if let Builtin::Proj(m) = builtin(n)? {
            let line = MemberLine {
                name: n.to_string(),
                preserves_j0: m.pu21_member(),
                order: element_order(&m, cap),
            };
            if PU21_NAMES.contains(n) {
                pu21.push(line);
            } else {
                other.push(line);
            }
        }
    }
    let m = int6("M")?;
    let m_order = m.order(cap);
    let mut failing: Vec<String> = pu21
        .iter()
        .filter(|l| !l.preserves_j0)
        .map(|l| format!("member/{}", l.name))
        .collect();
    if !m.sp6_member() {
        failing.push("M/symplectic".into());
    }
    if m_order.is_none() {
        failing.push("M/order".into());
    }
    Ok((
        MembershipSection {
            pu21,
            other_3x3: other,
            m_symplectic: m.sp6_member(),
            m_order,
            order_cap: cap,
            pass: failing.is_empty(),
        },
        failing,
    ))
}

pub fn theorem2(ks: &[i64]) -> Result<(Theorem2Report, Vec<String>), Error> {
    let r = verify_theorem2(ks)?;
    let mut failing: Vec<String> = r
        .relations
        .iter()
        .filter(|x| !x.pass)
        .map(|x| format!("{}/k={}", x.id, x.k))
        .collect();
    for s in &r.r3_six {
        if !s.args_match_all {
            failing.push(format!("R3^6/k={}", s.k));
        }
    }
    if !r.conjugation.pass {
        failing.push("conjugation".into());
    }
    Ok((r, failing))
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Section {
    pub symbolic: Theorem1Report,
    pub numeric: Theorem1Numeric,
    /// (terms, DA1 residual, DA2 residual).
    pub truncation: Vec<(usize, f64, f64)>,
    pub pass: bool,
}

pub fn theorem1(terms: usize, tol: f64) -> Result<(Theorem1Section, Vec<String>), Error> {
    let delta = delta_coefficients(terms);
    let mut numeric = check_theorem1(&delta, tol)?;
    numeric.form = "Delta".into();
    let symbolic = verify_theorem1(numeric.degree)?;
    let truncation = crate::elliptic::truncation_study(&[10, 20, terms])?;
    let mut failing: Vec<String> = symbolic
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("symbolic/{}", c.id))
        .collect();
    failing.extend(
        numeric
            .residuals
            .iter()
            .filter(|r| !r.pass)
            .map(|r| format!("numeric/{}", r.id)),
    );
    Ok((
        Theorem1Section {
            pass: failing.is_empty(),
            symbolic,
            numeric,
            truncation,
        },
        failing,
    ))
}

pub fn geometry(seed: u64) -> Result<(GeometryReport, Vec<String>), Error> {
    let r = verify_geometry(seed)?;
    let mut failing = Vec::new();
    for c in r.named_fixed_points.iter().chain(&r.rp_cusp_cycle) {
        if !c.pass {
            failing.push(format!("incidence/{}", c.id));
        }
    }
    if !r.geodesic_table.pass {
        failing.push("geodesic_table".into());
    }
    if !r.r_reflection.pass {
        failing.push("r_reflection".into());
    }
    for c in &r.domain_identities {
        if !c.pass {
            failing.push(format!("domain/{}", c.id));
        }
    }
    if !r.interior_preserved {
        failing.push("interior_preservation".into());
    }
    Ok((r, failing))
}

pub fn runge() -> Result<(Vec<InvarianceReport>, Vec<String>), Error> {
    let reps = [RungeName::P6, RungeName::P12]
        .iter()
        .map(|n| runge_invariance(*n))
        .collect::<Result<Vec<_>, _>>()?;
    let failing = reps
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{:?}", r.name))
        .collect();
    Ok((reps, failing))
}

pub fn theta(seed: u64) -> Result<(ThetaReport, Vec<String>), Error> {
    let r = verify_theta(seed, 100)?;
    let mut failing = Vec::new();
    if r.positive_definite != r.points || !r.symmetric {
        failing.push("period_matrix".into());
    }
    if r.truncation_difference >= r.truncation_tolerance {
        failing.push("truncation".into());
    }
    for w in &r.weights {
        if w.inference.best_residual >= r.modularity_tolerance {
            failing.push(format!("modularity/{}", w.generator));
        }
    }
    if !r.same_weight {
        failing.push("modularity/weight".into());
    }
    Ok((r, failing))
}

/// Weight for the quadrature integrand: the k inferred under R, the
/// generator of the relation being tested.
pub fn inferred_k(f: &ThetaFunction, seed: u64) -> Result<u32, Error> {
    let pts = random_interior_points(seed.wrapping_add(1), 5);
    let w = weight_infer(&named("R")?, f, &pts, 10)?;
    Ok(w.best_k as u32)
}

pub const QUAD_U_LIST: [f64; 4] = [4.0, 8.0, 16.0, 32.0];
pub const QUAD_TOLERANCE: f64 = 1e-3;

pub fn quadrature(spec: &IntegrandSpec) -> Result<(QuadratureReport, Vec<String>), Error> {
    let mut us: Vec<f64> = QUAD_U_LIST.to_vec();
    if !us.contains(&spec.u_max) {
        us.push(spec.u_max);
        us.sort_by(f64::total_cmp);
    }
    let r = verify_quadrature(spec, &us, QUAD_TOLERANCE)?;
    let mut failing = Vec::new();
    if r.residual.residual >= r.tolerance {
        failing.push("e:R^2".into());
    }
    if !r.convergence.differences_decreasing {
        failing.push("convergence".into());
    }
    if r.convergence.rl_variation > r.rl_tolerance {
        failing.push("R*L".into());
    }
    if !r.convergence.decays {
        failing.push("decay".into());
    }
    Ok((r, failing))
}

pub const PATHS_MAX_LEN: usize = 6;

pub fn paths(max_len: usize) -> Result<(PathsReport, Vec<String>), Error> {
    let r = verify_paths(max_len)?;
    let mut failing: Vec<String> = r
        .table
        .iter()
        .filter(|t| !t.pass)
        .map(|t| format!("table/{}", t.relation))
        .collect();
    failing.extend(r.examples.iter().filter(|e| !e.pass).map(|e| format!("example/{}", e.id)));
    if !r.t_y6_matches {
        failing.push("r(23)r(24)".into());
    }
    failing.extend(
        r.freeness
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("freeness/{}", c.id)),
    );
    if !r.consistency.pass {
        failing.push("upsilon_consistency".into());
    }
    Ok((r, failing))
}

/// One line of the criterion summary.
#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub failing: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AllReport {
    pub criteria: Vec<Criterion>,
    pub presentations: PresentationsSection,
    pub membership: MembershipSection,
    pub theorem2: Theorem2Report,
    pub theorem1: Theorem1Section,
    pub runge: Vec<InvarianceReport>,
    pub geometry: GeometryReport,
    pub theta: ThetaReport,
    pub quadrature: QuadratureReport,
    pub paths: PathsReport,
}

/// Every suite at its default parameters.  Failing checks are data.
pub fn all(seed: u64) -> Result<(AllReport, Vec<String>), Error> {
    let mut criteria = Vec::new();
    let mut push = |id: u8, name: &str, failing: &[String]| {
        criteria.push(Criterion {
            id,
            name: name.into(),
            pass: failing.is_empty(),
            failing: failing.to_vec(),
        })
    };
    let (pres, f1) = presentations();
    push(1, "presentations", &f1);
    let (mem, f2) = membership()?;
    push(2, "membership", &f2);
    let (t2, f3) = theorem2(&[1, 2, 3, 4])?;
    push(3, "theorem2", &f3);
    let (t1, f4) = theorem1(40, 1e-8)?;
    push(4, "theorem1", &f4);
    let (rg, f5) = runge()?;
    push(5, "runge_invariance", &f5);
    let (geo, f6) = geometry(seed)?;
    push(6, "geometry", &f6);
    let (th, f7) = theta(seed)?;
    push(7, "theta_modularity", &f7);
    let f = ThetaFunction::p6_squared()?;
    let k = inferred_k(&f, seed)?;
    let (quad, f8) = quadrature(&IntegrandSpec::new(f, k))?;
    push(8, "quadrature", &f8);
    let (pa, f9) = paths(PATHS_MAX_LEN)?;
    push(9, "paths", &f9);
    let failing = criteria
        .iter()
        .flat_map(|c| c.failing.iter().map(move |f| format!("{}:{f}", c.name)))
        .collect();
    Ok((
        AllReport {
            criteria,
            presentations: pres,
            membership: mem,
            theorem2: t2,
            theorem1: t1,
            runge: rg,
            geometry: geo,
            theta: th,
            quadrature: quad,
            paths: pa,
        },
        failing,
    ))
}
