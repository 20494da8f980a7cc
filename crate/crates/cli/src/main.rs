use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use picard::quadrature::IntegrandSpec;
use picard::report::{self, Envelope};
use picard::thetaforms::{
    period_matrix, runge_eval, theta_constant, BallCoord, RungeName, ThetaFunction,
};

#[derive(Parser, Debug)]
#[command(name = "picard", version, about = "Verification suites for Picard period polynomials")]
struct Cli {
    /// Seed for the randomized point sets.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Directory for JSON reports when --report is not given.
    #[arg(long, global = true, env = "PICARD_REPORT_DIR")]
    report_dir: Option<PathBuf>,
    /// Write the JSON report here; "-" prints it to stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run one verification suite.
    #[command(subcommand)]
    Verify(Verify),
    /// Evaluate a quantity at a ball point.
    #[command(subcommand)]
    Eval(Eval),
    /// Period polynomial of a theta function over the chain D.
    Quad(QuadArgs),
    /// Aggregate reports.
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Group presentations and PU(2,1) membership, in exact arithmetic.
    Presentations,
    /// Period relations acting on polynomials of weight k.
    Theorem2 {
        /// Weights, as a range "1..4" or a list "1,3".
        #[arg(long, default_value = "1..4")]
        k: String,
    },
    /// Eichler-Shimura relations for Delta, symbolic and numeric.
    Theorem1 {
        /// Fourier coefficients of Delta.
        #[arg(long, default_value_t = 40)]
        terms: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Fixed points, cusp cycle, geodesic chains and the R reflection.
    Geometry,
    /// Invariance of the Runge polynomials under the theta-space generators.
    RungeInvariance,
    /// Tangential base point paths and the S4 table.
    Paths {
        /// Longest word in the exhaustive consistency check.
        #[arg(long, default_value_t = report::PATHS_MAX_LEN)]
        max_len: usize,
    },
    /// Period matrices, theta truncation and modularity.
    Theta {
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
}

#[derive(Args, Debug)]
struct Point {
    /// z1 as a complex number, e.g. "-1+0.2i".
    #[arg(long, allow_hyphen_values = true)]
    z1: Complex64,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    z2: Complex64,
}

#[derive(Subcommand, Debug)]
enum Eval {
    Theta {
        #[command(flatten)]
        at: Point,
        #[arg(long, default_value_t = 10)]
        radius: u32,
    },
    PeriodMatrix {
        #[command(flatten)]
        at: Point,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FChoice {
    #[value(name = "P6sq")]
    P6sq,
    #[value(name = "P12")]
    P12,
    #[value(name = "one")]
    One,
}

#[derive(Args, Debug)]
struct QuadArgs {
    #[arg(long, value_enum, default_value = "P6sq")]
    f: FChoice,
    /// Weight; inferred under R when omitted.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 16.0)]
    umax: f64,
    /// Panels as "n_s x n_u".
    #[arg(long, default_value = "32x32")]
    grid: String,
    #[arg(long, default_value_t = 10)]
    radius: u32,
    /// Gauss-Legendre points per panel direction.
    #[arg(long, default_value_t = 3)]
    order: usize,
}

#[derive(Subcommand, Debug)]
enum ReportCmd {
    All,
}

fn parse_ks(s: &str) -> anyhow::Result<Vec<i64>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().context("bad --k range")?;
        let b: i64 = b.trim().trim_start_matches('=').parse().context("bad --k range")?;
        if a > b {
            bail!("empty --k range {s}");
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().context("bad --k list"))
        .collect()
}

fn parse_grid(s: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .with_context(|| format!("grid {s:?} should look like 32x32"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

#[derive(Serialize)]
struct ThetaEval {
    z1: [f64; 2],
    z2: [f64; 2],
    radius: u32,
    thetas: Vec<ThetaLine>,
    p6: [f64; 2],
    p12: [f64; 2],
}

#[derive(Serialize)]
struct ThetaLine {
    label: u8,
    value: [f64; 2],
    tail_estimate: f64,
}

#[derive(Serialize)]
struct PeriodMatrixEval {
    z1: [f64; 2],
    z2: [f64; 2],
    omega: Vec<Vec<[f64; 2]>>,
    im_eigenvalues: [f64; 3],
}

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

/// What a subcommand produced: the envelope as JSON and summary lines.
struct Outcome {
    name: String,
    json: String,
    pass: bool,
    failing: Vec<String>,
    summary: Vec<String>,
}

fn outcome<T: Serialize>(name: &str, seed: u64, failing: Vec<String>, result: T, summary: Vec<String>) -> Outcome {
    let env = Envelope::new(name, seed, failing, result);
    Outcome {
        name: name.replace(' ', "-"),
        json: env.to_json(),
        pass: env.pass,
        failing: env.failing.clone(),
        summary,
    }
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let seed = cli.seed;
    Ok(match &cli.cmd {
        Cmd::Verify(v) => match v {
            Verify::Presentations => {
                let (p, mut failing) = report::presentations();
                let (m, f2) = report::membership()?;
                failing.extend(f2);
                let mut summary: Vec<String> = p
                    .suites
                    .iter()
                    .map(|s| format!("{} {} ({} relations)", status(s.pass), s.id, s.checks.len()))
                    .collect();
                summary.push(format!(
                    "{} membership ({} matrices, M order {:?})",
                    status(m.pass),
                    m.pu21.len(),
                    m.m_order
                ));
                #[derive(Serialize)]
                struct Both {
                    presentations: report::PresentationsSection,
                    membership: report::MembershipSection,
                }
                outcome("verify presentations", seed, failing, Both { presentations: p, membership: m }, summary)
            }
            Verify::Theorem2 { k } => {
                let ks = parse_ks(k)?;
                let (r, failing) = report::theorem2(&ks)?;
                let summary = r
                    .relations
                    .iter()
                    .map(|x| format!("{} {} k={}", status(x.pass), x.id, x.k))
                    .collect();
                outcome("verify theorem2", seed, failing, r, summary)
            }
            Verify::Theorem1 { terms, tol } => {
                let (r, failing) = report::theorem1(*terms, *tol)?;
                let mut summary: Vec<String> = r
                    .symbolic
                    .checks
                    .iter()
                    .map(|c| format!("{} symbolic {}", status(c.pass), c.id))
                    .collect();
                summary.extend(r.numeric.residuals.iter().map(|x| {
                    format!("{} numeric {} residual {:.3e} (tol {:e})", status(x.pass), x.id, x.residual, x.tolerance)
                }));
                outcome("verify theorem1", seed, failing, r, summary)
            }
            Verify::Geometry => {
                let (r, failing) = report::geometry(seed)?;
                let summary = vec![format!("{} geometry", status(r.pass))];
                outcome("verify geometry", seed, failing, r, summary)
            }
            Verify::RungeInvariance => {
                let (r, failing) = report::runge()?;
                let summary = r
                    .iter()
                    .map(|x| format!("{} {:?} (reading {:?})", status(x.pass), x.name, x.selected))
                    .collect();
                outcome("verify runge-invariance", seed, failing, r, summary)
            }
            Verify::Paths { max_len } => {
                let (r, failing) = report::paths(*max_len)?;
                let summary = vec![
                    format!("r(23) ⊙ r(24) = {}", r.r23_r24),
                    format!("(r(23) ⊙ r(24))^3 = {}", r.r23_r24_cubed),
                    format!(
                        "{} Upsilon o T = to_s4 on {} words",
                        status(r.consistency.pass),
                        r.consistency.words
                    ),
                    format!("{} paths", status(r.pass)),
                ];
                outcome("verify paths", seed, failing, r, summary)
            }
            Verify::Theta { points } => {
                let (r, failing) = if *points == 100 {
                    report::theta(seed)?
                } else {
                    let r = picard::thetaforms::verify_theta(seed, *points)?;
                    let f = if r.pass { vec![] } else { vec!["theta".to_string()] };
                    (r, f)
                };
                let mut summary = vec![format!(
                    "period matrix PD on {}/{} points; truncation difference {:.3e}",
                    r.positive_definite, r.points, r.truncation_difference
                )];
                summary.extend(r.weights.iter().map(|w| {
                    format!(
                        "{} {}: best k {} residual {:.3e}",
                        status(w.inference.best_residual < r.modularity_tolerance),
                        w.generator,
                        w.inference.best_k,
                        w.inference.best_residual
                    )
                }));
                outcome("verify theta", seed, failing, r, summary)
            }
        },
        Cmd::Eval(e) => match e {
            Eval::Theta { at, radius } => {
                let p = BallCoord::new(at.z1, at.z2);
                let s = period_matrix(&p)?;
                let thetas = (1..=3)
                    .map(|l| {
                        let t = theta_constant(l, &s, *radius)?;
                        Ok(ThetaLine {
                            label: l,
                            value: pair(t.value),
                            tail_estimate: t.tail_estimate,
                        })
                    })
                    .collect::<anyhow::Result<Vec<_>>>()?;
                let r = ThetaEval {
                    z1: pair(at.z1),
                    z2: pair(at.z2),
                    radius: *radius,
                    p6: pair(runge_eval(RungeName::P6, &p, *radius)?),
                    p12: pair(runge_eval(RungeName::P12, &p, *radius)?),
                    thetas,
                };
                let summary = r
                    .thetas
                    .iter()
                    .map(|t| format!("f{} = {} + {} i", t.label, t.value[0], t.value[1]))
                    .collect();
                outcome("eval theta", seed, vec![], r, summary)
            }
            Eval::PeriodMatrix { at } => {
                let s = period_matrix(&BallCoord::new(at.z1, at.z2))?;
                let r = PeriodMatrixEval {
                    z1: pair(at.z1),
                    z2: pair(at.z2),
                    omega: s.omega.iter().map(|row| row.iter().map(|c| pair(*c)).collect()).collect(),
                    im_eigenvalues: s.im_eigenvalues,
                };
                let summary = vec![format!("Im(Omega) eigenvalues {:?}", r.im_eigenvalues)];
                outcome("eval period-matrix", seed, vec![], r, summary)
            }
        },
        Cmd::Quad(q) => {
            let f = match q.f {
                FChoice::P6sq => ThetaFunction::p6_squared()?,
                FChoice::P12 => ThetaFunction::p12()?,
                FChoice::One => ThetaFunction::One,
            };
            let k = match q.k {
                Some(k) => k,
                None => report::inferred_k(&f, seed)?,
            };
            let mut spec = IntegrandSpec::new(f, k);
            spec.u_max = q.umax;
            spec.grid = parse_grid(&q.grid)?;
            spec.radius = q.radius;
            spec.order = q.order;
            let (r, failing) = report::quadrature(&spec)?;
            let mut summary = vec![format!(
                "{} (e:R^2) residual {:.3e} (tol {:e}) f = {} k = {} u_max = {}",
                status(r.residual.residual < r.tolerance),
                r.residual.residual,
                r.tolerance,
                r.f,
                r.k,
                r.u_max
            )];
            summary.extend(r.convergence.rows.iter().map(|row| {
                format!(
                    "u_max {:>5}: |P| {:.6e} diff {}",
                    row.u_max,
                    row.total_norm,
                    row.diff_from_previous.map(|d| format!("{d:.3e}")).unwrap_or_else(|| "-".into())
                )
            }));
            summary.push(format!(
                "decay exponent on L {:.3} ({})",
                r.convergence.decay_exponent,
                if r.convergence.decays { "decays" } else { "does not decay" }
            ));
            outcome("quad", seed, failing, r, summary)
        }
        Cmd::Report(ReportCmd::All) => {
            let (r, failing) = report::all(seed)?;
            let summary = r
                .criteria
                .iter()
                .map(|c| format!("{} {} {}", status(c.pass), c.id, c.name))
                .collect();
            outcome("report all", seed, failing, r, summary)
        }
    })
}

fn emit(cli: &Cli, o: &Outcome) -> anyhow::Result<()> {
    let target = match (&cli.report, &cli.report_dir) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(format!("{}.json", o.name))),
        (None, None) => None,
    };
    let to_stdout = target.as_deref().map_or(true, |p| p.as_os_str() == "-");
    for line in &o.summary {
        if to_stdout {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
    if !o.failing.is_empty() {
        let msg = format!("failing: {}", o.failing.join(", "));
        if to_stdout {
            eprintln!("{msg}");
        } else {
            println!("{msg}");
        }
    }
    match target {
        Some(p) if p.as_os_str() != "-" => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(&p, &o.json).with_context(|| format!("writing {}", p.display()))?;
            println!("report written to {}", p.display());
        }
        _ => print!("{}", o.json),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &o) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if o.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
