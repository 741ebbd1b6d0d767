use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use sphere_coherent::circle::{circle_coherent, circle_relative_u, circle_uncertainty_report, CirclePhasePoint};
use sphere_coherent::rotator::{distribution, energy_root, nearest_integer_half_down, rotator_energy};
use sphere_coherent::sphere::{
    build_coherent, coherent_closed_form, coherent_ladder_generated, coherent_triple_sum, eigen_residual, expect_j, expect_x,
    multiplet_deviation, relative_x, uncertainty_j, CoherentState, SpherePhasePoint, Truncation, UncertaintyJ,
};
use sphere_coherent::verify::{run as run_checks, CheckResult, VerifyConfig, CHECKS};
use sphere_coherent::Error;

use crate::args::{CircleArgs, Format, JCut, PointArgs, RotatorArgs, RunArgs, SphereArgs};
use crate::output::{quantity, write_csv, write_json};

/// Agreement required of the expansion paths by `--check-paths`.
const PATH_TOL: f64 = 1e-10;
/// The expansion paths run in 256-bit arithmetic; their cost grows like `j_cut^3`.
const PATH_J_CUT_MAX: u32 = 40;

pub enum Failure {
    Usage(String),
    Constraint(String),
    Verification,
    /// The reader went away (e.g. `| head`); not an error.
    ClosedPipe,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidTailTolerance(_) | Error::TruncationTooSmall(..) => Failure::Usage(e.to_string()),
            _ => Failure::Constraint(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::ClosedPipe;
        }
        Failure::Constraint(format!("i/o: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn validate(run: &RunArgs) -> Outcome {
    if !(run.tail_tol > 0.0 && run.tail_tol <= 1e-6) {
        return Err(Failure::Usage(format!("--tail-tol must lie in (0, 1e-6], got {}", run.tail_tol)));
    }
    Ok(())
}

fn truncation(run: &RunArgs) -> Truncation {
    match run.j_cut {
        JCut::Auto => Truncation::Auto { tail_tol: run.tail_tol },
        JCut::Fixed(n) => Truncation::Fixed(n),
    }
}

fn phase_point(p: &PointArgs) -> Result<SpherePhasePoint, Failure> {
    let made = if p.project_tangent {
        SpherePhasePoint::projected(p.x, p.l, p.r)
    } else {
        SpherePhasePoint::new(p.x, p.l, p.r)
    };
    made.map_err(|e| Failure::Constraint(format!("{e} (use --project-tangent to repair)")))
}

fn pair(re: f64, im: f64) -> [f64; 2] {
    [re, im]
}

#[derive(Serialize)]
struct CircleReport {
    phi: f64,
    l: f64,
    j_cut: u32,
    tail_fraction: f64,
    expect_j: f64,
    expect_u: [f64; 2],
    abs_u: f64,
    arg_u: f64,
    relative_u: [f64; 2],
    var_j: f64,
    uncertainty_bound: f64,
    uncertainty_holds: bool,
    ratio_u2: [f64; 2],
    eigen_residual: f64,
}

pub fn circle(run: &RunArgs, a: &CircleArgs, w: &mut dyn Write) -> Outcome {
    validate(run)?;
    let p = CirclePhasePoint::new(a.phi, a.l)?;
    let j_cut = match run.j_cut {
        JCut::Auto => p.default_cutoff(),
        JCut::Fixed(n) => n,
    };
    let s = circle_coherent(&p, j_cut)?;
    let u = s.expect_u();
    let rel = circle_relative_u(&p, &CirclePhasePoint::new(0.0, 0.0)?, j_cut)?;
    let unc = circle_uncertainty_report(&s);
    let r = CircleReport {
        phi: p.phi(),
        l: p.l(),
        j_cut,
        tail_fraction: s.tail_fraction(),
        expect_j: s.expect_j(),
        expect_u: pair(u.re, u.im),
        abs_u: u.norm(),
        arg_u: u.arg(),
        relative_u: pair(rel.re, rel.im),
        var_j: unc.var_j,
        uncertainty_bound: unc.bound,
        uncertainty_holds: unc.holds,
        ratio_u2: pair(unc.ratio_u2.re, unc.ratio_u2.im),
        eigen_residual: s.eigen_residual(&p),
    };
    match run.format {
        Format::Json => write_json(w, &r)?,
        Format::Csv => write_csv(
            w,
            [
                quantity("phi", r.phi),
                quantity("l", r.l),
                quantity("j_cut", r.j_cut as f64),
                quantity("tail_fraction", r.tail_fraction),
                quantity("expect_j", r.expect_j),
                quantity("expect_u_re", r.expect_u[0]),
                quantity("expect_u_im", r.expect_u[1]),
                quantity("abs_u", r.abs_u),
                quantity("arg_u", r.arg_u),
                quantity("relative_u_re", r.relative_u[0]),
                quantity("relative_u_im", r.relative_u[1]),
                quantity("var_j", r.var_j),
                quantity("uncertainty_bound", r.uncertainty_bound),
                quantity("ratio_u2_re", r.ratio_u2[0]),
                quantity("ratio_u2_im", r.ratio_u2[1]),
                quantity("eigen_residual", r.eigen_residual),
            ],
        )?,
    }
    Ok(())
}

#[derive(Serialize)]
struct Amplitude {
    j: u32,
    m: i32,
    re: f64,
    im: f64,
    ln_abs: f64,
    phase: f64,
}

#[derive(Serialize)]
struct PathReport {
    j_cut: u32,
    closed_vs_triple_sum: f64,
    closed_vs_ladder: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SphereReport {
    x: [f64; 3],
    l: [f64; 3],
    r: f64,
    z: Vec<[f64; 2]>,
    j_cut: u32,
    tail_fraction: f64,
    ln_tail_fraction: f64,
    expect_j: [f64; 3],
    expect_x: [f64; 3],
    relative_x: [Option<f64>; 3],
    eigen_residual: f64,
    uncertainty: UncertaintyJ,
    #[serde(skip_serializing_if = "Option::is_none")]
    paths: Option<PathReport>,
    amplitudes: Vec<Amplitude>,
}

fn amplitudes(c: &CoherentState) -> Vec<Amplitude> {
    c.state
        .iter()
        .map(|(k, a)| {
            let v = a.to_complex();
            Amplitude { j: k.j, m: k.m, re: v.re, im: v.im, ln_abs: a.log_mag, phase: a.phase }
        })
        .collect()
}

/// Unnormalized states from the three constructions, compared on a common cutoff.
fn check_paths(c: &CoherentState) -> Result<PathReport, Failure> {
    let j_cut = c.j_cut().min(PATH_J_CUT_MAX);
    let rep = c.state.rep();
    let closed = coherent_closed_form(&c.label, rep, j_cut);
    let d1 = multiplet_deviation(&closed, &coherent_triple_sum(&c.label, rep, j_cut)?);
    let d2 = multiplet_deviation(&closed, &coherent_ladder_generated(&c.label, rep, j_cut)?);
    Ok(PathReport { j_cut, closed_vs_triple_sum: d1, closed_vs_ladder: d2, tolerance: PATH_TOL, pass: d1.max(d2) <= PATH_TOL })
}

pub fn sphere(run: &RunArgs, a: &SphereArgs, w: &mut dyn Write) -> Outcome {
    validate(run)?;
    let p = phase_point(&a.point)?;
    let c = build_coherent(&p, truncation(run))?;
    let paths = if a.check_paths { Some(check_paths(&c)?) } else { None };
    let r = SphereReport {
        x: p.x(),
        l: p.l(),
        r: p.r(),
        z: c.label.z().iter().map(|v| pair(v.re, v.im)).collect(),
        j_cut: c.j_cut(),
        tail_fraction: c.tail_fraction(),
        ln_tail_fraction: c.ln_tail_fraction,
        expect_j: expect_j(&c.state)?,
        expect_x: expect_x(&c.state)?,
        relative_x: relative_x(&c)?,
        eigen_residual: eigen_residual(&c.state, &c.label),
        uncertainty: uncertainty_j(&c.state)?,
        paths,
        amplitudes: amplitudes(&c),
    };
    match run.format {
        Format::Json => write_json(w, &r)?,
        Format::Csv => write_csv(w, r.amplitudes.iter())?,
    }
    let failed = r.paths.as_ref().is_some_and(|p| !p.pass);
    if failed {
        return Err(Failure::Verification);
    }
    Ok(())
}

#[derive(Serialize)]
struct Probability {
    j: u32,
    m: i32,
    p: f64,
    ln_p: f64,
}

#[derive(Serialize)]
struct JMax {
    m: i32,
    j_max: Option<u32>,
    energy: Option<f64>,
}

#[derive(Serialize)]
struct MMax {
    j: u32,
    m_max: Option<i32>,
}

#[derive(Serialize)]
struct RotatorReport {
    x: [f64; 3],
    l: [f64; 3],
    r: f64,
    j_cut: u32,
    ln_tail_fraction: f64,
    total_probability: f64,
    l_squared: f64,
    energy_root: f64,
    nearest_level: u32,
    argmax_j: Vec<JMax>,
    argmax_m: Vec<MMax>,
    distribution: Vec<Probability>,
}

pub fn rotator(run: &RunArgs, a: &RotatorArgs, w: &mut dyn Write) -> Outcome {
    validate(run)?;
    let p = phase_point(&a.point)?;
    let t = distribution(&p, truncation(run))?;
    let lsq = p.l_norm().powi(2);
    let root = energy_root(lsq);
    let r = RotatorReport {
        x: p.x(),
        l: p.l(),
        r: p.r(),
        j_cut: t.j_cut,
        ln_tail_fraction: t.ln_tail_fraction,
        total_probability: t.total(),
        l_squared: lsq,
        energy_root: root,
        nearest_level: nearest_integer_half_down(root),
        argmax_j: a
            .fix_m
            .iter()
            .map(|&m| {
                let j_max = t.argmax_j(m);
                JMax { m, j_max, energy: j_max.map(rotator_energy) }
            })
            .collect(),
        argmax_m: a.fix_j.iter().map(|&j| MMax { j, m_max: t.argmax_m(j) }).collect(),
        distribution: t.iter().map(|(j, m, p, ln_p)| Probability { j, m, p, ln_p }).collect(),
    };
    match run.format {
        Format::Json => write_json(w, &r)?,
        Format::Csv => {
            write_csv(w, r.distribution.iter())?;
            for jm in &r.argmax_j {
                eprintln!("argmax_j(m={}) = {}", jm.m, jm.j_max.map_or("none".into(), |j| j.to_string()));
            }
            for mm in &r.argmax_m {
                eprintln!("argmax_m(j={}) = {}", mm.j, mm.m_max.map_or("none".into(), |m| m.to_string()));
            }
            eprintln!("energy root {:.6}, nearest level {}", r.energy_root, r.nearest_level);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    seed: u64,
    j_cut: Option<u32>,
    tail_tol: f64,
    pass: bool,
    checks: Vec<CheckResult>,
}

pub fn verify(run: &RunArgs, w: &mut dyn Write) -> Outcome {
    validate(run)?;
    let cfg = VerifyConfig {
        seed: run.seed,
        j_cut: match run.j_cut {
            JCut::Auto => None,
            JCut::Fixed(n) => Some(n),
        },
        tail_tol: run.tail_tol,
        tolerances: run.tolerances.iter().cloned().collect::<BTreeMap<_, _>>(),
    };
    let known: Vec<&str> = CHECKS.iter().map(|c| c.0).collect();
    if let Some((bad, _)) = run.tolerances.iter().find(|(n, _)| !known.contains(&n.as_str())) {
        return Err(Failure::Usage(format!("unknown check `{bad}`; known: {}", known.join(", "))));
    }
    let checks = run_checks(&cfg)?;
    let pass = checks.iter().all(|c| c.pass);
    let r = VerifyReport { seed: cfg.seed, j_cut: cfg.j_cut, tail_tol: cfg.tail_tol, pass, checks };
    match run.format {
        Format::Json => write_json(w, &r)?,
        Format::Csv => write_csv(w, r.checks.iter())?,
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
