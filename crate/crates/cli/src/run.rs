//! Subcommand dispatch.

use std::time::Instant;

use tcurve::surface::AmbientSurface;
use tcurve::tcurve::{extract_curve_on, TCurve};
use tcurve::{predicted_harnack_census, HarnackType};
use thiserror::Error;

use crate::enumerate::{enumerate, EnumerateError};
use crate::problem::{ProblemError, ProblemFile, SignChoice};
use crate::render::render_svg;
use crate::report::{curve_report, filling_report, harnack_report, surface_report, ComputeError, Invariant, Report};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Command {
    Surface,
    Curve,
    Filling,
    Harnack,
    Enumerate,
    Render,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub harnack_type: Option<HarnackType>,
    pub cap: usize,
    pub seed: Option<u64>,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { harnack_type: None, cap: crate::enumerate::DEFAULT_CAP, seed: None, timing: false }
    }
}

pub enum Output {
    Report(Box<Report>),
    Svg(String),
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Input(#[from] ProblemError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Compute(#[from] ComputeError),
}

impl RunError {
    /// Bad input is 2; a library error while computing counts as a violated law.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Input(_)
            | RunError::Enumerate(EnumerateError::CapExceeded { .. })
            | RunError::Enumerate(EnumerateError::CapTooLarge(_)) => 2,
            RunError::Enumerate(EnumerateError::Compute(_)) | RunError::Compute(_) => 1,
        }
    }
}

fn curve(problem: &ProblemFile, opts: &Options) -> Result<TCurve, RunError> {
    let signs = problem.distribution(opts.harnack_type)?;
    Ok(extract_curve_on(&problem.triangulation, &signs).map_err(ComputeError::from)?)
}

fn with_curve(report: &mut Report, k: &TCurve) -> Result<(), RunError> {
    let c = curve_report(k)?;
    if let Some(dp) = &c.degree_parity {
        report.invariants.push(Invariant::with_detail(
            "nontrivial component exactly for odd degree",
            dp.holds,
            format!("degree {}, {} nontrivial", dp.degree, dp.nontrivial),
        ));
    }
    report.curve = Some(c);
    Ok(())
}

fn with_filling(report: &mut Report, k: &TCurve) -> Result<(), RunError> {
    let (f, laws) = filling_report(k)?;
    report.filling = Some(f);
    report.invariants.extend(laws);
    Ok(())
}

pub fn run(command: Command, problem: &ProblemFile, opts: &Options) -> Result<Output, RunError> {
    let start = Instant::now();
    if command == Command::Render {
        return Ok(Output::Svg(render_svg(&curve(problem, opts)?)));
    }
    let mut report = Report {
        command: format!("{command:?}").to_lowercase(),
        polygon: problem.polygon.vertices().iter().map(|v| [v.x, v.y]).collect(),
        ..Default::default()
    };
    let surface = AmbientSurface::build(&problem.polygon);
    report.surface = Some(surface_report(&surface));
    match command {
        Command::Surface | Command::Render => {}
        Command::Curve => with_curve(&mut report, &curve(problem, opts)?)?,
        Command::Filling => {
            let k = curve(problem, opts)?;
            with_curve(&mut report, &k)?;
            with_filling(&mut report, &k)?;
        }
        Command::Harnack => {
            let h = match (opts.harnack_type, problem.signs.clone()) {
                (Some(h), _) | (None, SignChoice::Harnack(h)) => h,
                _ => {
                    return Err(ProblemError::Validation {
                        field: "signs".into(),
                        message: "harnack needs `harnack = [c, a, b]` or --type".into(),
                    }
                    .into())
                }
            };
            let signs = tcurve::harnack_distribution(&problem.polygon, h);
            let k = extract_curve_on(&problem.triangulation, &signs).map_err(ComputeError::from)?;
            with_curve(&mut report, &k)?;
            with_filling(&mut report, &k)?;
            let hr = harnack_report(h, &predicted_harnack_census(&problem.polygon, h), &k);
            report.invariants.push(Invariant::new("census matches the Harnack prediction", hr.matches));
            let maximal = report.filling.as_ref().is_some_and(|f| f.maximal);
            report.invariants.push(Invariant::new("Harnack curve is maximal", maximal));
            report.harnack = Some(hr);
        }
        Command::Enumerate => {
            let e = enumerate(&problem.triangulation, opts.cap, opts.seed)?;
            report.invariants.push(Invariant::with_detail(
                "harnack bound and euler identities on every run",
                e.violations.is_empty(),
                format!("{} runs, at most {} components", e.runs, e.max_components),
            ));
            report.enumeration = Some(e);
        }
    }
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Ok(Output::Report(Box::new(report)))
}
