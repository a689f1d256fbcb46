//! The four commands behind the binary, shared with the integration tests.

use std::fmt;
use std::fs;
use std::io;
use std::path::PathBuf;
use std::sync::Arc;

use splinecdr::problem::{build_problem, PresetParams, SpaceTimeFn, StepParams};
use splinecdr::scheme::monotonicity_report;
use splinecdr::stepper::run;
use splinecdr::verify::{
    baseline_run, convergence_study, error_norms, spline_error_norms, BaselineKind, StudyParams,
};
use splinecdr::{DualGrid, Error as SolverError, MonotonicityReport, ProblemSpec};

use crate::config::{ConfigError, RunConfig};
use crate::csv::{fmt_float, write_atomic, Csv};

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Io { path: PathBuf, source: io::Error },
    Solver(SolverError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => e.fmt(f),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Solver(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> CliError {
        CliError::Config(e)
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> CliError {
        CliError::Solver(e)
    }
}

fn solver_exit_code(e: &SolverError) -> u8 {
    match e {
        SolverError::NotMonotone { .. } | SolverError::NonMonotoneRow { .. } => 2,
        SolverError::NonFinite { .. }
        | SolverError::SingularPivot { .. }
        | SolverError::SingularMatrix(_)
        | SolverError::DegenerateElimination { .. } => 3,
        SolverError::AtStep { source, .. } => solver_exit_code(source),
        _ => 1,
    }
}

impl CliError {
    /// Contract: 0 success, 1 config/IO, 2 monotonicity refusal, 3 numeric.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Solver(e) => solver_exit_code(e),
        }
    }
}

fn io_err(path: &std::path::Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn problem_of(cfg: &RunConfig) -> Result<ProblemSpec, CliError> {
    Ok(build_problem(
        cfg.preset,
        &PresetParams {
            length: cfg.length,
            diffusion: cfg.diffusion,
            convection: cfg.convection,
            reaction: cfg.reaction,
            constant_value: 1.0,
        },
    )?)
}

fn step_params_of(cfg: &RunConfig) -> Result<StepParams, CliError> {
    let params = StepParams::new(cfg.rho, cfg.mode)?;
    Ok(if cfg.strict_monotone {
        params
    } else {
        params.permissive()
    })
}

/// Thresholds and realised row signs for the configured discretization.
pub fn cmd_check(cfg: &RunConfig) -> Result<MonotonicityReport, CliError> {
    let grid = DualGrid::uniform(cfg.length, cfg.n, cfg.mu_fraction)?;
    Ok(monotonicity_report(
        cfg.diffusion,
        cfg.convection,
        cfg.reaction,
        cfg.rho,
        grid.h(),
        grid.mu(),
    )?)
}

pub fn render_check(report: &MonotonicityReport) -> String {
    let lower = |v: Option<f64>| match v {
        Some(x) => format!("{x:e}"),
        None => "unattainable".to_string(),
    };
    let upper = match report.rho_max_reaction {
        Some(x) => format!("{x:e}"),
        None => "none".to_string(),
    };
    format!(
        "rho1 = {}\nrho2 = {}\nrho_max (1/A) = {}\nalpha = {:e}\nbeta = {:e}\ngamma = {:e}\nverdict: {}\n",
        lower(report.rho1),
        lower(report.rho2),
        upper,
        report.alpha,
        report.beta,
        report.gamma,
        if report.monotone { "monotone" } else { "not monotone" },
    )
}

fn solution_row(t: f64, x: f64, u: f64, exact: Option<&SpaceTimeFn>, kind: &str) -> Vec<String> {
    let (u_exact, abs_error) = match exact {
        Some(reference) => {
            let e = reference(x, t);
            (fmt_float(e), fmt_float((u - e).abs()))
        }
        None => (String::new(), String::new()),
    };
    vec![fmt_float(t), fmt_float(x), fmt_float(u), u_exact, abs_error, kind.to_string()]
}

/// March to `t_end`, writing `solution-<t>.csv` per snapshot (knot rows plus
/// ten spline samples per interval) and a `summary.csv` of error norms.
pub fn cmd_solve(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let problem = problem_of(cfg)?;
    let grid = Arc::new(DualGrid::uniform(cfg.length, cfg.n, cfg.mu_fraction)?);
    let params = step_params_of(cfg)?;
    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;

    let outcome = run(&problem, &grid, &params, cfg.t_end, &cfg.snapshot_times)?;

    let mut written = Vec::new();
    let mut summary = Csv::new("t,linf,l2,linf_rel");
    for snap in &outcome.snapshots {
        let t = snap.t;
        let taus = grid.taus();
        let phi = snap.spline.phi();
        let exact = problem.exact.as_ref();

        let mut table = Csv::new("t,x,u,u_exact,abs_error,kind");
        for i in 0..taus.len() {
            table.row(&solution_row(t, taus[i], phi[i], exact, "node"));
            if i + 1 < taus.len() {
                let width = taus[i + 1] - taus[i];
                for k in 1..=10 {
                    let x = taus[i] + width * k as f64 / 11.0;
                    table.row(&solution_row(t, x, snap.spline.eval(x), exact, "spline"));
                }
            }
        }
        let path = cfg.out_dir.join(format!("solution-{t}.csv"));
        write_atomic(&path, table.contents()).map_err(io_err(&path))?;
        written.push(path);

        match exact {
            Some(reference) => {
                let report = spline_error_norms(&snap.spline, 11, |x| reference(x, t))?;
                summary.row(&[
                    fmt_float(t),
                    fmt_float(report.linf),
                    fmt_float(report.l2),
                    fmt_float(report.linf_rel),
                ]);
            }
            None => summary.row(&[fmt_float(t), String::new(), String::new(), String::new()]),
        }
    }
    let path = cfg.out_dir.join("summary.csv");
    write_atomic(&path, summary.contents()).map_err(io_err(&path))?;
    written.push(path);
    Ok(written)
}

/// Spatial and temporal refinement sweeps in one `convergence.csv`; spatial
/// rows come first and level numbering continues through the temporal rows.
/// The order cell is empty on each sweep's first row and the marker `exact`
/// wherever the error sits at the machine floor.
pub fn cmd_convergence(cfg: &RunConfig, levels: usize) -> Result<PathBuf, CliError> {
    let problem = problem_of(cfg)?;
    let study = convergence_study(
        &problem,
        &StudyParams {
            base_n: cfg.n,
            levels,
            rho: cfg.rho,
            t_end: cfg.t_end,
            mu_fraction: cfg.mu_fraction,
            mode: cfg.mode,
            strict_monotone: cfg.strict_monotone,
            samples_per_interval: 4,
        },
    )?;

    let mut table = Csv::new("level,h,rho,linf,l2,order_linf");
    for (offset, sweep) in [(0, &study.spatial), (levels, &study.temporal)] {
        for level in sweep {
            let order = if level.exact_to_machine {
                "exact".to_string()
            } else {
                level.order_linf.map(fmt_float).unwrap_or_default()
            };
            table.row(&[
                (offset + level.level).to_string(),
                fmt_float(level.h),
                fmt_float(level.rho),
                fmt_float(level.linf),
                fmt_float(level.l2),
                order,
            ]);
        }
    }
    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    let path = cfg.out_dir.join("convergence.csv");
    write_atomic(&path, table.contents()).map_err(io_err(&path))?;
    Ok(path)
}

fn norm_cells(
    problem: &ProblemSpec,
    points: &[f64],
    values: &[f64],
    t: f64,
) -> Result<(String, String), CliError> {
    match &problem.exact {
        Some(reference) => {
            let report = error_norms(points, values, |x| reference(x, t))?;
            Ok((fmt_float(report.linf), fmt_float(report.l2)))
        }
        None => Ok((String::new(), String::new())),
    }
}

/// Monotone spline scheme against the upwind and central single-grid
/// baselines at matched `h` and `rho`, one `compare.csv` row per scheme and
/// snapshot; `min_u`/`max_u` track the whole run up to that snapshot.
pub fn cmd_compare(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let problem = problem_of(cfg)?;
    let grid = Arc::new(DualGrid::uniform(cfg.length, cfg.n, cfg.mu_fraction)?);
    let params = step_params_of(cfg)?;

    let mut table = Csv::new("scheme,t,linf,l2,min_u,max_u");
    let outcome = run(&problem, &grid, &params, cfg.t_end, &cfg.snapshot_times)?;
    for snap in &outcome.snapshots {
        let (linf, l2) = norm_cells(&problem, grid.taus(), snap.spline.phi(), snap.t)?;
        table.row(&[
            "spline_monotone".to_string(),
            fmt_float(snap.t),
            linf,
            l2,
            fmt_float(snap.running_min),
            fmt_float(snap.running_max),
        ]);
    }
    for kind in [BaselineKind::ImplicitUpwind, BaselineKind::ImplicitCentral] {
        let baseline = baseline_run(&problem, kind, cfg.n, cfg.rho, cfg.t_end, &cfg.snapshot_times)?;
        for snap in &baseline.snapshots {
            let (linf, l2) = norm_cells(&problem, &baseline.xs, &snap.values, snap.t)?;
            table.row(&[
                kind.name().to_string(),
                fmt_float(snap.t),
                linf,
                l2,
                fmt_float(snap.running_min),
                fmt_float(snap.running_max),
            ]);
        }
    }
    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    let path = cfg.out_dir.join("compare.csv");
    write_atomic(&path, table.contents()).map_err(io_err(&path))?;
    Ok(path)
}
