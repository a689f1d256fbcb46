//! Problem description: coefficients, boundary data, initial data and the
//! built-in benchmark presets.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::DualGrid;
use crate::verify::{exact_gaussian, manufactured_sine_solution, manufactured_sine_source};

/// Space-time scalar field `(x, t) -> value`.
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Boundary trace `t -> value`.
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Initial profile `x -> value`.
pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// PDE coefficient that is either a known constant or a sampled field.
/// Constants unlock the uniform fast path and the monotonicity report.
#[derive(Clone)]
pub enum Coefficient {
    Constant(f64),
    Variable(SpaceTimeFn),
}

impl Coefficient {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Variable(f) => f(x, t),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Coefficient::Constant(c) => Some(*c),
            Coefficient::Variable(_) => None,
        }
    }
}

impl From<f64> for Coefficient {
    fn from(c: f64) -> Self {
        Coefficient::Constant(c)
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(c) => write!(f, "Constant({c})"),
            Coefficient::Variable(_) => write!(f, "Variable(<field>)"),
        }
    }
}

/// Initial-boundary value problem
/// `u_t = D u_xx - V u_x + A u + f` on `(0, L)` with Dirichlet data.
#[derive(Clone)]
pub struct ProblemSpec {
    pub length: f64,
    pub diffusion: Coefficient,
    pub convection: Coefficient,
    pub reaction: Coefficient,
    pub source: Coefficient,
    pub left_boundary: TimeFn,
    pub right_boundary: TimeFn,
    pub initial: SpaceFn,
    /// Closed-form solution when one is known; drives error reporting.
    pub exact: Option<SpaceTimeFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("length", &self.length)
            .field("diffusion", &self.diffusion)
            .field("convection", &self.convection)
            .field("reaction", &self.reaction)
            .field("source", &self.source)
            .field("exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// Constant diffusion, convection and reaction values when all three are
    /// constants; `None` as soon as one of them is a sampled field.
    pub fn constant_coefficients(&self) -> Option<(f64, f64, f64)> {
        Some((
            self.diffusion.as_constant()?,
            self.convection.as_constant()?,
            self.reaction.as_constant()?,
        ))
    }

    /// Evaluate the exact solution, failing when none is attached.
    pub fn exact_at(&self, x: f64, t: f64) -> Result<f64> {
        match &self.exact {
            Some(u) => Ok(u(x, t)),
            None => Err(Error::MissingExactSolution),
        }
    }
}

/// Built-in benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Advected, spreading Gaussian pulse with a known closed form; the
    /// convection-dominated showcase problem.
    Gaussian,
    /// `u(x, t) = x`, held steady by the source `f = V`.
    LinearSteady,
    /// `u(x, t) = c`, held steady by the source `f = -A c`.
    Constant,
    /// `u(x, t) = e^{-t} sin(pi x / L)` with the matching manufactured source.
    ManufacturedSine,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        match s {
            "gaussian" => Ok(Preset::Gaussian),
            "linear_steady" => Ok(Preset::LinearSteady),
            "constant" => Ok(Preset::Constant),
            "manufactured_sine" => Ok(Preset::ManufacturedSine),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Gaussian => "gaussian",
            Preset::LinearSteady => "linear_steady",
            Preset::Constant => "constant",
            Preset::ManufacturedSine => "manufactured_sine",
        }
    }
}

/// Numeric inputs for [`build_problem`].
#[derive(Debug, Clone, Copy)]
pub struct PresetParams {
    pub length: f64,
    pub diffusion: f64,
    pub convection: f64,
    pub reaction: f64,
    /// Level of the `constant` preset; ignored by the other presets.
    pub constant_value: f64,
}

impl Default for PresetParams {
    fn default() -> Self {
        PresetParams {
            length: 1.0,
            diffusion: 1e-3,
            convection: 1.0,
            reaction: 0.0,
            constant_value: 1.0,
        }
    }
}

/// Initial centre of the Gaussian preset pulse.
pub const GAUSSIAN_CENTER: f64 = 0.4;

/// Build one of the benchmark problems. Every preset carries its exact
/// solution, so the run can always be scored.
pub fn build_problem(preset: Preset, params: &PresetParams) -> Result<ProblemSpec> {
    let PresetParams {
        length,
        diffusion,
        convection,
        reaction,
        constant_value,
    } = *params;
    if !(length > 0.0) {
        return Err(Error::NonPositiveLength(length));
    }
    if !(diffusion > 0.0) {
        return Err(Error::NonPositiveDiffusion(diffusion));
    }
    if convection == 0.0 {
        return Err(Error::ZeroConvection);
    }

    let problem = match preset {
        Preset::Gaussian => {
            let exact = move |x: f64, t: f64| {
                exact_gaussian(x, t, diffusion, convection, GAUSSIAN_CENTER)
            };
            ProblemSpec {
                length,
                diffusion: diffusion.into(),
                convection: convection.into(),
                reaction: 0.0.into(),
                source: 0.0.into(),
                left_boundary: Arc::new(move |t| exact(0.0, t)),
                right_boundary: Arc::new(move |t| exact(length, t)),
                initial: Arc::new(move |x| exact(x, 0.0)),
                exact: Some(Arc::new(exact)),
            }
        }
        Preset::LinearSteady => ProblemSpec {
            length,
            diffusion: diffusion.into(),
            convection: convection.into(),
            reaction: 0.0.into(),
            source: convection.into(),
            left_boundary: Arc::new(|_| 0.0),
            right_boundary: Arc::new(move |_| length),
            initial: Arc::new(|x| x),
            exact: Some(Arc::new(|x, _| x)),
        },
        Preset::Constant => {
            let c = constant_value;
            ProblemSpec {
                length,
                diffusion: diffusion.into(),
                convection: convection.into(),
                reaction: reaction.into(),
                source: (-reaction * c).into(),
                left_boundary: Arc::new(move |_| c),
                right_boundary: Arc::new(move |_| c),
                initial: Arc::new(move |_| c),
                exact: Some(Arc::new(move |_, _| c)),
            }
        }
        Preset::ManufacturedSine => ProblemSpec {
            length,
            diffusion: diffusion.into(),
            convection: convection.into(),
            reaction: reaction.into(),
            source: Coefficient::Variable(Arc::new(move |x, t| {
                manufactured_sine_source(x, t, diffusion, convection, reaction, length)
            })),
            left_boundary: Arc::new(|_| 0.0),
            right_boundary: Arc::new(|_| 0.0),
            initial: Arc::new(move |x| manufactured_sine_solution(x, 0.0, length)),
            exact: Some(Arc::new(move |x, t| {
                manufactured_sine_solution(x, t, length)
            })),
        },
    };
    Ok(problem)
}

/// Sample the initial profile at the collocation nodes: `u0_i = g(x_i)`,
/// with no interpolation involved.
pub fn sample_initial(problem: &ProblemSpec, grid: &DualGrid) -> Vec<f64> {
    grid.xs().iter().map(|&x| (problem.initial)(x)).collect()
}

/// Assembly route selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssemblyMode {
    /// Closed-form rows; requires a uniform grid and constant coefficients.
    Uniform,
    /// Interval-by-interval rows; accepts any interleaved grid and sampled
    /// coefficient fields.
    General,
}

/// Time-stepping parameters shared by assembly and the stepper.
#[derive(Debug, Clone, Copy)]
pub struct StepParams {
    pub rho: f64,
    pub mode: AssemblyMode,
    /// Refuse to step when the scheme is not provably monotone (default on).
    pub strict_monotone: bool,
}

impl StepParams {
    pub fn new(rho: f64, mode: AssemblyMode) -> Result<StepParams> {
        if !(rho > 0.0) {
            return Err(Error::NonPositiveTimeStep(rho));
        }
        Ok(StepParams {
            rho,
            mode,
            strict_monotone: true,
        })
    }

    pub fn permissive(mut self) -> StepParams {
        self.strict_monotone = false;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PresetParams {
        PresetParams {
            length: 2.4,
            diffusion: 0.001,
            convection: 1.0,
            reaction: 0.0,
            constant_value: 1.0,
        }
    }

    #[test]
    fn gaussian_initial_peak_value() {
        let p = build_problem(Preset::Gaussian, &params()).unwrap();
        let peak = (p.initial)(GAUSSIAN_CENTER);
        let expected = 1.0 / (2.0 * (std::f64::consts::PI * 0.001).sqrt());
        assert_eq!(peak, expected);
        assert!((peak - 8.92062).abs() < 1e-5 * peak);
    }

    #[test]
    fn gaussian_boundaries_follow_exact_solution() {
        let p = build_problem(Preset::Gaussian, &params()).unwrap();
        let exact = p.exact.clone().unwrap();
        for &t in &[0.0, 0.3, 1.0] {
            assert_eq!((p.left_boundary)(t), exact(0.0, t));
            assert_eq!((p.right_boundary)(t), exact(2.4, t));
        }
    }

    #[test]
    fn constant_preset_matches_hand_values() {
        let p = build_problem(
            Preset::Constant,
            &PresetParams {
                length: 2.0,
                constant_value: 3.0,
                reaction: 0.0,
                ..PresetParams::default()
            },
        )
        .unwrap();
        assert_eq!((p.initial)(1.0), 3.0);
        assert_eq!(p.source.eval(1.0, 0.5), 0.0);
    }

    #[test]
    fn constant_preset_balances_reaction_with_source() {
        let p = build_problem(
            Preset::Constant,
            &PresetParams {
                constant_value: 3.0,
                reaction: 2.0,
                ..PresetParams::default()
            },
        )
        .unwrap();
        assert_eq!(p.source.eval(0.3, 0.1), -6.0);
    }

    #[test]
    fn linear_steady_source_equals_convection() {
        let p = build_problem(
            Preset::LinearSteady,
            &PresetParams {
                convection: 2.5,
                ..PresetParams::default()
            },
        )
        .unwrap();
        assert_eq!(p.source.eval(0.7, 0.2), 2.5);
        assert_eq!((p.initial)(0.7), 0.7);
    }

    #[test]
    fn manufactured_sine_midpoint_and_boundaries() {
        let p = build_problem(
            Preset::ManufacturedSine,
            &PresetParams {
                length: 1.0,
                ..PresetParams::default()
            },
        )
        .unwrap();
        let exact = p.exact.clone().unwrap();
        assert!((exact(0.5, 0.0) - 1.0).abs() < 1e-15);
        assert!(exact(0.0, 0.7).abs() < 1e-15);
        assert!((p.left_boundary)(0.7).abs() < 1e-15);
        assert!((p.right_boundary)(0.7).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_diffusion() {
        let bad = PresetParams {
            diffusion: 0.0,
            ..params()
        };
        assert!(matches!(
            build_problem(Preset::Gaussian, &bad),
            Err(Error::NonPositiveDiffusion(_))
        ));
    }

    #[test]
    fn rejects_zero_convection() {
        let bad = PresetParams {
            convection: 0.0,
            ..params()
        };
        assert!(matches!(
            build_problem(Preset::Gaussian, &bad),
            Err(Error::ZeroConvection)
        ));
    }

    #[test]
    fn unknown_preset_name_is_an_error() {
        let err = "upwind_magic".parse::<Preset>().unwrap_err();
        assert!(matches!(err, Error::UnknownPreset(name) if name == "upwind_magic"));
    }

    #[test]
    fn sample_initial_hits_every_collocation_node() {
        let grid = DualGrid::uniform(1.0, 5, 0.5).unwrap();
        let p = build_problem(
            Preset::LinearSteady,
            &PresetParams {
                length: 1.0,
                ..PresetParams::default()
            },
        )
        .unwrap();
        let u0 = sample_initial(&p, &grid);
        assert_eq!(u0, vec![0.0, 0.125, 0.375, 0.625, 0.875, 1.0]);
    }

    #[test]
    fn sample_initial_of_constant_is_flat() {
        let grid = DualGrid::uniform(1.0, 6, 0.25).unwrap();
        let p = build_problem(
            Preset::Constant,
            &PresetParams {
                constant_value: 2.0,
                ..PresetParams::default()
            },
        )
        .unwrap();
        let u0 = sample_initial(&p, &grid);
        assert!(u0.iter().all(|&v| v == 2.0));
        assert_eq!(u0.len(), 7);
    }

    #[test]
    fn step_params_reject_nonpositive_rho() {
        assert!(matches!(
            StepParams::new(0.0, AssemblyMode::Uniform),
            Err(Error::NonPositiveTimeStep(_))
        ));
    }
}
