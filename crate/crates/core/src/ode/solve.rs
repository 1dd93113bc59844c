use std::f64::consts::FRAC_PI_2;

use super::fixed_point::fixed_point_solve;
use super::problem::IvpProblem;
use super::scheme::{Method, SchemeConfig, SeRule, Slope, U1Policy};
use crate::auxiliary::eval_a;
use crate::error::{Error, Result};

/// Distance from `±π/2` at which the trigonometric update is refused.
const TANGENT_GUARD: f64 = 1e-9;

/// Computed nodes `(tₙ, uₙ)` of one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub h: f64,
    /// `values[0]` is `(t0, u0)`, and `values[n].0 == t0 + n·h`.
    pub values: Vec<(f64, f64)>,
    /// Map evaluations spent on step `n → n+1`; 0 for explicit updates.
    pub fp_iterations: Vec<usize>,
    /// Steps whose fixed-point iteration hit the cap before meeting `η`.
    pub nonconverged_steps: Vec<usize>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn last(&self) -> (f64, f64) {
        *self.values.last().expect("trajectory always holds the initial node")
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|&(t, _)| t)
    }
}

/// Result of advancing one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl StepOutcome {
    fn explicit(value: f64) -> StepOutcome {
        StepOutcome {
            value,
            iterations: 0,
            converged: true,
        }
    }
}

/// Number of full steps of length `h` that fit in `[t0, T]`.
///
/// A ratio within `1e−9` (relative) of an integer counts as that integer, so
/// `T = 2.5, h = 0.1` gives 25 steps despite `2.5 / 0.1 > 25` in binary.
pub fn step_count(t0: f64, t_end: f64, h: f64) -> Result<usize> {
    let ratio = (t_end - t0) / h;
    if !(ratio.is_finite() && ratio >= 0.0) {
        return Err(Error::Config(format!("cannot step from {t0} to {t_end} with h = {h}")));
    }
    let nearest = ratio.round();
    let n = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        ratio.floor()
    };
    if n < 1.0 {
        return Err(Error::Config(format!(
            "step size h = {h} exceeds the interval [{t0}, {t_end}]"
        )));
    }
    if n > u32::MAX as f64 {
        return Err(Error::Config(format!("too many steps ({n}) for h = {h}")));
    }
    Ok(n as usize)
}

/// Advances from `current = (tₙ, uₙ)` by one step of `config.h`.
///
/// `previous` must hold `(tₙ₋₁, uₙ₋₁)` for two-step methods. Implicit
/// updates are solved by fixed-point iteration seeded with the explicit Euler
/// predictor. Iteration runs on the slope `s = (uₙ₊₁ − uₙ)/h`; the stopping
/// test `h·|Δs| < η` is the test `|Δuₙ₊₁| < η` on the iterates of `uₙ₊₁`.
pub fn step(
    method: &Method,
    problem: &IvpProblem,
    config: &SchemeConfig,
    previous: Option<(f64, f64)>,
    current: (f64, f64),
) -> Result<StepOutcome> {
    let h = config.h;
    let (t, u) = current;
    let t_next = t + h;
    let f_now = problem.source(t, u)?;
    let slope_tol = config.eta / h;
    let source_next = |s: f64| problem.source(t_next, u + h * s);
    let missing_previous = || Error::Config("two-step method needs the previous node".into());

    let finish = |slope: f64, iterations: usize, converged: bool| -> Result<StepOutcome> {
        let value = u + h * slope;
        if value.is_finite() {
            Ok(StepOutcome {
                value,
                iterations,
                converged,
            })
        } else {
            Err(Error::NonFiniteStep)
        }
    };

    match *method {
        Method::ExplicitEuler => finish(f_now, 0, true),
        Method::ImplicitEuler => {
            let fp = fixed_point_solve(source_next, f_now, slope_tol, config.max_iters)?;
            finish(fp.value, fp.iterations, fp.converged)
        }
        Method::CrankNicolson => {
            let fp = fixed_point_solve(
                |s| Ok(0.5 * (f_now + source_next(s)?)),
                f_now,
                slope_tol,
                config.max_iters,
            )?;
            finish(fp.value, fp.iterations, fp.converged)
        }
        Method::SpecularTrig => {
            let (_, u_prev) = previous.ok_or_else(missing_previous)?;
            let angle = 2.0 * f_now.atan() - ((u - u_prev) / h).atan();
            // the angle lies in (−3π/2, 3π/2); tan is singular only near ±π/2
            if (angle.abs() - FRAC_PI_2).abs() < TANGENT_GUARD {
                return Err(Error::TangentSingularity { angle });
            }
            finish(angle.tan(), 0, true)
        }
        Method::SpecularEuler(rule) => {
            let f_prev = match previous {
                Some((tp, up)) if rule.needs_previous() => Some(problem.source(tp, up)?),
                _ => None,
            };
            let slope_of = |which: Slope, s: f64| -> Result<f64> {
                match which {
                    Slope::SourceCurrent => Ok(f_now),
                    Slope::SourceNext => source_next(s),
                    Slope::ForwardQuotient => Ok(s),
                    Slope::SourcePrev => f_prev.ok_or_else(missing_previous),
                    Slope::BackwardQuotient => {
                        let (_, u_prev) = previous.ok_or_else(missing_previous)?;
                        Ok((u - u_prev) / h)
                    }
                }
            };
            let combined = |s: f64| Ok(eval_a(slope_of(rule.alpha, s)?, slope_of(rule.beta, s)?));
            if rule.is_implicit() {
                let fp = fixed_point_solve(combined, f_now, slope_tol, config.max_iters)?;
                finish(fp.value, fp.iterations, fp.converged)
            } else {
                finish(combined(f_now)?, 0, true)
            }
        }
    }
}

/// Solves with the scheme named in `config`.
pub fn solve_ivp(problem: &IvpProblem, config: &SchemeConfig) -> Result<Trajectory> {
    solve_with_method(problem, &config.scheme.method(), config)
}

/// Solves with an explicit update rule, e.g. a specular Euler row outside the named types.
///
/// Takes `⌊(T − t0)/h⌋` steps (see [`step_count`]); node times are
/// `t0 + n·h`, so the last node lies in `(T − h, T]`.
pub fn solve_with_method(
    problem: &IvpProblem,
    method: &Method,
    config: &SchemeConfig,
) -> Result<Trajectory> {
    config.validate()?;
    let h = config.h;
    let t0 = problem.t0();
    let steps = step_count(t0, problem.t_end(), h)?;

    let mut values = Vec::with_capacity(steps + 1);
    let mut fp_iterations = Vec::with_capacity(steps);
    let mut nonconverged_steps = Vec::new();
    values.push((t0, problem.u0()));

    for n in 0..steps {
        let t = t0 + n as f64 * h;
        let t_next = t0 + (n + 1) as f64 * h;
        let current = (t, values[n].1);
        let outcome = if n == 0 && method.needs_previous() {
            first_step(problem, config, current, t_next)
        } else {
            let previous = n.checked_sub(1).map(|m| values[m]);
            step(method, problem, config, previous, current)
        }
        .map_err(|e| Error::Step {
            step: n,
            t,
            source: Box::new(e),
        })?;

        if !outcome.converged {
            nonconverged_steps.push(n);
        }
        fp_iterations.push(outcome.iterations);
        values.push((t_next, outcome.value));
    }

    Ok(Trajectory {
        t0,
        h,
        values,
        fp_iterations,
        nonconverged_steps,
    })
}

fn first_step(
    problem: &IvpProblem,
    config: &SchemeConfig,
    current: (f64, f64),
    t_next: f64,
) -> Result<StepOutcome> {
    let policy = config.u1_policy.unwrap_or(if problem.has_exact() {
        U1Policy::Exact
    } else {
        U1Policy::BootstrapEe
    });
    match policy {
        U1Policy::Exact => problem
            .exact_at(t_next)
            .map(StepOutcome::explicit)
            .ok_or(Error::MissingExact),
        U1Policy::BootstrapEe => step(&Method::ExplicitEuler, problem, config, None, current),
        U1Policy::BootstrapCn => step(&Method::CrankNicolson, problem, config, None, current),
    }
}

/// Local truncation error of the type-5 update along the exact solution,
/// `τₙ₊₁ = (u(tₙ₊₁) − u(tₙ))/h − A(F(tₙ₊₁, u(tₙ₊₁)), F(tₙ, u(tₙ)))`, for
/// `n = 0 .. ⌊(T − t0)/h⌋ − 1`.
pub fn local_truncation_errors(problem: &IvpProblem, h: f64) -> Result<Vec<f64>> {
    let exact = problem.exact().ok_or(Error::MissingExact)?;
    let t0 = problem.t0();
    let steps = step_count(t0, problem.t_end(), h)?;
    let rule = SeRule::TYPE5;
    debug_assert_eq!(rule.alpha, Slope::SourceNext);
    (0..steps)
        .map(|n| {
            let t = t0 + n as f64 * h;
            let t_next = t0 + (n + 1) as f64 * h;
            let (u, u_next) = (exact(t), exact(t_next));
            let a = eval_a(problem.source(t_next, u_next)?, problem.source(t, u)?);
            Ok((u_next - u) / h - a)
        })
        .collect()
}
