//! Specular differentiation and the specular Euler family of time-stepping
//! schemes for scalar ODE initial value problems `u' = F(t, u)`.

pub mod auxiliary;
pub mod derivative;
pub mod error;
pub mod expr;
pub mod extended;
pub mod harness;
pub mod ode;
pub mod probes;
pub mod problems;
pub mod svg;

pub use auxiliary::{eval_a, eval_b, eval_b_trig};
pub use derivative::{
    estimate_one_sided, specular_derivative, specular_derivative_k, specular_from_one_sided,
    DiffSchedule, SpecularResult,
};
pub use error::{Error, Result, Side};
pub use extended::ExtendedReal;
pub use harness::{accumulated_error, convergence_sweep, error_ratio, sweep_schemes, ErrorReport, Norm};
pub use ode::{
    fixed_point_solve, solve_ivp, solve_with_method, step, IvpProblem, Method, SchemeConfig, SchemeId,
    SeRule, Trajectory, U1Policy,
};
pub use probes::{
    lipschitz_from_bounded_sd, quasi_fermat_probe, quasi_mvt_bracket, quasi_rolle_bracket, Bracket,
};
pub use problems::{circle_problem, dahlquist, load_problem, nonsmooth_linear};
