//! Time-stepping for scalar initial value problems.

mod fixed_point;
mod problem;
mod scheme;
mod solve;

pub use fixed_point::{fixed_point_solve, FixedPoint};
pub use problem::{ExactFn, IvpProblem, SourceFn};
pub use scheme::{Method, SchemeConfig, SchemeId, SeRule, Slope, U1Policy};
pub use solve::{
    local_truncation_errors, solve_ivp, solve_with_method, step, step_count, StepOutcome, Trajectory,
};
