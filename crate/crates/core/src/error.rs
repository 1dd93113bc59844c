use std::fmt;

/// Which side of a point a one-sided difference quotient looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Right,
    Left,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Right => f.write_str("right"),
            Side::Left => f.write_str("left"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("function returned a non-finite value at x = {x}")]
    NonFiniteEvaluation { x: f64 },

    #[error("{side} difference quotients at x = {x} neither converge nor diverge within {levels} levels")]
    NoLimit { x: f64, side: Side, levels: usize },

    #[error("specular derivative does not exist at x = {x} (both one-sided derivatives are {sign}infinite)")]
    DoesNotExist { x: f64, sign: char },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("source is undefined at (t = {t}, u = {u}): {reason}")]
    SourceDomain { t: f64, u: f64, reason: String },

    #[error("fixed-point iteration produced a non-finite iterate at iteration {iteration}")]
    FixedPointDivergence { iteration: usize },

    #[error("specular trigonometric update hits the tangent singularity (angle {angle})")]
    TangentSingularity { angle: f64 },

    #[error("the update produced a non-finite value")]
    NonFiniteStep,

    #[error("step {step} at t = {t}: {source}")]
    Step {
        step: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("the problem has no exact solution, which is required here")]
    MissingExact,

    #[error("no bracket found on a grid of {grid_n} points for target slope {target}")]
    BracketNotFound { grid_n: usize, target: f64 },

    #[error("error ratio undefined for E_half = {e_half}, E = {e}")]
    UndefinedRatio { e_half: f64, e: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("missing required parameter `{0}`")]
    MissingParameter(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps the error with a short description of where it happened.
    pub fn context(self, context: impl Into<String>) -> Error {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Index of the failing time step, for errors raised while solving.
    pub fn step_index(&self) -> Option<usize> {
        match self {
            Error::Step { step, .. } => Some(*step),
            Error::Context { source, .. } => source.step_index(),
            _ => None,
        }
    }

    /// The innermost error, with all wrapping layers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } | Error::Step { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
