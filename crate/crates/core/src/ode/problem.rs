use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Right-hand side `F(t, u)` of `u' = F(t, u)`.
pub type SourceFn = dyn Fn(f64, f64) -> Result<f64> + Send + Sync;
/// A scalar function of time, used for exact solutions.
pub type ExactFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A scalar initial value problem `u' = F(t, u)`, `u(t0) = u0`, on `[t0, T]`.
///
/// Immutable after construction and cheap to clone.
#[derive(Clone)]
pub struct IvpProblem {
    name: String,
    source: Arc<SourceFn>,
    t0: f64,
    u0: f64,
    t_end: f64,
    exact: Option<Arc<ExactFn>>,
}

impl IvpProblem {
    pub fn new<F>(name: impl Into<String>, source: F, t0: f64, u0: f64, t_end: f64) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
    {
        if !(t0.is_finite() && u0.is_finite() && t_end.is_finite()) {
            return Err(Error::Config("t0, u0 and T must be finite".into()));
        }
        if t_end <= t0 {
            return Err(Error::Config(format!("end time T = {t_end} must exceed t0 = {t0}")));
        }
        Ok(IvpProblem {
            name: name.into(),
            source: Arc::new(source),
            t0,
            u0,
            t_end,
            exact: None,
        })
    }

    /// Attaches an exact solution, which must reproduce `u0` at `t0`.
    pub fn with_exact<E>(mut self, exact: E) -> Result<Self>
    where
        E: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let at_start = exact(self.t0);
        if !((at_start - self.u0).abs() <= 1e-12 * self.u0.abs().max(1.0)) {
            return Err(Error::Config(format!(
                "exact solution gives {at_start} at t0 = {}, but u0 = {}",
                self.t0, self.u0
            )));
        }
        self.exact = Some(Arc::new(exact));
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Evaluates `F(t, u)`; non-finite values are reported as domain errors.
    pub fn source(&self, t: f64, u: f64) -> Result<f64> {
        let v = (self.source)(t, u)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::SourceDomain {
                t,
                u,
                reason: format!("source evaluated to {v}"),
            })
        }
    }

    pub fn exact(&self) -> Option<&ExactFn> {
        self.exact.as_deref()
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_at(&self, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|e| e(t))
    }
}

impl fmt::Debug for IvpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IvpProblem")
            .field("name", &self.name)
            .field("t0", &self.t0)
            .field("u0", &self.u0)
            .field("t_end", &self.t_end)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}
