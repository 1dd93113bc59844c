use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Named time-stepping schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    /// Explicit Euler.
    Ee,
    /// Implicit Euler.
    Ie,
    /// Crank–Nicolson.
    Cn,
    /// Specular trigonometric (two-step).
    St,
    Se1,
    Se2,
    Se3,
    Se4,
    Se5,
    Se6,
}

impl SchemeId {
    pub const ALL: [SchemeId; 10] = [
        SchemeId::Ee,
        SchemeId::Ie,
        SchemeId::Cn,
        SchemeId::St,
        SchemeId::Se1,
        SchemeId::Se2,
        SchemeId::Se3,
        SchemeId::Se4,
        SchemeId::Se5,
        SchemeId::Se6,
    ];

    /// Lowercase short code used on the command line and in reports.
    pub fn code(self) -> &'static str {
        match self {
            SchemeId::Ee => "ee",
            SchemeId::Ie => "ie",
            SchemeId::Cn => "cn",
            SchemeId::St => "st",
            SchemeId::Se1 => "se1",
            SchemeId::Se2 => "se2",
            SchemeId::Se3 => "se3",
            SchemeId::Se4 => "se4",
            SchemeId::Se5 => "se5",
            SchemeId::Se6 => "se6",
        }
    }

    pub fn method(self) -> Method {
        match self {
            SchemeId::Ee => Method::ExplicitEuler,
            SchemeId::Ie => Method::ImplicitEuler,
            SchemeId::Cn => Method::CrankNicolson,
            SchemeId::St => Method::SpecularTrig,
            SchemeId::Se1 => Method::SpecularEuler(SeRule::TYPE1),
            SchemeId::Se2 => Method::SpecularEuler(SeRule::TYPE2),
            SchemeId::Se3 => Method::SpecularEuler(SeRule::TYPE3),
            SchemeId::Se4 => Method::SpecularEuler(SeRule::TYPE4),
            SchemeId::Se5 => Method::SpecularEuler(SeRule::TYPE5),
            SchemeId::Se6 => Method::SpecularEuler(SeRule::TYPE6),
        }
    }

    fn valid_codes() -> String {
        SchemeId::ALL.iter().map(|s| s.code()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_lowercase();
        SchemeId::ALL
            .into_iter()
            .find(|id| id.code() == wanted)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown scheme `{s}`; valid schemes: {}",
                    SchemeId::valid_codes()
                ))
            })
    }
}

/// What a slope argument of `A(αₙ, βₙ)` is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slope {
    /// `F(tₙ₋₁, uₙ₋₁)`
    SourcePrev,
    /// `F(tₙ, uₙ)`
    SourceCurrent,
    /// `F(tₙ₊₁, uₙ₊₁)`, implicit
    SourceNext,
    /// `(uₙ − uₙ₋₁)/h`
    BackwardQuotient,
    /// `(uₙ₊₁ − uₙ)/h`, implicit
    ForwardQuotient,
}

impl Slope {
    pub fn is_implicit(self) -> bool {
        matches!(self, Slope::SourceNext | Slope::ForwardQuotient)
    }

    pub fn needs_previous(self) -> bool {
        matches!(self, Slope::SourcePrev | Slope::BackwardQuotient)
    }
}

/// One row of the specular Euler family `uₙ₊₁ = uₙ + h·A(αₙ, βₙ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeRule {
    pub alpha: Slope,
    pub beta: Slope,
}

impl SeRule {
    pub const TYPE1: SeRule = SeRule::new(Slope::SourceCurrent, Slope::SourcePrev);
    pub const TYPE2: SeRule = SeRule::new(Slope::SourceCurrent, Slope::BackwardQuotient);
    pub const TYPE3: SeRule = SeRule::new(Slope::ForwardQuotient, Slope::SourcePrev);
    pub const TYPE4: SeRule = SeRule::new(Slope::ForwardQuotient, Slope::SourceCurrent);
    pub const TYPE5: SeRule = SeRule::new(Slope::SourceNext, Slope::SourceCurrent);
    pub const TYPE6: SeRule = SeRule::new(Slope::SourceNext, Slope::ForwardQuotient);
    /// `α = β = F(tₙ, uₙ)`, which is explicit Euler.
    pub const EXPLICIT_EULER_ROW: SeRule = SeRule::new(Slope::SourceCurrent, Slope::SourceCurrent);
    /// `α = β = F(tₙ₊₁, uₙ₊₁)`, which is implicit Euler.
    pub const IMPLICIT_EULER_ROW: SeRule = SeRule::new(Slope::SourceNext, Slope::SourceNext);

    pub const fn new(alpha: Slope, beta: Slope) -> SeRule {
        SeRule { alpha, beta }
    }

    pub fn is_implicit(&self) -> bool {
        self.alpha.is_implicit() || self.beta.is_implicit()
    }

    pub fn needs_previous(&self) -> bool {
        self.alpha.needs_previous() || self.beta.needs_previous()
    }
}

/// The update rule a solve actually runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    ExplicitEuler,
    ImplicitEuler,
    CrankNicolson,
    SpecularTrig,
    SpecularEuler(SeRule),
}

impl Method {
    /// Two-step methods get `u₁` from a [`U1Policy`] instead of from the update itself.
    pub fn needs_previous(&self) -> bool {
        match self {
            Method::SpecularTrig => true,
            Method::SpecularEuler(rule) => rule.needs_previous(),
            _ => false,
        }
    }

    pub fn is_implicit(&self) -> bool {
        match self {
            Method::ImplicitEuler | Method::CrankNicolson => true,
            Method::SpecularEuler(rule) => rule.is_implicit(),
            _ => false,
        }
    }
}

/// How two-step schemes obtain `u₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum U1Policy {
    /// `u₁ = u(t₀ + h)` from the exact solution.
    Exact,
    /// One explicit Euler step.
    BootstrapEe,
    /// One Crank–Nicolson step.
    BootstrapCn,
}

impl FromStr for U1Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(U1Policy::Exact),
            "ee" | "bootstrap_ee" => Ok(U1Policy::BootstrapEe),
            "cn" | "bootstrap_cn" => Ok(U1Policy::BootstrapCn),
            _ => Err(Error::Config(format!(
                "unknown u1 policy `{s}`; valid: exact, ee, cn"
            ))),
        }
    }
}

/// Step size and inner-solver settings for one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: SchemeId,
    pub h: f64,
    /// Fixed-point tolerance `η` on successive iterates of `uₙ₊₁`.
    pub eta: f64,
    /// Fixed-point iteration cap `M`.
    pub max_iters: usize,
    /// Only consulted by two-step schemes. `None` selects the exact solution
    /// when the problem has one and an explicit Euler step otherwise.
    pub u1_policy: Option<U1Policy>,
}

impl SchemeConfig {
    pub const DEFAULT_ETA: f64 = 1e-6;
    pub const DEFAULT_MAX_ITERS: usize = 100;

    pub fn new(scheme: SchemeId, h: f64) -> SchemeConfig {
        SchemeConfig {
            scheme,
            h,
            eta: Self::DEFAULT_ETA,
            max_iters: Self::DEFAULT_MAX_ITERS,
            u1_policy: None,
        }
    }

    pub fn with_eta(self, eta: f64) -> SchemeConfig {
        SchemeConfig { eta, ..self }
    }

    pub fn with_max_iters(self, max_iters: usize) -> SchemeConfig {
        SchemeConfig { max_iters, ..self }
    }

    pub fn with_u1_policy(self, policy: U1Policy) -> SchemeConfig {
        SchemeConfig {
            u1_policy: Some(policy),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::Config(format!("step size must be positive, got {}", self.h)));
        }
        if !(self.eta > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.eta)));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("iteration cap must be at least 1".into()));
        }
        Ok(())
    }
}
