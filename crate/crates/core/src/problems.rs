//! Benchmark problems with exact solutions, and problems loaded from TOML.

use serde::Deserialize;
use toml::Spanned;

use crate::auxiliary::eval_a;
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::ode::IvpProblem;

pub const BUILTINS: [&str; 3] = ["dahlquist", "circle", "nonsmooth"];

/// `u' = λu`, `u(t0) = u0`, with exact solution `u0·e^{λ(t − t0)}`.
pub fn dahlquist(lambda: f64, u0: f64, t0: f64, t_end: f64) -> Result<IvpProblem> {
    if !lambda.is_finite() {
        return Err(Error::Config(format!("lambda must be finite, got {lambda}")));
    }
    IvpProblem::new("dahlquist", move |_, u| Ok(lambda * u), t0, u0, t_end)?
        .with_exact(move |t| u0 * (lambda * (t - t0)).exp())
}

/// `u' = −tu/(1 − t²)`, `u(0) = 1` on `[0, T]`, whose solution `√(1 − t²)` is a quarter circle.
pub fn circle_problem(t_end: f64) -> Result<IvpProblem> {
    if !(t_end > 0.0 && t_end < 1.0) {
        return Err(Error::Config(format!(
            "circle problem needs 0 < T < 1 (singular at t = 1), got T = {t_end}"
        )));
    }
    let source = |t: f64, u: f64| {
        if t.abs() >= 1.0 {
            Err(Error::SourceDomain {
                t,
                u,
                reason: "circle source is singular for |t| >= 1".into(),
            })
        } else {
            Ok(-t * u / (1.0 - t * t))
        }
    };
    IvpProblem::new("circle", source, 0.0, 1.0, t_end)?.with_exact(|t| (1.0 - t * t).sqrt())
}

/// The kinked forcing `F_c`: `3t + 1` for `t > 0`, `0` for `t < 0`, and at the
/// kink the value making `t ↦ t·1[t≥0] + c·e^{−3t}` solve the specular ODE.
pub fn nonsmooth_forcing(c: f64, t: f64) -> f64 {
    if t > 0.0 {
        3.0 * t + 1.0
    } else if t < 0.0 {
        0.0
    } else if c == 1.0 / 6.0 {
        0.5
    } else {
        eval_a(1.0 - 3.0 * c, -3.0 * c) + 3.0 * c
    }
}

/// Exact solution of the nonsmooth benchmark: `t + c·e^{−3t}` for `t ≥ 0`, `c·e^{−3t}` before.
pub fn nonsmooth_exact(c: f64, t: f64) -> f64 {
    let decay = c * (-3.0 * t).exp();
    if t >= 0.0 {
        t + decay
    } else {
        decay
    }
}

/// `u' = F_c(t) − 3u` on `[t0, T]`, with `u0` taken from the exact solution.
pub fn nonsmooth_linear(c: f64, t0: f64, t_end: f64) -> Result<IvpProblem> {
    if !c.is_finite() {
        return Err(Error::Config(format!("c must be finite, got {c}")));
    }
    let source = move |t: f64, u: f64| Ok(nonsmooth_forcing(c, t) - 3.0 * u);
    IvpProblem::new("nonsmooth", source, t0, nonsmooth_exact(c, t0), t_end)?
        .with_exact(move |t| nonsmooth_exact(c, t))
}

/// Parameters naming a built-in problem; `None` fields fall back to defaults
/// where one exists and are otherwise reported missing.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BuiltinParams {
    pub lambda: Option<f64>,
    pub u0: Option<f64>,
    pub t0: Option<f64>,
    pub t_end: Option<f64>,
    pub c: Option<f64>,
}

fn required(value: Option<f64>, name: &str) -> Result<f64> {
    value.ok_or_else(|| Error::MissingParameter(name.to_string()))
}

fn reject_extra(value: Option<f64>, name: &str, builtin: &str) -> Result<()> {
    match value {
        Some(_) => Err(Error::Config(format!("`{name}` is not a parameter of `{builtin}`"))),
        None => Ok(()),
    }
}

/// Builds a built-in problem. `dahlquist` needs `lambda`, `u0`, `T` (and
/// takes `t0`, default 0); `circle` needs `T`; `nonsmooth` needs `c`, `t0`, `T`.
pub fn builtin(name: &str, params: &BuiltinParams) -> Result<IvpProblem> {
    let t_end = required(params.t_end, "T");
    match name {
        "dahlquist" => {
            reject_extra(params.c, "c", name)?;
            dahlquist(
                required(params.lambda, "lambda")?,
                required(params.u0, "u0")?,
                params.t0.unwrap_or(0.0),
                t_end?,
            )
        }
        "circle" => {
            reject_extra(params.lambda, "lambda", name)?;
            reject_extra(params.c, "c", name)?;
            if params.t0.is_some_and(|t0| t0 != 0.0) || params.u0.is_some_and(|u0| u0 != 1.0) {
                return Err(Error::Config("circle problem is fixed at t0 = 0, u0 = 1".into()));
            }
            circle_problem(t_end?)
        }
        "nonsmooth" => {
            reject_extra(params.lambda, "lambda", name)?;
            if params.u0.is_some() {
                return Err(Error::Config("nonsmooth problem takes u0 from its exact solution".into()));
            }
            nonsmooth_linear(required(params.c, "c")?, required(params.t0, "t0")?, t_end?)
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    name: Option<String>,
    builtin: Option<String>,
    source: Option<Spanned<String>>,
    exact: Option<Spanned<String>>,
    lambda: Option<f64>,
    u0: Option<f64>,
    t0: Option<f64>,
    #[serde(rename = "T", alias = "t_end")]
    t_end: Option<f64>,
    c: Option<f64>,
}

impl ProblemFile {
    fn params(&self) -> BuiltinParams {
        BuiltinParams {
            lambda: self.lambda,
            u0: self.u0,
            t0: self.t0,
            t_end: self.t_end,
            c: self.c,
        }
    }
}

/// Line and 1-based column of byte `offset` in `text`.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}

/// Compiles an expression stored in a TOML string, mapping error columns
/// back to positions in the whole document.
fn compile_spanned(doc: &str, value: &Spanned<String>, vars: &[&str]) -> Result<Expression> {
    Expression::compile(value.get_ref(), vars).map_err(|e| match e {
        Error::Parse { column, message, .. } => {
            let start = value.span().start;
            let quote = if doc[start..].starts_with("\"\"\"") || doc[start..].starts_with("'''") {
                3
            } else {
                1
            };
            let inner = &doc[start + quote..];
            let byte = inner
                .char_indices()
                .nth(column - 1)
                .map_or(inner.len(), |(b, _)| b);
            let (line, column) = line_column(doc, start + quote + byte);
            Error::Parse { line, column, message }
        }
        other => other,
    })
}

/// Reads a problem from a TOML document.
///
/// Either `builtin = "<name>"` with that problem's parameters, or
/// `source = "<expr in t, u>"` with `u0`, `T`, optional `t0` (default 0),
/// optional `exact = "<expr in t>"` and optional `name`.
pub fn load_problem(config_text: &str) -> Result<IvpProblem> {
    let file: ProblemFile = toml::from_str(config_text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(config_text, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;

    match (&file.builtin, &file.source) {
        (Some(_), Some(_)) => Err(Error::Config("give either `builtin` or `source`, not both".into())),
        (None, None) => Err(Error::MissingParameter("builtin or source".into())),
        (Some(name), None) => {
            if file.exact.is_some() {
                return Err(Error::Config("built-in problems carry their own exact solution".into()));
            }
            builtin(name, &file.params())
        }
        (None, Some(source)) => {
            let p = &file.params();
            reject_extra(p.lambda, "lambda", "an expression problem")?;
            reject_extra(p.c, "c", "an expression problem")?;
            let source = compile_spanned(config_text, source, &["t", "u"])?;
            let exact = file
                .exact
                .as_ref()
                .map(|e| compile_spanned(config_text, e, &["t"]))
                .transpose()?;
            let name = file.name.clone().unwrap_or_else(|| "custom".into());
            let problem = IvpProblem::new(
                name,
                move |t, u| Ok(source.eval(&[t, u])),
                p.t0.unwrap_or(0.0),
                required(p.u0, "u0")?,
                required(p.t_end, "T")?,
            )?;
            match exact {
                Some(e) => problem.with_exact(move |t| e.eval(&[t])),
                None => Ok(problem),
            }
        }
    }
}
