//! Specular derivatives from one-sided derivatives, and numeric estimation of
//! those one-sided derivatives by shrinking difference quotients.

use crate::auxiliary::{eval_a, x_minus_hypot, x_plus_hypot};
use crate::error::{Error, Result, Side};
use crate::extended::ExtendedReal;

/// Offsets and thresholds used to realise the limits `h ↘ 0` numerically.
///
/// Level `k` uses the offset `h0 · shrink^k` for `k = 0 .. max_levels`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffSchedule {
    pub h0: f64,
    pub shrink: f64,
    pub max_levels: usize,
    /// Successive limit estimates closer than `conv_tol · max(1, |estimate|)` count as converged.
    pub conv_tol: f64,
    /// Quotients beyond this magnitude, growing over three consecutive levels, are infinite.
    pub inf_threshold: f64,
    /// Richardson columns applied to the quotients (0 compares raw quotients).
    pub extrapolation: usize,
}

impl Default for DiffSchedule {
    fn default() -> Self {
        DiffSchedule {
            h0: 1e-2,
            shrink: 0.5,
            max_levels: 30,
            conv_tol: 1e-8,
            inf_threshold: 1e8,
            extrapolation: 3,
        }
    }
}

impl DiffSchedule {
    /// The schedule used for the inner and outer levels of higher-order derivatives.
    pub fn nested(&self) -> DiffSchedule {
        DiffSchedule {
            h0: 1e-3,
            conv_tol: 1e-5,
            extrapolation: 1,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.h0 > 0.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.max_levels >= 2
            && self.conv_tol > 0.0
            && self.inf_threshold > 0.0;
        if !ok {
            return Err(Error::Config(format!("invalid difference schedule {self:?}")));
        }
        let finest = self.h0 * self.shrink.powi(self.max_levels as i32 - 1);
        if finest <= 0.0 {
            return Err(Error::Config(format!(
                "difference schedule underflows: h0·shrink^{} = 0",
                self.max_levels - 1
            )));
        }
        Ok(())
    }

    fn offset(&self, level: usize) -> f64 {
        self.h0 * self.shrink.powi(level as i32)
    }
}

/// A specular derivative together with the one-sided derivatives it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecularResult {
    /// `None` exactly when both one-sided derivatives are the same infinity.
    pub value: Option<f64>,
    pub dplus: ExtendedReal,
    pub dminus: ExtendedReal,
}

impl SpecularResult {
    pub fn exists(&self) -> bool {
        self.value.is_some()
    }

    /// The value, or [`Error::DoesNotExist`] located at `x`.
    pub fn value_at(&self, x: f64) -> Result<f64> {
        self.value.ok_or(Error::DoesNotExist {
            x,
            sign: if self.dplus == ExtendedReal::PosInf { '+' } else { '-' },
        })
    }
}

/// Combines right and left derivatives `∂⁺f(x)`, `∂⁻f(x)` into `f^s(x)`.
pub fn specular_from_one_sided(dplus: ExtendedReal, dminus: ExtendedReal) -> SpecularResult {
    use ExtendedReal::*;
    let value = match (dplus, dminus) {
        (PosInf, PosInf) | (NegInf, NegInf) => None,
        (PosInf, NegInf) | (NegInf, PosInf) => Some(0.0),
        (Finite(p), Finite(m)) => Some(eval_a(p, m)),
        (Finite(p), PosInf) => Some(x_plus_hypot(p)),
        (Finite(p), NegInf) => Some(x_minus_hypot(p)),
        (PosInf, Finite(m)) => Some(x_plus_hypot(m)),
        (NegInf, Finite(m)) => Some(x_minus_hypot(m)),
    };
    SpecularResult {
        value,
        dplus,
        dminus,
    }
}

fn eval_checked(f: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFiniteEvaluation { x })
    }
}

/// Estimates `∂⁺f(x)` or `∂⁻f(x)` from difference quotients at shrinking offsets.
///
/// Finite limits are accelerated by Richardson extrapolation over the
/// geometric offsets: each column `T_{k,j} = (T_{k,j−1} − s^j·T_{k−1,j−1}) / (1 − s^j)`
/// cancels one more power of `h`, up to `extrapolation` columns. The first extrapolant within
/// tolerance of the previous level's is returned. Three consecutive quotients beyond `±inf_threshold`, strictly
/// growing in magnitude, classify the limit as infinite.
pub fn estimate_one_sided<F>(f: F, x: f64, side: Side, sched: &DiffSchedule) -> Result<ExtendedReal>
where
    F: Fn(f64) -> f64,
{
    estimate_dyn(&f, x, side, sched)
}

fn estimate_dyn(
    f: &dyn Fn(f64) -> f64,
    x: f64,
    side: Side,
    sched: &DiffSchedule,
) -> Result<ExtendedReal> {
    sched.validate()?;
    let fx = eval_checked(f, x)?;
    let s = sched.shrink;

    let mut quotients: Vec<f64> = Vec::with_capacity(sched.max_levels);
    // Last row of the Richardson tableau; column j has the h^1..h^j error terms removed.
    let mut row: Vec<f64> = Vec::with_capacity(sched.extrapolation + 1);
    let mut prev_best: Option<f64> = None;
    for level in 0..sched.max_levels {
        let h = sched.offset(level);
        let q = match side {
            Side::Right => (eval_checked(f, x + h)? - fx) / h,
            Side::Left => (fx - eval_checked(f, x - h)?) / h,
        };
        quotients.push(q);

        if let [.., a, b, c] = quotients[..] {
            let t = sched.inf_threshold;
            if a > t && b > a && c > b {
                return Ok(ExtendedReal::PosInf);
            }
            if a < -t && b < a && c < b {
                return Ok(ExtendedReal::NegInf);
            }
        }

        let mut next = Vec::with_capacity(sched.extrapolation + 1);
        next.push(q);
        let mut factor = 1.0;
        for &above in row.iter().take(sched.extrapolation) {
            factor *= s;
            let cur = next[next.len() - 1];
            next.push((cur - factor * above) / (1.0 - factor));
        }
        row = next;

        if level >= 1 {
            let best = row[row.len() - 1];
            if let Some(pb) = prev_best {
                if (best - pb).abs() <= sched.conv_tol * best.abs().max(1.0) {
                    return Ok(ExtendedReal::Finite(best));
                }
            }
            prev_best = Some(best);
        }
    }
    Err(Error::NoLimit {
        x,
        side,
        levels: sched.max_levels,
    })
}

/// Numerically estimates `f^s(x)` from both one-sided derivatives.
pub fn specular_derivative<F>(f: F, x: f64, sched: &DiffSchedule) -> Result<SpecularResult>
where
    F: Fn(f64) -> f64,
{
    specular_dyn(&f, x, sched)
}

fn specular_dyn(f: &dyn Fn(f64) -> f64, x: f64, sched: &DiffSchedule) -> Result<SpecularResult> {
    let dplus = estimate_dyn(f, x, Side::Right, sched)?;
    let dminus = estimate_dyn(f, x, Side::Left, sched)?;
    Ok(specular_from_one_sided(dplus, dminus))
}

/// The `k`-th order specular derivative `f^[k](x)`, defined recursively as the
/// specular derivative of `y ↦ f^[k−1](y)`.
///
/// For `k ≥ 2` every level uses [`DiffSchedule::nested`], since each nesting
/// divides the noise of the level below by the offset again.
pub fn specular_derivative_k<F>(f: F, x: f64, k: usize, sched: &DiffSchedule) -> Result<SpecularResult>
where
    F: Fn(f64) -> f64,
{
    match k {
        0 => Err(Error::Config("derivative order must be at least 1".into())),
        1 => specular_dyn(&f, x, sched),
        _ => {
            let nested = sched.nested();
            nth_dyn(&f, x, k, &nested)
        }
    }
}

fn nth_dyn(f: &dyn Fn(f64) -> f64, x: f64, k: usize, sched: &DiffSchedule) -> Result<SpecularResult> {
    if k == 1 {
        return specular_dyn(f, x, sched);
    }
    // The inner map cannot return a `Result`, so its first failure is parked here.
    let failure = std::cell::RefCell::new(None::<Error>);
    let inner = |y: f64| match nth_dyn(f, y, k - 1, sched).and_then(|r| r.value_at(y)) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let outer = specular_dyn(&inner, x, sched);
    if let Some(e) = failure.into_inner() {
        return Err(e.context(format!("order-{} specular derivative at x = {x}", k - 1)));
    }
    outer
}
