//! Numeric probes for the specular analogues of Fermat's, Rolle's and the
//! mean value theorem, and for the Lipschitz bound they imply.
//!
//! Existence claims are checked on a uniform interior grid
//! `xᵢ = a + i·(b − a)/(n + 1)`, `i = 1..=n`, scanned left to right.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derivative::{specular_derivative, DiffSchedule};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_GRID_N: usize = 1024;

pub const NAMED_FUNCTIONS: [&str; 3] = ["kink", "relu", "lsc"];

/// Built-in probe targets: `kink` is `−x` left of 0 and `2x` right of it,
/// `relu` is `max(x, 0)`, and `lsc` is `x²` for `x ≤ 1` and `x + eps` beyond.
pub fn named_function(name: &str, eps: f64) -> Result<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
    match name {
        "kink" => Ok(Box::new(|x: f64| if x < 0.0 { -x } else { 2.0 * x })),
        "relu" => Ok(Box::new(|x: f64| x.max(0.0))),
        "lsc" => {
            if !(eps >= 0.0 && eps.is_finite()) {
                return Err(Error::Config(format!("eps must be a finite value >= 0, got {eps}")));
            }
            Ok(Box::new(move |x: f64| if x <= 1.0 { x * x } else { x + eps }))
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// Verdict of [`quasi_fermat_probe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermatOutcome {
    pub pass: bool,
    /// The specular derivative at the claimed extremum.
    pub value: f64,
}

/// At a local extremum the specular derivative is bounded by one in magnitude.
/// Passes iff `|f^s(x*)| ≤ 1 + tol`.
pub fn quasi_fermat_probe<F>(f: F, xstar: f64, sched: &DiffSchedule, tol: f64) -> Result<FermatOutcome>
where
    F: Fn(f64) -> f64,
{
    let value = specular_derivative(f, xstar, sched)?.value_at(xstar)?;
    Ok(FermatOutcome {
        pass: value.abs() <= 1.0 + tol,
        value,
    })
}

/// Points `c1`, `c2` with `f^s(c1) ≤ target + tol` and `f^s(c2) ≥ target − tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub c1: f64,
    pub c2: f64,
    pub lower_value: f64,
    pub upper_value: f64,
    pub target: f64,
}

fn check_interval(a: f64, b: f64, grid_n: usize) -> Result<()> {
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::Config(format!("need a finite interval a < b, got [{a}, {b}]")));
    }
    if grid_n < 3 {
        return Err(Error::Config(format!("grid_n must be at least 3, got {grid_n}")));
    }
    Ok(())
}

fn bracket_for_target<F>(f: &F, a: f64, b: f64, grid_n: usize, sched: &DiffSchedule, tol: f64, target: f64) -> Result<Bracket>
where
    F: Fn(f64) -> f64,
{
    let step = (b - a) / (grid_n + 1) as f64;
    let mut lower: Option<(f64, f64)> = None;
    let mut upper: Option<(f64, f64)> = None;
    for i in 1..=grid_n {
        let x = a + i as f64 * step;
        let v = specular_derivative(f, x, sched)?.value_at(x)?;
        if lower.is_none() && v <= target + tol {
            lower = Some((x, v));
        }
        if upper.is_none() && v >= target - tol {
            upper = Some((x, v));
        }
        if let (Some((c1, lower_value)), Some((c2, upper_value))) = (lower, upper) {
            return Ok(Bracket {
                c1,
                c2,
                lower_value,
                upper_value,
                target,
            });
        }
    }
    Err(Error::BracketNotFound { grid_n, target })
}

/// Brackets the secant slope `k = (f(b) − f(a))/(b − a)` between specular
/// derivatives at interior grid points, returning the first qualifying `c1` and `c2`.
pub fn quasi_mvt_bracket<F>(f: F, a: f64, b: f64, grid_n: usize, sched: &DiffSchedule, tol: f64) -> Result<Bracket>
where
    F: Fn(f64) -> f64,
{
    check_interval(a, b, grid_n)?;
    let k = (f(b) - f(a)) / (b - a);
    if !k.is_finite() {
        return Err(Error::NonFiniteEvaluation { x: if f(a).is_finite() { b } else { a } });
    }
    bracket_for_target(&f, a, b, grid_n, sched, tol, k)
}

/// [`quasi_mvt_bracket`] with target 0, for `f` vanishing (within `tol`) at both endpoints.
pub fn quasi_rolle_bracket<F>(f: F, a: f64, b: f64, grid_n: usize, sched: &DiffSchedule, tol: f64) -> Result<Bracket>
where
    F: Fn(f64) -> f64,
{
    check_interval(a, b, grid_n)?;
    let (fa, fb) = (f(a), f(b));
    if !(fa.abs() <= tol && fb.abs() <= tol) {
        return Err(Error::Config(format!(
            "Rolle probe needs f(a) = f(b) = 0, got f({a}) = {fa}, f({b}) = {fb}"
        )));
    }
    bracket_for_target(&f, a, b, grid_n, sched, tol, 0.0)
}

/// Verdict of [`lipschitz_from_bounded_sd`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzOutcome {
    pub pass: bool,
    /// Largest `|f(x₁) − f(x₂)| / (M·|x₁ − x₂|)` over the sampled pairs.
    pub worst_ratio: f64,
    /// Largest `|f^s|` seen at the first point of each pair, a check on the hypothesis.
    pub max_abs_sd: f64,
}

/// A bound `|f^s| ≤ M` on `(a, b)` makes `f` `M`-Lipschitz there. Samples
/// `samples` random pairs (seeded) and passes iff every pair satisfies
/// `|f(x₁) − f(x₂)| ≤ M·|x₁ − x₂|·(1 + 1e−9)`.
pub fn lipschitz_from_bounded_sd<F>(
    f: F,
    a: f64,
    b: f64,
    m: f64,
    samples: usize,
    sched: &DiffSchedule,
    seed: u64,
) -> Result<LipschitzOutcome>
where
    F: Fn(f64) -> f64,
{
    check_interval(a, b, 3)?;
    if samples < 2 {
        return Err(Error::Config(format!("need at least 2 samples, got {samples}")));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Config(format!("bound M must be positive, got {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_ratio = 0.0f64;
    let mut max_abs_sd = 0.0f64;
    for _ in 0..samples {
        let x1 = rng.random_range(a..b);
        let x2 = rng.random_range(a..b);
        if x1 == x2 {
            continue;
        }
        let ratio = (f(x1) - f(x2)).abs() / (m * (x1 - x2).abs());
        if !ratio.is_finite() {
            return Err(Error::NonFiniteEvaluation { x: x1 });
        }
        worst_ratio = worst_ratio.max(ratio);
        let sd = specular_derivative(&f, x1, sched)?.value_at(x1)?;
        max_abs_sd = max_abs_sd.max(sd.abs());
    }
    Ok(LipschitzOutcome {
        pass: worst_ratio <= 1.0 + 1e-9,
        worst_ratio,
        max_abs_sd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sched() -> DiffSchedule {
        DiffSchedule::default()
    }

    fn kink(x: f64) -> f64 {
        if x < 0.0 {
            -x
        } else {
            2.0 * x
        }
    }

    #[test]
    fn named_functions() {
        let lsc = named_function("lsc", 0.5).unwrap();
        let r = specular_derivative(&*lsc, 1.0, &sched()).unwrap();
        assert!((r.value.unwrap() - (2.0 + 5f64.sqrt())).abs() < 1e-6);
        let relu = named_function("relu", 0.0).unwrap();
        let r = specular_derivative(&*relu, 0.0, &sched()).unwrap();
        assert!((r.value.unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-6);
        assert_eq!(named_function("kink", 0.0).unwrap()(-2.0), 2.0);
        assert!(named_function("lsc", -1.0).is_err());
        assert!(matches!(named_function("bump", 0.0), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn fermat_examples() {
        let r = quasi_fermat_probe(kink, 0.0, &sched(), DEFAULT_TOL).unwrap();
        assert!(r.pass);
        assert!((r.value - (10f64.sqrt() - 3.0)).abs() < 1e-6);
        let r = quasi_fermat_probe(|x| x * x, 0.0, &sched(), DEFAULT_TOL).unwrap();
        assert!(r.pass && r.value.abs() < 1e-6);
        let r = quasi_fermat_probe(f64::abs, 0.0, &sched(), DEFAULT_TOL).unwrap();
        assert_eq!(r, FermatOutcome { pass: true, value: 0.0 });
        let r = quasi_fermat_probe(|x| 3.0 * x, 0.0, &sched(), DEFAULT_TOL).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn fermat_propagates_nonexistence() {
        let step = |x: f64| if x < 0.0 { -1.0 } else { x.sqrt() };
        assert!(quasi_fermat_probe(step, 0.0, &sched(), DEFAULT_TOL).is_err());
    }

    #[test]
    fn mvt_on_parabola() {
        let b = quasi_mvt_bracket(|x| x * x, 0.0, 1.0, DEFAULT_GRID_N, &sched(), DEFAULT_TOL).unwrap();
        assert!((b.target - 1.0).abs() < 1e-15);
        assert!(b.c1 > 0.0 && b.c1 <= 0.5 && b.c2 >= 0.5 && b.c2 < 1.0);
        assert!(2.0 * b.c1 <= 1.0 + 1e-6 && 2.0 * b.c2 >= 1.0 - 1e-6);
        assert!(b.lower_value <= b.target + DEFAULT_TOL && b.upper_value >= b.target - DEFAULT_TOL);
    }

    #[test]
    fn mvt_on_absolute_kink() {
        let b = quasi_mvt_bracket(|x| (x - 0.5).abs(), 0.0, 1.0, 16, &sched(), DEFAULT_TOL).unwrap();
        assert_eq!(b.target, 0.0);
        assert!(b.c1 < 0.5 && b.c2 > 0.5);
    }

    #[test]
    fn rolle_examples() {
        let pi = std::f64::consts::PI;
        let b = quasi_rolle_bracket(|x| (pi * x).sin(), 0.0, 1.0, DEFAULT_GRID_N, &sched(), DEFAULT_TOL).unwrap();
        assert!(b.c1 > 0.5 && b.c1 < 1.0);
        assert!(b.c2 > 0.0 && b.c2 < 0.5);
        let b = quasi_rolle_bracket(|_| 0.0, -1.0, 1.0, 8, &sched(), DEFAULT_TOL).unwrap();
        assert_eq!(b.c1, b.c2);
        let shifted = |x: f64| kink(x) - kink(1.0) + (kink(1.0) - kink(-1.0)) * (1.0 - x) / 2.0;
        assert!(shifted(-1.0).abs() < 1e-15 && shifted(1.0).abs() < 1e-15);
        assert!(quasi_rolle_bracket(shifted, -1.0, 1.0, 64, &sched(), DEFAULT_TOL).is_ok());
        assert!(quasi_rolle_bracket(|x| x, 0.0, 1.0, 8, &sched(), DEFAULT_TOL).is_err());
    }

    #[test]
    fn rolle_agrees_with_mvt() {
        let f = |x: f64| x * (1.0 - x) * (x - 0.3);
        let r = quasi_rolle_bracket(f, 0.0, 1.0, 100, &sched(), DEFAULT_TOL).unwrap();
        let m = quasi_mvt_bracket(f, 0.0, 1.0, 100, &sched(), DEFAULT_TOL).unwrap();
        assert_eq!(r, m);
    }

    #[test]
    fn bracket_not_found() {
        // A secant through a jump: every interior slope is 0 but k = 1.
        let jump = |x: f64| if x < 1.0 { 0.0 } else { 1.0 };
        let err = quasi_mvt_bracket(jump, 0.0, 1.0, 32, &sched(), DEFAULT_TOL).unwrap_err();
        assert_eq!(err, Error::BracketNotFound { grid_n: 32, target: 1.0 });
        assert!(quasi_mvt_bracket(jump, 0.0, 1.0, 2, &sched(), DEFAULT_TOL).is_err());
    }

    #[test]
    fn lipschitz_examples() {
        let r = lipschitz_from_bounded_sd(f64::sin, 0.0, 3.0, 1.0, 500, &sched(), 7).unwrap();
        assert!(r.pass && r.worst_ratio <= 1.0 && r.max_abs_sd <= 1.0 + 1e-6);
        let r = lipschitz_from_bounded_sd(f64::abs, -1.0, 1.0, 1.0, 500, &sched(), 7).unwrap();
        assert!(r.pass);
        let r = lipschitz_from_bounded_sd(|x| x * x, 0.0, 3.0, 1.0, 500, &sched(), 7).unwrap();
        assert!(!r.pass && r.worst_ratio > 1.0);
        assert_eq!(
            lipschitz_from_bounded_sd(f64::sin, 0.0, 3.0, 1.0, 50, &sched(), 1).unwrap(),
            lipschitz_from_bounded_sd(f64::sin, 0.0, 3.0, 1.0, 50, &sched(), 1).unwrap()
        );
    }
}
