use crate::error::{Error, Result};

/// Outcome of [`fixed_point_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub value: f64,
    /// Number of evaluations of the map.
    pub iterations: usize,
    pub converged: bool,
}

/// Iterates `x ← g(x)` from `guess` until two successive iterates differ by
/// less than `eta`, or `max_iters` evaluations have been spent.
///
/// The newest iterate is returned in both cases. With `max_iters == 0` the
/// guess itself comes back, unconverged.
pub fn fixed_point_solve<G>(mut g: G, guess: f64, eta: f64, max_iters: usize) -> Result<FixedPoint>
where
    G: FnMut(f64) -> Result<f64>,
{
    let mut current = guess;
    for iteration in 1..=max_iters {
        let next = g(current)?;
        if !next.is_finite() {
            return Err(Error::FixedPointDivergence { iteration });
        }
        if (next - current).abs() < eta {
            return Ok(FixedPoint {
                value: next,
                iterations: iteration,
                converged: true,
            });
        }
        current = next;
    }
    Ok(FixedPoint {
        value: current,
        iterations: max_iters,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auxiliary::eval_a;

    #[test]
    fn contraction_converges() {
        let fp = fixed_point_solve(|x| Ok(0.5 * x + 1.0), 0.0, 1e-6, 100).unwrap();
        assert!(fp.converged);
        assert!((fp.value - 2.0).abs() <= 2e-6);
    }

    #[test]
    fn identity_stops_after_one_evaluation() {
        let fp = fixed_point_solve(Ok, 7.0, 1e-6, 100).unwrap();
        assert_eq!(fp, FixedPoint { value: 7.0, iterations: 1, converged: true });
    }

    #[test]
    fn se5_dahlquist_step() {
        // Fixed point of x = 1 + 0.1·A(−3x, −3), iterated to convergence in 40-digit arithmetic.
        const ORACLE: f64 = 0.743_417_060_235_097_2;
        let fp = fixed_point_solve(|x| Ok(1.0 + 0.1 * eval_a(-3.0 * x, -3.0)), 0.7, 1e-6, 100).unwrap();
        assert!(fp.converged);
        assert!((fp.value - ORACLE).abs() <= 1e-6, "{}", fp.value);
        let tight = fixed_point_solve(|x| Ok(1.0 + 0.1 * eval_a(-3.0 * x, -3.0)), 0.7, 1e-15, 200).unwrap();
        assert!((tight.value - ORACLE).abs() <= 1e-15);
    }

    #[test]
    fn cap_reached_returns_last_iterate() {
        let fp = fixed_point_solve(|x| Ok(x + 1.0), 0.0, 1e-6, 5).unwrap();
        assert_eq!(fp, FixedPoint { value: 5.0, iterations: 5, converged: false });
        let fp = fixed_point_solve(|x| Ok(x + 1.0), 3.0, 1e-6, 0).unwrap();
        assert_eq!(fp.value, 3.0);
    }

    #[test]
    fn blow_up_is_divergence() {
        let err = fixed_point_solve(|x| Ok(x * 1e200), 1e200, 1e-6, 10).unwrap_err();
        assert_eq!(err, Error::FixedPointDivergence { iteration: 1 });
    }

    #[test]
    fn map_errors_propagate() {
        let err = fixed_point_solve(|_| Err(Error::MissingExact), 0.0, 1e-6, 10).unwrap_err();
        assert_eq!(err, Error::MissingExact);
    }
}
