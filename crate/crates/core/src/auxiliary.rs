//! The two auxiliary functions that turn a pair of one-sided slopes into a
//! specular derivative.
//!
//! [`eval_a`] combines two slopes `α`, `β`:
//!
//! ```text
//!            αβ − 1 + √((1+α²)(1+β²))
//! A(α, β) = ─────────────────────────      (α + β ≠ 0),   A(α, −α) = 0
//!                    α + β
//! ```
//!
//! and [`eval_b`] is the difference form `B(a, b, c) = A(a/c, b/c)` used on
//! raw increments of width `c`. Both equal `tan(½ arctan α + ½ arctan β)`.
//!
//! The quotient above cancels catastrophically whenever `α ≈ −β`, and its
//! numerator also cancels for small same-sign slopes, so `eval_a` never
//! evaluates it literally. Same-sign pairs go through the sine/cosine ratio
//! `(sin u + sin v)/(cos u + cos v)` with `u = arctan α`, `v = arctan β`;
//! opposite-sign pairs fold the angle sum into a single arctangent first.

use crate::error::{Error, Result};

/// `A(α, β)` for finite slopes.
///
/// The result is symmetric bit-for-bit, odd bit-for-bit, exactly `α` when
/// `α == β`, exactly `0` when `α == −β`, and always lies in `[min, max]` of
/// the two arguments.
pub fn eval_a(alpha: f64, beta: f64) -> f64 {
    debug_assert!(alpha.is_finite() && beta.is_finite());
    if alpha == beta {
        return alpha;
    }
    let (hi, lo) = if alpha >= beta {
        (alpha, beta)
    } else {
        (beta, alpha)
    };
    let sum = hi + lo;
    if sum == 0.0 {
        return 0.0;
    }

    let value = if hi > 0.0 && lo < 0.0 {
        // arctan hi + arctan lo = arctan(sum / (1 − hi·lo)), valid since hi·lo < 0 < 1.
        let den = 1.0 - hi * lo;
        if den.is_finite() {
            let slope = sum / den;
            // tan(½ arctan y) = y / (1 + √(1 + y²))
            slope / (1.0 + slope.hypot(1.0))
        } else {
            (0.5 * (hi.atan() + lo.atan())).tan()
        }
    } else {
        let p = hi.hypot(1.0);
        let q = lo.hypot(1.0);
        (hi / p + lo / q) / (1.0 / p + 1.0 / q)
    };
    value.clamp(lo, hi)
}

/// `B(a, b, c)`, the specular combination of a forward increment `a` and a
/// backward increment `b` over a step `c > 0`.
pub fn eval_b(a: f64, b: f64, c: f64) -> Result<f64> {
    check_width(c)?;
    // (a√(b²+c²) + b√(a²+c²)) / (c√(a²+c²) + c√(b²+c²)), divided through by both roots.
    let p = a.hypot(c);
    let q = b.hypot(c);
    if (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0) {
        // a/p + b/q cancels here; a·q + b·p = c²(a − b)(a + b)/(a·q − b·p) does not.
        return Ok((a + b) * (c / (p + q)) * ((a - b) / (a * q - b * p)));
    }
    Ok((a / p + b / q) / (c / p + c / q))
}

/// `tan(½ arctan(a/c) + ½ arctan(b/c))`, the trigonometric form of [`eval_b`].
///
/// Kept as an independent evaluation route. When both ratios exceed one in
/// magnitude with the same sign the half-angle sum is close to `±π/2`, so
/// the complementary angles `arctan(c/a)`, `arctan(c/b)` are used instead.
pub fn eval_b_trig(a: f64, b: f64, c: f64) -> Result<f64> {
    check_width(c)?;
    let (x, y) = (a / c, b / c);
    if x > 1.0 && y > 1.0 {
        let rest = 0.5 * ((1.0 / x).atan() + (1.0 / y).atan());
        return Ok(1.0 / rest.tan());
    }
    if x < -1.0 && y < -1.0 {
        let rest = 0.5 * ((-1.0 / x).atan() + (-1.0 / y).atan());
        return Ok(-1.0 / rest.tan());
    }
    Ok((0.5 * x.atan() + 0.5 * y.atan()).tan())
}

/// `x + √(1 + x²)` without cancellation for negative `x`.
pub fn x_plus_hypot(x: f64) -> f64 {
    let r = x.hypot(1.0);
    if x >= 0.0 {
        x + r
    } else {
        1.0 / (r - x)
    }
}

/// `x − √(1 + x²)` without cancellation for positive `x`.
pub fn x_minus_hypot(x: f64) -> f64 {
    -x_plus_hypot(-x)
}

fn check_width(c: f64) -> Result<()> {
    if c > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("increment width must be positive, got {c}")))
    }
}
