//! Scalar bracketing helpers shared by the solvers.

use crate::error::Result;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Bisection on a bracket `[a, b]` where `f(a)` and `f(b)` have opposite signs
/// (or one is zero). Stops once the bracket is narrower than `tol`, or when
/// the midpoint is no longer distinct from the ends if `tol` is zero.
///
/// Returns whichever end of the final bracket has the smaller `|f|`.
pub(crate) fn bisect<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    if fa == 0.0 {
        return Ok(a);
    }
    let mut fb = f(b)?;
    if fb == 0.0 {
        return Ok(b);
    }
    for _ in 0..400 {
        if (b - a).abs() <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
/// Returns the bracket left after shrinking it below `tol`.
pub(crate) fn golden_max<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2)?;
        }
        if x1 >= x2 {
            break;
        }
    }
    Ok((a, b))
}

/// Newton's method kept inside a sign-change bracket `[a, b]`, starting from
/// `x0`. `fdf` returns the function value and its derivative. Steps that
/// leave the bracket are replaced by bisection.
pub(crate) fn newton_bracketed<F>(mut fdf: F, mut a: f64, mut b: f64, x0: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let (fa, _) = fdf(a)?;
    if fa == 0.0 {
        return Ok(a);
    }
    let (fb, _) = fdf(b)?;
    if fb == 0.0 {
        return Ok(b);
    }
    let a_positive = fa > 0.0;
    let mut x = if x0 > a && x0 < b { x0 } else { 0.5 * (a + b) };
    for _ in 0..200 {
        let (fx, dfx) = fdf(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx > 0.0) == a_positive {
            a = x;
        } else {
            b = x;
        }
        let mut next = x - fx / dfx;
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        let step = (next - x).abs();
        x = next;
        if step <= 2.0 * f64::EPSILON * x.abs().max(1e-300) || b - a <= 2.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    Ok(x)
}
