//! The two-maximizer (V-shaped) region and the first-order transition curve.
//!
//! For `beta1 < beta1_c` the equation `f(u) = -beta1` has one root `a` below
//! `u0` and one root `b` above it. Between `m(b)` and `m(a)` in `beta2` the
//! function `l` has two local maxima; the transition curve `r(beta1)` is the
//! unique `beta2` in that bracket where they have equal height.

use alloc::vec::Vec;

use libm::pow;

use crate::cramer::EdgeDistribution;
use crate::critical::{f_of_u, find_theta0, m_of_u, CriticalData};
use crate::error::{Error, Result};
use crate::roots::{bisect, newton_bracketed};
use crate::variational::{l_d1, l_point, search_interval, ModelParams};

/// Tracing stops this far below `beta1_c`, where the two maximizers merge.
pub const CORNER_GAP: f64 = 1e-3;
/// Bracket width the transition `beta2` is bisected down to.
pub const BETA2_TOL: f64 = 1e-10;
/// Width the roots `a`, `b` of `f(u) = -beta1` are bisected down to.
pub const U_TOL: f64 = 1e-11;

const UNIFORM: EdgeDistribution = EdgeDistribution::Uniform01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingPoint {
    pub beta1: f64,
    /// Root of `f(u) = -beta1` below `u0`.
    pub a: f64,
    /// Root of `f(u) = -beta1` above `u0`.
    pub b: f64,
    /// Upper bounding curve value `m(a)`.
    pub m_a: f64,
    /// Lower bounding curve value `m(b)`.
    pub m_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCurvePoint {
    pub beta1: f64,
    /// Transition value of `beta2`.
    pub r: f64,
    pub u1_star: f64,
    pub u2_star: f64,
    pub psi: f64,
}

impl PhaseCurvePoint {
    /// Jumps of `(d psi / d beta1, d psi / d beta2)` across the curve.
    pub fn jumps(&self, p: u32) -> (f64, f64) {
        let pf = p as f64;
        (self.u2_star - self.u1_star, pow(self.u2_star, pf) - pow(self.u1_star, pf))
    }
}

/// A traced transition curve plus the corner it ends in.
#[derive(Debug, Clone, PartialEq)]
pub struct TracedCurve {
    pub p: u32,
    pub points: Vec<PhaseCurvePoint>,
    /// `(beta1_c, beta2_c)`; not itself part of `points`.
    pub corner: (f64, f64),
}

fn require_below_critical(crit: &CriticalData, beta1: f64) -> Result<()> {
    if beta1 < crit.beta1_c {
        Ok(())
    } else {
        Err(Error::NoTwoPhaseRegion { beta1, beta1_c: crit.beta1_c })
    }
}

/// Bounding curves of the V-shaped region at `beta1`.
pub fn bounding_point(p: u32, beta1: f64) -> Result<BoundingPoint> {
    bounding_point_with(&find_theta0(p)?, beta1)
}

/// [`bounding_point`] with the critical data already computed.
pub fn bounding_point_with(crit: &CriticalData, beta1: f64) -> Result<BoundingPoint> {
    require_below_critical(crit, beta1)?;
    let p = crit.p;
    let (lo, hi) = search_interval(&UNIFORM);
    let excess = |u: f64| f_of_u(p, u, &UNIFORM).map(|f| f + beta1);
    if excess(lo)? <= 0.0 || excess(hi)? <= 0.0 {
        return Err(Error::ThetaCap { theta: f64::INFINITY, cap: crate::cramer::THETA_MAX });
    }
    let a = bisect(excess, lo, crit.u0, U_TOL)?;
    let b = bisect(excess, crit.u0, hi, U_TOL)?;
    Ok(BoundingPoint {
        beta1,
        a,
        b,
        m_a: m_of_u(p, a, &UNIFORM)?,
        m_b: m_of_u(p, b, &UNIFORM)?,
    })
}

/// The two local maxima of `l` at a point inside the V-shaped region.
#[derive(Debug, Clone, Copy)]
struct TwoMaxima {
    lower: f64,
    upper: f64,
    l_lower: f64,
    l_upper: f64,
}

/// Locate both local maxima, each inside the stretch between a domain end and
/// the neighbouring inflection point, where `l'` is monotone. `guess` warm
/// starts the Newton iterations.
fn two_maxima(params: &ModelParams, u0: f64, guess: Option<(f64, f64)>) -> Result<TwoMaxima> {
    let (lo, hi) = search_interval(&params.dist);
    let curvature = |u: f64| Ok(l_point(params, u)?.d2);
    if curvature(u0)? <= 0.0 {
        return Err(Error::Inconsistent("l is concave at u0 inside the V-shaped region"));
    }
    let infl_lo = bisect(curvature, lo, u0, 1e-13)?;
    let infl_hi = bisect(curvature, u0, hi, 1e-13)?;
    if l_d1(params, infl_lo)? > 0.0 || l_d1(params, infl_hi)? < 0.0 {
        return Err(Error::Inconsistent("parameter point lies outside the V-shaped region"));
    }
    let slope = |u: f64| {
        let pt = l_point(params, u)?;
        Ok((pt.d1, pt.d2))
    };
    let (g1, g2) = guess.unwrap_or((0.5 * (lo + infl_lo), 0.5 * (infl_hi + hi)));
    let lower = newton_bracketed(slope, lo, infl_lo, g1)?;
    let upper = newton_bracketed(slope, infl_hi, hi, g2)?;
    Ok(TwoMaxima {
        lower,
        upper,
        l_lower: l_point(params, lower)?.value,
        l_upper: l_point(params, upper)?.value,
    })
}

/// Height difference `l(u2*) - l(u1*)` of the two local maxima at `beta2`.
pub fn maxima_gap(p: u32, beta1: f64, beta2: f64) -> Result<f64> {
    let crit = find_theta0(p)?;
    let params = ModelParams::uniform(beta1, beta2, p)?;
    let m = two_maxima(&params, crit.u0, None)?;
    Ok(m.l_upper - m.l_lower)
}

/// Transition point `r(beta1)` on the first-order curve.
pub fn r_of_beta1(p: u32, beta1: f64, dist: &EdgeDistribution) -> Result<PhaseCurvePoint> {
    if !dist.is_uniform() {
        return Err(Error::UniformOnly { operation: "r_of_beta1" });
    }
    r_of_beta1_with(&find_theta0(p)?, beta1)
}

/// [`r_of_beta1`] with the critical data already computed.
pub fn r_of_beta1_with(crit: &CriticalData, beta1: f64) -> Result<PhaseCurvePoint> {
    let bound = bounding_point_with(crit, beta1)?;
    let base = ModelParams::uniform(beta1, bound.m_b, crit.p)?;
    let mut guess = None;
    let mut gap = |beta2: f64| -> Result<TwoMaxima> {
        let m = two_maxima(&base.at(beta1, beta2), crit.u0, guess)?;
        guess = Some((m.lower, m.upper));
        Ok(m)
    };

    // On the bounding curves one maximum degenerates into an inflection point.
    let inset = 1e-7 * (bound.m_a - bound.m_b);
    let (mut lo, mut hi) = (bound.m_b + inset, bound.m_a - inset);
    let at_lo = gap(lo)?;
    let at_hi = gap(hi)?;
    if !(at_lo.l_upper - at_lo.l_lower < 0.0 && at_hi.l_upper - at_hi.l_lower > 0.0) {
        return Err(Error::Inconsistent("height difference does not change sign across the V-shaped region"));
    }
    while hi - lo > BETA2_TOL {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let m = gap(mid)?;
        if m.l_upper - m.l_lower < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let m = gap(r)?;
    Ok(PhaseCurvePoint {
        beta1,
        r,
        u1_star: m.lower,
        u2_star: m.upper,
        psi: m.l_lower.max(m.l_upper),
    })
}

/// Points of the transition curve on a uniform `beta1` grid from `beta1_lo`
/// to `beta1_hi`. An upper end closer than [`CORNER_GAP`] to the critical
/// value, or beyond it, is pulled back to `beta1_c - CORNER_GAP`.
pub fn trace_curve(p: u32, beta1_lo: f64, beta1_hi: f64, steps: usize) -> Result<TracedCurve> {
    let crit = find_theta0(p)?;
    let points = beta1_grid(&crit, beta1_lo, beta1_hi, steps)?
        .into_iter()
        .map(|b1| r_of_beta1_with(&crit, b1))
        .collect::<Result<Vec<_>>>()?;
    if points.windows(2).any(|w| w[1].r >= w[0].r) {
        return Err(Error::Inconsistent("traced transition curve is not strictly decreasing"));
    }
    Ok(TracedCurve { p, points, corner: (crit.beta1_c, crit.beta2_c) })
}

fn beta1_grid(crit: &CriticalData, lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidArgument { module: "phase_curve", name: "steps", reason: "need at least 2" });
    }
    require_below_critical(crit, lo)?;
    let hi = hi.min(crit.beta1_c - CORNER_GAP);
    if !(lo < hi) {
        return Err(Error::InvalidArgument {
            module: "phase_curve",
            name: "beta1",
            reason: "range must be non-empty and end below beta1_c - 1e-3",
        });
    }
    let step = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo + step * i as f64 })
        .collect())
}

/// `(u2* - u1*, u2*^p - u1*^p)` at the transition point for `beta1`.
pub fn jump_profile(p: u32, beta1: f64) -> Result<(f64, f64)> {
    Ok(r_of_beta1(p, beta1, &UNIFORM)?.jumps(p))
}

/// One row of the V-shaped region table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VRegionRow {
    pub bound: BoundingPoint,
    pub curve: PhaseCurvePoint,
}

/// Bounding curves and transition curve on a common `beta1` grid.
pub fn v_region(p: u32, beta1_lo: f64, beta1_hi: f64, steps: usize) -> Result<Vec<VRegionRow>> {
    let crit = find_theta0(p)?;
    beta1_grid(&crit, beta1_lo, beta1_hi, steps)?
        .into_iter()
        .map(|b1| {
            Ok(VRegionRow {
                bound: bounding_point_with(&crit, b1)?,
                curve: r_of_beta1_with(&crit, b1)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounding_roots_straddle_u0() {
        let bp = bounding_point(2, -5.0).unwrap();
        assert!(bp.a < 0.5 && 0.5 < bp.b);
        assert!((f_of_u(2, bp.a, &UNIFORM).unwrap() - 5.0).abs() < 1e-9);
        assert!((f_of_u(2, bp.b, &UNIFORM).unwrap() - 5.0).abs() < 1e-9);
        assert!(bp.m_b < bp.m_a);
    }

    #[test]
    fn bounding_roots_spread_as_beta1_decreases() {
        let near = bounding_point(2, -5.0).unwrap();
        let far = bounding_point(2, -8.0).unwrap();
        assert!(far.a < near.a && far.b > near.b);
    }

    #[test]
    fn bounding_corner() {
        let bp = bounding_point(2, -3.0 - 1e-6).unwrap();
        assert!((bp.a - 0.5).abs() < 2e-3 && (bp.b - 0.5).abs() < 2e-3);
        assert!((bp.m_a - 3.0).abs() < 1e-2 && (bp.m_b - 3.0).abs() < 1e-2);
    }

    #[test]
    fn no_region_above_critical() {
        assert!(matches!(bounding_point(2, -3.0), Err(Error::NoTwoPhaseRegion { .. })));
        assert!(matches!(bounding_point(2, -2.0), Err(Error::NoTwoPhaseRegion { .. })));
    }

    #[test]
    fn p2_transition_is_on_the_antidiagonal() {
        let pt = r_of_beta1(2, -5.0, &UNIFORM).unwrap();
        assert!((pt.r - 5.0).abs() < 1e-8);
        assert!((pt.u1_star - 0.137).abs() < 1e-3);
        assert!((pt.u2_star - 0.863).abs() < 1e-3);
        let (je, _) = pt.jumps(2);
        assert!((je - 0.726).abs() < 2e-3);
    }

    #[test]
    fn rejects_non_uniform() {
        assert!(matches!(
            r_of_beta1(2, -5.0, &EdgeDistribution::BernoulliHalf),
            Err(Error::UniformOnly { .. })
        ));
    }

    #[test]
    fn trace_validates_arguments() {
        assert!(trace_curve(2, -8.0, -3.1, 1).is_err());
        assert!(trace_curve(2, -2.9, -2.0, 5).is_err());
        let clamped = trace_curve(2, -8.0, -2.9, 5).unwrap();
        assert!((clamped.points[4].beta1 - (clamped.corner.0 - CORNER_GAP)).abs() < 1e-12);
        assert!(trace_curve(2, -3.0005, -3.0001, 5).is_err());
    }
}
