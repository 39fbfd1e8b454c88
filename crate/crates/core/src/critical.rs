//! Diagnostic functions for the uniform model and its critical point.
//!
//! With `A`, `B` the second and first derivatives of the uniform log-MGF,
//!
//! * `n(theta) = 2p(p-1) A B^(p-2)` and `m(u) = I''(u) / (2p(p-1) u^(p-2))`,
//!   with `m(u) n(theta) = 1` along dual pairs;
//! * `g(theta) = B / (2(p-1) A) - theta / 2` and
//!   `f(u) = u I''(u) / (2(p-1)) - I'(u) / 2`, with `f(u) = g(theta)`.
//!
//! `n` has a single global maximum at `theta0 >= 0` where `g` has its global
//! minimum; the dual `u0 = B(theta0)` gives the critical point
//! `(beta1_c, beta2_c) = (-f(u0), m(u0))`.

use alloc::vec::Vec;

use libm::pow;

use crate::cramer::EdgeDistribution;
use crate::error::{Error, Result};
use crate::roots::{bisect, golden_max};

/// Right end of the bracket searched for `theta0`.
pub const THETA_SEARCH: f64 = 60.0;
/// Coarse scan used to confirm that `n` has a single local maximum.
pub const SCAN_POINTS: usize = 512;
/// Width the golden-section bracket is shrunk to.
pub const THETA0_TOL: f64 = 1e-10;
/// Allowed gap between the maximizer of `n` and the minimizer of `g`.
pub const G_MIN_TOL: f64 = 1e-6;

const UNIFORM: EdgeDistribution = EdgeDistribution::Uniform01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalData {
    pub p: u32,
    pub theta0: f64,
    pub u0: f64,
    pub n_theta0: f64,
    pub m_u0: f64,
    pub g_theta0: f64,
    pub f_u0: f64,
    pub beta1_c: f64,
    pub beta2_c: f64,
}

fn check_p(p: u32) -> Result<f64> {
    if p < 2 {
        Err(Error::InvalidEdgeCount { p })
    } else {
        Ok(p as f64)
    }
}

/// `n(theta)` for uniform edge weights.
pub fn n_of_theta(p: u32, theta: f64) -> Result<f64> {
    let pf = check_p(p)?;
    let a = UNIFORM.log_mgf_d2(theta)?;
    let b = UNIFORM.log_mgf_d1(theta)?;
    Ok(2.0 * pf * (pf - 1.0) * a * pow(b, pf - 2.0))
}

/// `n'(theta) = 2p(p-1) [A' B^(p-2) + (p-2) A^2 B^(p-3)]`.
pub fn n_of_theta_d1(p: u32, theta: f64) -> Result<f64> {
    let pf = check_p(p)?;
    let a = UNIFORM.log_mgf_d2(theta)?;
    let b = UNIFORM.log_mgf_d1(theta)?;
    let c = UNIFORM.log_mgf_d3(theta)?;
    let tail = if p == 2 { 0.0 } else { (pf - 2.0) * a * a * pow(b, pf - 3.0) };
    Ok(2.0 * pf * (pf - 1.0) * (c * pow(b, pf - 2.0) + tail))
}

/// `g(theta)` for uniform edge weights.
pub fn g_of_theta(p: u32, theta: f64) -> Result<f64> {
    let pf = check_p(p)?;
    let a = UNIFORM.log_mgf_d2(theta)?;
    let b = UNIFORM.log_mgf_d1(theta)?;
    Ok(b / (2.0 * (pf - 1.0) * a) - 0.5 * theta)
}

/// `g'(theta) = (A^2 - B A') / (2(p-1) A^2) - 1/2`.
pub fn g_of_theta_d1(p: u32, theta: f64) -> Result<f64> {
    let pf = check_p(p)?;
    let a = UNIFORM.log_mgf_d2(theta)?;
    let b = UNIFORM.log_mgf_d1(theta)?;
    let c = UNIFORM.log_mgf_d3(theta)?;
    Ok((a * a - b * c) / (2.0 * (pf - 1.0) * a * a) - 0.5)
}

fn check_positive_u(u: f64) -> Result<()> {
    if u > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument { module: "critical", name: "u", reason: "must be positive" })
    }
}

/// `m(u)` for any edge law whose support interval contains `u > 0`.
pub fn m_of_u(p: u32, u: f64, dist: &EdgeDistribution) -> Result<f64> {
    let pf = check_p(p)?;
    check_positive_u(u)?;
    let i2 = dist.rate_d2(u)?;
    Ok(i2 / (2.0 * pf * (pf - 1.0) * pow(u, pf - 2.0)))
}

/// `f(u)` for any edge law.
pub fn f_of_u(p: u32, u: f64, dist: &EdgeDistribution) -> Result<f64> {
    let pf = check_p(p)?;
    check_positive_u(u)?;
    let rate = dist.rate_point(u)?;
    Ok(u * rate.d2 / (2.0 * (pf - 1.0)) - 0.5 * rate.d1)
}

/// Locate `theta0`, the global maximizer of `n`, and fill in the critical data.
///
/// A coarse scan first checks that `n` has exactly one local maximum on
/// `[0, THETA_SEARCH]`, a golden-section search then shrinks the bracket
/// around it and a bisection on `n'` finishes the job. The minimizer of `g`
/// is located independently and must agree to within [`G_MIN_TOL`].
pub fn find_theta0(p: u32) -> Result<CriticalData> {
    check_p(p)?;
    let step = THETA_SEARCH / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| step * i as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&t| n_of_theta(p, t)).collect::<Result<_>>()?;

    let peaks = local_max_indices(&values);
    if peaks.len() != 1 {
        return Err(Error::NotUnimodal { p, peaks: peaks.len() });
    }
    let k = peaks[0];
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(SCAN_POINTS - 1)];

    let theta0 = refine(|t| n_of_theta(p, t), |t| n_of_theta_d1(p, t), lo, hi)?;
    let theta_g = refine(|t| g_of_theta(p, t).map(|g| -g), |t| g_of_theta_d1(p, t).map(|d| -d), lo, hi)?;
    if (theta_g - theta0).abs() > G_MIN_TOL {
        return Err(Error::Inconsistent("minimizer of g does not coincide with maximizer of n"));
    }

    let u0 = UNIFORM.log_mgf_d1(theta0)?;
    let m_u0 = m_of_u(p, u0, &UNIFORM)?;
    let f_u0 = f_of_u(p, u0, &UNIFORM)?;
    Ok(CriticalData {
        p,
        theta0,
        u0,
        n_theta0: n_of_theta(p, theta0)?,
        m_u0,
        g_theta0: g_of_theta(p, theta0)?,
        f_u0,
        beta1_c: -f_u0,
        beta2_c: m_u0,
    })
}

/// Golden-section maximization of `f` on `[lo, hi]`, then bisection of its
/// derivative `df` near the golden result when the derivative changes sign.
fn refine<F, D>(f: F, mut df: D, lo: f64, hi: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
    D: FnMut(f64) -> Result<f64>,
{
    let (a, b) = golden_max(f, lo, hi, THETA0_TOL)?;
    let guess = 0.5 * (a + b);
    // Golden section stalls around sqrt(eps) on a flat top.
    let left = (a - 1e-6).max(lo);
    let right = (b + 1e-6).min(hi);
    let (dl, dr) = (df(left)?, df(right)?);
    if dl == 0.0 {
        return Ok(left);
    }
    if dl > 0.0 && dr < 0.0 {
        bisect(df, left, right, 0.0)
    } else {
        Ok(guess)
    }
}

/// Indices of local maxima of a sampled curve. A strict maximum at the left
/// boundary counts; one at the right boundary does not, since the bracket
/// must then be too short.
fn local_max_indices(values: &[f64]) -> Vec<usize> {
    (0..values.len() - 1)
        .filter(|&i| (i == 0 || values[i] > values[i - 1]) && values[i] >= values[i + 1])
        .collect()
}

/// Critical data for each `p`, in input order.
pub fn critical_table(ps: &[u32]) -> Result<Vec<CriticalData>> {
    ps.iter().map(|&p| find_theta0(p)).collect()
}
