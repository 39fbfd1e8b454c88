//! The scalar variational problem for the two-parameter model.
//!
//! In the attractive region `beta2 >= 0` the limiting free energy is
//! `psi = sup_u l(u)` with `l(u) = beta1 u + beta2 u^p - I(u) / 2`, so
//! everything reduces to locating the global maximizers of a smooth function
//! on the open support interval.

use alloc::vec::Vec;

use libm::pow;

use crate::cramer::EdgeDistribution;
use crate::error::{Error, Result};
use crate::roots::bisect;

/// Points in the sign-change scan for stationary points of `l`.
pub const GRID_POINTS: usize = 2048;

/// Relative distance kept from the support endpoints where `I'` diverges.
pub const DOMAIN_MARGIN: f64 = 1e-6;

/// Two local maxima count as tied when their `l` values differ by at most
/// `TIE_TOL * max(1, |psi|)`.
pub const TIE_TOL: f64 = 1e-9;

/// Parameters of the two-parameter model: `H1` a single edge, `H2` a simple
/// graph with `p` edges.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub beta1: f64,
    pub beta2: f64,
    pub p: u32,
    pub dist: EdgeDistribution,
}

impl ModelParams {
    pub fn new(beta1: f64, beta2: f64, p: u32, dist: EdgeDistribution) -> Result<Self> {
        let params = Self { beta1, beta2, p, dist };
        params.validate()?;
        Ok(params)
    }

    /// Uniform(0,1) edge weights.
    pub fn uniform(beta1: f64, beta2: f64, p: u32) -> Result<Self> {
        Self::new(beta1, beta2, p, EdgeDistribution::Uniform01)
    }

    /// Same distribution and `p` at another parameter point.
    pub fn at(&self, beta1: f64, beta2: f64) -> Self {
        Self { beta1, beta2, p: self.p, dist: self.dist.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::InvalidEdgeCount { p: self.p });
        }
        if !self.beta1.is_finite() {
            return Err(Error::InvalidArgument {
                module: "variational",
                name: "beta1",
                reason: "must be finite",
            });
        }
        if !(self.beta2 >= 0.0) || !self.beta2.is_finite() {
            return Err(Error::NegativeBeta2 { beta2: self.beta2 });
        }
        Ok(())
    }
}

/// `l`, `l'`, `l''` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LPoint {
    pub u: f64,
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// `l(u)`, `l'(u)` and `l''(u)` from a single dual solve.
pub fn l_point(params: &ModelParams, u: f64) -> Result<LPoint> {
    let rate = params.dist.rate_point(u)?;
    let p = params.p as f64;
    let (b1, b2) = (params.beta1, params.beta2);
    Ok(LPoint {
        u,
        value: b1 * u + b2 * pow(u, p) - 0.5 * rate.value,
        d1: b1 + p * b2 * pow(u, p - 1.0) - 0.5 * rate.d1,
        d2: p * (p - 1.0) * b2 * pow(u, p - 2.0) - 0.5 * rate.d2,
    })
}

pub fn l_value(params: &ModelParams, u: f64) -> Result<f64> {
    Ok(l_point(params, u)?.value)
}

pub fn l_d1(params: &ModelParams, u: f64) -> Result<f64> {
    let p = params.p as f64;
    let theta = params.dist.rate_d1(u)?;
    Ok(params.beta1 + p * params.beta2 * pow(u, p - 1.0) - 0.5 * theta)
}

pub fn l_d2(params: &ModelParams, u: f64) -> Result<f64> {
    Ok(l_point(params, u)?.d2)
}

/// Open interval scanned for stationary points: the support shrunk by
/// [`DOMAIN_MARGIN`], intersected with the means reachable under the cap on
/// the dual variable.
pub fn search_interval(dist: &EdgeDistribution) -> (f64, f64) {
    let (lo, hi) = dist.support();
    let width = hi - lo;
    let (reach_lo, reach_hi) = dist.reachable_interval();
    let inset = 1e-9 * width;
    (
        (lo + DOMAIN_MARGIN * width).max(reach_lo + inset),
        (hi - DOMAIN_MARGIN * width).min(reach_hi - inset),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Unique,
    TwoGlobal,
}

/// Solution of the scalar problem.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximizerSet {
    /// Limiting free energy, `l` at the best maximizer.
    pub psi: f64,
    /// Global maximizers in ascending order (one or two).
    pub maximizers: Vec<f64>,
    pub classification: Classification,
    /// Every local maximum found, global or not, ascending in `u`.
    pub local_maxima: Vec<LPoint>,
}

impl MaximizerSet {
    pub fn is_unique(&self) -> bool {
        self.classification == Classification::Unique
    }
}

/// Maximize `l` over the open support interval.
///
/// The scan relies on `l'` having at most three zeros, so a dense grid cannot
/// step over a sign change at reasonable parameter magnitudes.
pub fn solve_psi(params: &ModelParams) -> Result<MaximizerSet> {
    params.validate()?;
    let (lo, hi) = search_interval(&params.dist);
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| if i + 1 == GRID_POINTS { hi } else { lo + step * i as f64 })
        .collect();
    let slopes: Vec<f64> = grid
        .iter()
        .map(|&u| l_d1(params, u))
        .collect::<Result<_>>()?;

    let mut local_maxima = Vec::new();
    for i in 0..GRID_POINTS - 1 {
        if slopes[i] > 0.0 && slopes[i + 1] <= 0.0 {
            let u = bisect(|u| l_d1(params, u), grid[i], grid[i + 1], 0.0)?;
            local_maxima.push(l_point(params, u)?);
        }
    }
    if local_maxima.is_empty() {
        return Err(Error::NoStationaryPoint { beta1: params.beta1, beta2: params.beta2 });
    }

    let psi = local_maxima
        .iter()
        .map(|m| m.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let tie = TIE_TOL * psi.abs().max(1.0);
    let maximizers: Vec<f64> = local_maxima
        .iter()
        .filter(|m| psi - m.value <= tie)
        .map(|m| m.u)
        .collect();
    let classification = if maximizers.len() > 1 {
        Classification::TwoGlobal
    } else {
        Classification::Unique
    };
    Ok(MaximizerSet { psi, maximizers, classification, local_maxima })
}

/// `(d psi / d beta1, d psi / d beta2) = (u*, u*^p)` by the envelope theorem.
/// Undefined on the transition curve, where the two maximizers disagree.
pub fn psi_gradient(params: &ModelParams) -> Result<(f64, f64)> {
    let solution = solve_psi(params)?;
    if !solution.is_unique() {
        return Err(Error::GradientUndefined { beta1: params.beta1, beta2: params.beta2 });
    }
    let u = solution.maximizers[0];
    Ok((u, pow(u, params.p as f64)))
}

/// `(u, l(u), l'(u))` on a uniform grid of `count` points over `[lo, hi]`.
pub fn profile(params: &ModelParams, lo: f64, hi: f64, count: usize) -> Result<Vec<LPoint>> {
    if count < 2 || !(lo < hi) {
        return Err(Error::InvalidArgument {
            module: "variational",
            name: "grid",
            reason: "need at least two points on a non-empty interval",
        });
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            let u = if i + 1 == count { hi } else { lo + step * i as f64 };
            l_point(params, u)
        })
        .collect()
}
