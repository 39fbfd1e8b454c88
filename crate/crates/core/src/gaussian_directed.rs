//! Directed model with iid standard Gaussian edge weights, `H1` a directed
//! edge and `H2` a directed 2-star.
//!
//! Rows decouple. With `Y` the sum of one row, `Y ~ N(0, n)` and
//! `psi_n = (1/n) log E[exp(beta1 Y + beta2 Y^2 / n)]`, which is finite only
//! for `beta2 < 1/2` and equals
//! `beta1^2 / (2(1 - 2 beta2)) - log(1 - 2 beta2) / (2n)`.

use libm::{exp, log, sqrt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Largest `beta2` accepted; the integral diverges at `1/2`.
pub const BETA2_LIMIT: f64 = 0.5 - 1e-9;
/// Smallest Monte Carlo sample size accepted.
pub const MIN_SAMPLES: usize = 100;
/// Variance inflation of the importance proposal over the tilted law.
pub const PROPOSAL_INFLATION: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianModelParams {
    pub beta1: f64,
    pub beta2: f64,
}

impl GaussianModelParams {
    pub fn new(beta1: f64, beta2: f64) -> Result<Self> {
        let params = Self { beta1, beta2 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.beta1.is_finite() {
            return Err(Error::InvalidArgument {
                module: "gaussian_directed",
                name: "beta1",
                reason: "must be finite",
            });
        }
        if !(self.beta2 <= BETA2_LIMIT) {
            return Err(Error::GaussianDivergent { beta2: self.beta2 });
        }
        Ok(())
    }
}

fn check_n(n: usize) -> Result<f64> {
    if n == 0 {
        Err(Error::InvalidArgument { module: "gaussian_directed", name: "n", reason: "must be at least 1" })
    } else {
        Ok(n as f64)
    }
}

/// Directed edge and 2-star densities `(e, s)` of a row-major `n x n` matrix:
/// `e = n^-2 sum x_ij`, `s = n^-3 sum_i (sum_j x_ij)^2`.
pub fn directed_stats(n: usize, weights: &[f64]) -> Result<(f64, f64)> {
    let nf = check_n(n)?;
    if weights.len() != n * n {
        return Err(Error::InvalidArgument {
            module: "gaussian_directed",
            name: "weights",
            reason: "matrix must be n x n",
        });
    }
    let (mut total, mut squares) = (0.0, 0.0);
    for row in weights.chunks_exact(n) {
        let r: f64 = row.iter().sum();
        total += r;
        squares += r * r;
    }
    Ok((total / (nf * nf), squares / (nf * nf * nf)))
}

/// Finite-`n` normalization constant.
pub fn psi_n_exact(params: &GaussianModelParams, n: usize) -> Result<f64> {
    params.validate()?;
    let nf = check_n(n)?;
    let q = 1.0 - 2.0 * params.beta2;
    Ok(params.beta1 * params.beta1 / (2.0 * q) - log(q) / (2.0 * nf))
}

/// Limiting free energy `beta1^2 / (2(1 - 2 beta2))`.
pub fn psi_inf(params: &GaussianModelParams) -> Result<f64> {
    params.validate()?;
    Ok(params.beta1 * params.beta1 / (2.0 * (1.0 - 2.0 * params.beta2)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Monte Carlo estimate of `psi_n` from `samples` draws of the row sum.
///
/// Draws come from a Gaussian proposal centered at the mode of the tilted
/// integrand with [`PROPOSAL_INFLATION`] times its variance, so the
/// importance weights are bounded. The estimate is a log-mean-exp of the log
/// weights, the standard error the delta-method `sd(w) / (mean(w) sqrt(N)) / n`.
/// With both parameters zero the proposal is the prior, every weight is one
/// and the estimate is exactly zero.
pub fn psi_n_monte_carlo(params: &GaussianModelParams, n: usize, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    params.validate()?;
    let nf = check_n(n)?;
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument {
            module: "gaussian_directed",
            name: "samples",
            reason: "need at least 100 samples",
        });
    }
    let (b1, b2) = (params.beta1, params.beta2);
    // log of prior density times integrand, up to a constant shared with the proposal
    let log_target = |y: f64| b1 * y + b2 * y * y / nf - y * y / (2.0 * nf);

    let from_prior = b1 == 0.0 && b2 == 0.0;
    let (mean, var) = if from_prior {
        (0.0, nf)
    } else {
        let (mode, curvature) = tilted_mode(&log_target, nf);
        (mode, PROPOSAL_INFLATION / curvature)
    };
    let sd = sqrt(var);
    let log_norm = 0.5 * log(var / nf);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut logw: alloc::vec::Vec<f64> = alloc::vec::Vec::with_capacity(samples);
    for _ in 0..samples {
        let z: f64 = StandardNormal.sample(&mut rng);
        let y = mean + sd * z;
        // log prior density over proposal density
        let ratio = if from_prior { 0.0 } else { 0.5 * z * z - y * y / (2.0 * nf) + log_norm };
        logw.push(b1 * y + b2 * y * y / nf + ratio);
    }

    let shift = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut s1, mut s2) = (0.0, 0.0);
    for &lw in &logw {
        let w = exp(lw - shift);
        s1 += w;
        s2 += w * w;
    }
    let count = samples as f64;
    let mean_w = s1 / count;
    let var_w = ((s2 / count - mean_w * mean_w) * count / (count - 1.0)).max(0.0);
    let log_mean = shift + log(mean_w);
    Ok(MonteCarloEstimate {
        estimate: log_mean / nf,
        std_error: sqrt(var_w / count) / mean_w / nf,
    })
}

/// Mode and negative second derivative of a concave log integrand, by
/// Newton's method with central differences.
fn tilted_mode(f: &impl Fn(f64) -> f64, scale: f64) -> (f64, f64) {
    let h = 1e-3 * sqrt(scale);
    let curvature = |y: f64| -(f(y + h) - 2.0 * f(y) + f(y - h)) / (h * h);
    let mut y = 0.0;
    for _ in 0..50 {
        let slope = (f(y + h) - f(y - h)) / (2.0 * h);
        let step = slope / curvature(y);
        y += step;
        if step.abs() <= 1e-12 * (1.0 + y.abs()) {
            break;
        }
    }
    (y, curvature(y))
}
