//! Edge-weight laws, their cumulant generating functions, and the Cramér rate
//! function obtained from them by numerical Legendre inversion.
//!
//! For a law `mu` with moment generating function `M(theta)` we write
//! `B = (log M)'` and `A = (log M)''`. The rate function is the conjugate
//! `I(u) = sup_theta (theta u - log M(theta))`, evaluated at the unique
//! `theta` solving `B(theta) = u`. Along that dual pair `I'(u) = theta` and
//! `I''(u) = 1 / A(theta)`.

use alloc::vec::Vec;

use libm::{exp, expm1, log, log1p};
use rand::distr::{Distribution, Open01};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest admissible `|theta|`; `e^theta` stays finite in double precision.
pub const THETA_MAX: f64 = 700.0;

/// Below this `|theta|` the uniform closed forms (which are 0/0 at the
/// origin) are replaced by their Taylor expansions.
pub const SERIES_SWITCH: f64 = 1e-2;

// The closed forms of the second and third derivatives cancel badly near 0
// (about 1e-12 absolute for the second at |theta| = 1e-2), so they switch
// over at this wider radius.
pub const SERIES_SWITCH_WIDE: f64 = 0.25;

/// Residual `|B(theta) - u|` that every dual solve must reach.
pub const DUAL_TOL: f64 = 1e-12;

/// A single support point of a finite-support law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub value: f64,
    pub probability: f64,
}

/// A validated finite-support law: at least two distinct atoms, strictly
/// positive probabilities summing to one. Atoms are kept sorted by value.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSupport {
    atoms: Vec<Atom>,
}

impl FiniteSupport {
    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|(value, probability)| Atom { value, probability })
            .collect();
        if atoms.len() < 2 {
            return Err(Error::InvalidDistribution("need at least two atoms"));
        }
        if atoms.iter().any(|a| !a.value.is_finite() || !a.probability.is_finite()) {
            return Err(Error::InvalidDistribution("atom values and probabilities must be finite"));
        }
        if atoms.iter().any(|a| a.probability <= 0.0) {
            return Err(Error::InvalidDistribution("probabilities must be strictly positive"));
        }
        let total: f64 = atoms.iter().map(|a| a.probability).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution("probabilities must sum to 1"));
        }
        atoms.sort_by(|a, b| a.value.total_cmp(&b.value));
        if atoms.windows(2).any(|w| w[0].value == w[1].value) {
            return Err(Error::InvalidDistribution("atom values must be distinct"));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Tilted weights `p_i e^{theta x_i} / M(theta)` together with `log M(theta)`.
    fn tilt(&self, theta: f64) -> (f64, Vec<f64>) {
        let logits: Vec<f64> = self
            .atoms
            .iter()
            .map(|a| theta * a.value + log(a.probability))
            .collect();
        let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut weights: Vec<f64> = logits.iter().map(|&z| exp(z - top)).collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        (top + log(total), weights)
    }

    fn central_moment(&self, theta: f64, order: i32) -> f64 {
        let (_, w) = self.tilt(theta);
        let mean: f64 = w.iter().zip(&self.atoms).map(|(w, a)| w * a.value).sum();
        if order == 1 {
            return mean;
        }
        w.iter()
            .zip(&self.atoms)
            .map(|(w, a)| w * libm::pow(a.value - mean, order as f64))
            .sum()
    }
}

/// Which end of the support an endpoint query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lower,
    Upper,
}

/// The edge-weight law `mu`.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeDistribution {
    /// Uniform on (0,1).
    Uniform01,
    /// Values 0 and 1 with probability 1/2 each.
    BernoulliHalf,
    /// Arbitrary finite support.
    FiniteSupport(FiniteSupport),
}

/// A Legendre pair: `u = B(theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPair {
    pub theta: f64,
    pub u: f64,
}

/// Everything the rate function knows at one mean value, from a single dual solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub u: f64,
    pub theta: f64,
    /// `I(u)`
    pub value: f64,
    /// `I'(u) = theta`
    pub d1: f64,
    /// `I''(u) = 1 / A(theta)`
    pub d2: f64,
}

impl EdgeDistribution {
    pub fn finite_support(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        FiniteSupport::new(atoms).map(EdgeDistribution::FiniteSupport)
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, EdgeDistribution::Uniform01)
    }

    /// Closed support interval `[min, max]`; `I` is finite only inside it.
    pub fn support(&self) -> (f64, f64) {
        match self {
            EdgeDistribution::Uniform01 | EdgeDistribution::BernoulliHalf => (0.0, 1.0),
            EdgeDistribution::FiniteSupport(fs) => {
                (fs.atoms[0].value, fs.atoms[fs.atoms.len() - 1].value)
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            EdgeDistribution::Uniform01 | EdgeDistribution::BernoulliHalf => 0.5,
            EdgeDistribution::FiniteSupport(fs) => {
                fs.atoms.iter().map(|a| a.value * a.probability).sum()
            }
        }
    }

    /// Mean values reachable with `|theta| <= THETA_MAX`. Dual solves outside
    /// this open interval fail with a cap error.
    pub fn reachable_interval(&self) -> (f64, f64) {
        // Both evaluations are inside the cap by construction.
        let lo = self.log_mgf_d1(-THETA_MAX).unwrap_or(f64::NAN);
        let hi = self.log_mgf_d1(THETA_MAX).unwrap_or(f64::NAN);
        (lo, hi)
    }

    fn check_theta(theta: f64) -> Result<()> {
        if theta.is_nan() || theta.abs() > THETA_MAX {
            Err(Error::ThetaCap { theta, cap: THETA_MAX })
        } else {
            Ok(())
        }
    }

    /// `log M(theta)`.
    pub fn log_mgf(&self, theta: f64) -> Result<f64> {
        Self::check_theta(theta)?;
        Ok(match self {
            EdgeDistribution::Uniform01 => uniform::log_mgf(theta),
            EdgeDistribution::BernoulliHalf => softplus(theta) - core::f64::consts::LN_2,
            EdgeDistribution::FiniteSupport(fs) => fs.tilt(theta).0,
        })
    }

    /// `B(theta) = (log M)'(theta)`, the tilted mean.
    pub fn log_mgf_d1(&self, theta: f64) -> Result<f64> {
        Self::check_theta(theta)?;
        Ok(match self {
            EdgeDistribution::Uniform01 => uniform::d1(theta),
            EdgeDistribution::BernoulliHalf => sigmoid(theta),
            EdgeDistribution::FiniteSupport(fs) => fs.central_moment(theta, 1),
        })
    }

    /// `A(theta) = (log M)''(theta)`, the tilted variance.
    pub fn log_mgf_d2(&self, theta: f64) -> Result<f64> {
        Self::check_theta(theta)?;
        Ok(match self {
            EdgeDistribution::Uniform01 => uniform::d2(theta),
            EdgeDistribution::BernoulliHalf => {
                let s = sigmoid(theta);
                s * (1.0 - s)
            }
            EdgeDistribution::FiniteSupport(fs) => fs.central_moment(theta, 2),
        })
    }

    /// `(log M)'''(theta)`, the tilted third central moment.
    pub fn log_mgf_d3(&self, theta: f64) -> Result<f64> {
        Self::check_theta(theta)?;
        Ok(match self {
            EdgeDistribution::Uniform01 => uniform::d3(theta),
            EdgeDistribution::BernoulliHalf => {
                let s = sigmoid(theta);
                s * (1.0 - s) * (1.0 - 2.0 * s)
            }
            EdgeDistribution::FiniteSupport(fs) => fs.central_moment(theta, 3),
        })
    }

    /// Solve `B(theta) = u` by Newton's method from `theta = 0`, falling back
    /// to bisection whenever a step leaves the current bracket.
    pub fn dual_theta(&self, u: f64) -> Result<DualPair> {
        let (lo, hi) = self.support();
        if !(u > lo && u < hi) {
            return Err(Error::OutsideSupport { u, lo, hi });
        }
        let b = |t: f64| self.log_mgf_d1(t);

        // Grow a bracket geometrically until it straddles u.
        let mut left = -1.0_f64;
        while b(left)? > u {
            if left == -THETA_MAX {
                return Err(Error::ThetaCap { theta: f64::NEG_INFINITY, cap: THETA_MAX });
            }
            left = (2.0 * left).max(-THETA_MAX);
        }
        let mut right = 1.0_f64;
        while b(right)? < u {
            if right == THETA_MAX {
                return Err(Error::ThetaCap { theta: f64::INFINITY, cap: THETA_MAX });
            }
            right = (2.0 * right).min(THETA_MAX);
        }

        let mut theta = 0.0_f64;
        let mut residual = b(theta)? - u;
        for _ in 0..200 {
            if residual == 0.0 {
                break;
            }
            if residual < 0.0 {
                left = theta;
            } else {
                right = theta;
            }
            let slope = self.log_mgf_d2(theta)?;
            let mut next = theta - residual / slope;
            if !(next > left && next < right) {
                next = 0.5 * (left + right);
            }
            let step = next - theta;
            theta = next;
            residual = b(theta)? - u;
            if step.abs() <= 4.0 * f64::EPSILON * theta.abs().max(1.0) || right - left <= f64::EPSILON {
                break;
            }
        }
        if residual.abs() > DUAL_TOL {
            return Err(Error::Inconsistent("dual solve did not reach its residual tolerance"));
        }
        Ok(DualPair { theta, u })
    }

    /// Cramér rate function `I(u)` on the open support interval.
    pub fn rate(&self, u: f64) -> Result<f64> {
        Ok(self.rate_point(u)?.value)
    }

    /// `I'(u)`, equal to the dual variable.
    pub fn rate_d1(&self, u: f64) -> Result<f64> {
        Ok(self.dual_theta(u)?.theta)
    }

    /// `I''(u) = 1 / A(theta(u))`.
    pub fn rate_d2(&self, u: f64) -> Result<f64> {
        Ok(self.rate_point(u)?.d2)
    }

    /// `I`, `I'`, `I''` at `u` from one dual solve.
    pub fn rate_point(&self, u: f64) -> Result<RatePoint> {
        let DualPair { theta, u } = self.dual_theta(u)?;
        let value = theta * u - self.log_mgf(theta)?;
        let d2 = 1.0 / self.log_mgf_d2(theta)?;
        Ok(RatePoint { u, theta, value, d1: theta, d2 })
    }

    /// Limiting value of `I` at a support endpoint: `-log P(atom)` for atomic
    /// endpoints, `+inf` for the uniform law.
    pub fn endpoint_rate(&self, end: Endpoint) -> f64 {
        match self {
            EdgeDistribution::Uniform01 => f64::INFINITY,
            EdgeDistribution::BernoulliHalf => core::f64::consts::LN_2,
            EdgeDistribution::FiniteSupport(fs) => {
                let atom = match end {
                    Endpoint::Lower => fs.atoms[0],
                    Endpoint::Upper => fs.atoms[fs.atoms.len() - 1],
                };
                -log(atom.probability)
            }
        }
    }

    /// One iid draw from the law.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            EdgeDistribution::Uniform01 => Open01.sample(rng),
            EdgeDistribution::BernoulliHalf => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    0.0
                }
            }
            EdgeDistribution::FiniteSupport(fs) => {
                let x: f64 = rng.random();
                let mut acc = 0.0;
                for atom in &fs.atoms {
                    acc += atom.probability;
                    if x < acc {
                        return atom.value;
                    }
                }
                fs.atoms[fs.atoms.len() - 1].value
            }
        }
    }
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + log1p(exp(-x))
    } else {
        log1p(exp(x))
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + exp(-x))
    } else {
        let e = exp(x);
        e / (1.0 + e)
    }
}

/// Cumulant functions of the uniform(0,1) law, `M(theta) = (e^theta - 1) / theta`.
pub(crate) mod uniform {
    use super::{exp, expm1, log, log1p, SERIES_SWITCH, SERIES_SWITCH_WIDE};

    /// Horner evaluation of `sum c_k x^k`.
    fn poly(coeffs: &[f64], x: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    // Taylor coefficients in powers of theta^2 (Bernoulli-number expansions).
    const LOG_MGF_EVEN: [f64; 6] = [
        0.0,
        1.0 / 24.0,
        -1.0 / 2880.0,
        1.0 / 181440.0,
        -1.0 / 9676800.0,
        1.0 / 479001600.0,
    ];
    const D1_ODD: [f64; 5] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
    ];
    const D2_EVEN: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 240.0,
        1.0 / 6048.0,
        -1.0 / 172800.0,
        1.0 / 5322240.0,
        -691.0 / 118879488000.0,
        1.0 / 5748019200.0,
    ];
    const D3_ODD: [f64; 6] = [
        -1.0 / 120.0,
        1.0 / 1512.0,
        -1.0 / 28800.0,
        1.0 / 665280.0,
        -691.0 / 11887948800.0,
        1.0 / 479001600.0,
    ];

    pub(crate) fn log_mgf_series(t: f64) -> f64 {
        0.5 * t + poly(&LOG_MGF_EVEN, t * t)
    }
    pub(crate) fn d1_series(t: f64) -> f64 {
        0.5 + t * poly(&D1_ODD, t * t)
    }
    pub(crate) fn d2_series(t: f64) -> f64 {
        poly(&D2_EVEN, t * t)
    }
    pub(crate) fn d3_series(t: f64) -> f64 {
        t * poly(&D3_ODD, t * t)
    }

    pub(crate) fn log_mgf_direct(t: f64) -> f64 {
        if t > 0.0 {
            t + log1p(-exp(-t)) - log(t)
        } else {
            log(-expm1(t)) - log(-t)
        }
    }
    pub(crate) fn d1_direct(t: f64) -> f64 {
        // e^t / (e^t - 1) - 1/t
        -1.0 / expm1(-t) - 1.0 / t
    }
    pub(crate) fn d2_direct(t: f64) -> f64 {
        // 1/t^2 - e^t / (e^t - 1)^2, written in e^{-|t|} to avoid overflow
        let e = exp(-t.abs());
        let denom = expm1(-t.abs());
        1.0 / (t * t) - e / (denom * denom)
    }
    pub(crate) fn d3_direct(t: f64) -> f64 {
        let e = exp(-t.abs());
        let one_minus = -expm1(-t.abs());
        -2.0 / (t * t * t) + t.signum() * e * (1.0 + e) / (one_minus * one_minus * one_minus)
    }

    pub(crate) fn log_mgf(t: f64) -> f64 {
        if t.abs() < SERIES_SWITCH {
            log_mgf_series(t)
        } else {
            log_mgf_direct(t)
        }
    }
    pub(crate) fn d1(t: f64) -> f64 {
        if t.abs() < SERIES_SWITCH {
            d1_series(t)
        } else {
            d1_direct(t)
        }
    }
    pub(crate) fn d2(t: f64) -> f64 {
        if t.abs() < SERIES_SWITCH_WIDE {
            d2_series(t)
        } else {
            d2_direct(t)
        }
    }
    pub(crate) fn d3(t: f64) -> f64 {
        if t.abs() < SERIES_SWITCH_WIDE {
            d3_series(t)
        } else {
            d3_direct(t)
        }
    }
}
