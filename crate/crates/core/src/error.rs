use core::fmt;

/// Errors raised by the numerical routines.
///
/// Each variant knows which module owns the violated precondition and, where
/// there is one, which input parameter was at fault. The CLI turns these into
/// machine-readable error records.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The dual variable would have to exceed the overflow cap.
    ThetaCap { theta: f64, cap: f64 },
    /// A mean parameter outside the open support interval of the edge law.
    OutsideSupport { u: f64, lo: f64, hi: f64 },
    /// The edge distribution itself is malformed.
    InvalidDistribution(&'static str),
    /// The operation only supports the uniform(0,1) edge law.
    UniformOnly { operation: &'static str },
    /// The scalar variational formula is only valid for a non-negative second parameter.
    NegativeBeta2 { beta2: f64 },
    /// Edge count of the second subgraph must be at least 2.
    InvalidEdgeCount { p: u32 },
    /// No interior stationary point lies inside the reachable domain.
    NoStationaryPoint { beta1: f64, beta2: f64 },
    /// The free energy is not differentiable at a first-order transition.
    GradientUndefined { beta1: f64, beta2: f64 },
    /// The critical search found more than one local maximum of `n`.
    NotUnimodal { p: u32, peaks: usize },
    /// No two-maximizer region exists for this `beta1`.
    NoTwoPhaseRegion { beta1: f64, beta1_c: f64 },
    /// A bracketing assumption that should always hold was violated.
    Inconsistent(&'static str),
    /// The Gaussian integral defining the directed model is infinite.
    GaussianDivergent { beta2: f64 },
    /// Any other rejected argument.
    InvalidArgument { module: &'static str, name: &'static str, reason: &'static str },
}

impl Error {
    /// Name of the module that owns the violated precondition.
    pub fn module(&self) -> &'static str {
        match self {
            Error::ThetaCap { .. } | Error::OutsideSupport { .. } | Error::InvalidDistribution(_) => "cramer",
            Error::NegativeBeta2 { .. }
            | Error::InvalidEdgeCount { .. }
            | Error::NoStationaryPoint { .. }
            | Error::GradientUndefined { .. } => "variational",
            Error::NotUnimodal { .. } | Error::UniformOnly { .. } => "critical",
            Error::NoTwoPhaseRegion { .. } | Error::Inconsistent(_) => "phase_curve",
            Error::GaussianDivergent { .. } => "gaussian_directed",
            Error::InvalidArgument { module, .. } => module,
        }
    }

    /// The input parameter at fault, when a single one can be named.
    pub fn parameter(&self) -> Option<&'static str> {
        match self {
            Error::ThetaCap { .. } => Some("theta"),
            Error::OutsideSupport { .. } => Some("u"),
            Error::InvalidDistribution(_) | Error::UniformOnly { .. } => Some("dist"),
            Error::NegativeBeta2 { .. } | Error::GaussianDivergent { .. } => Some("beta2"),
            Error::InvalidEdgeCount { .. } | Error::NotUnimodal { .. } => Some("p"),
            Error::NoTwoPhaseRegion { .. } => Some("beta1"),
            Error::NoStationaryPoint { .. } | Error::GradientUndefined { .. } => Some("beta"),
            Error::Inconsistent(_) => None,
            Error::InvalidArgument { name, .. } => Some(name),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ThetaCap { theta, cap } => {
                write!(f, "dual variable {theta} exceeds the cap |theta| <= {cap}")
            }
            Error::OutsideSupport { u, lo, hi } => {
                write!(f, "u = {u} is outside the open support interval ({lo}, {hi})")
            }
            Error::InvalidDistribution(why) => write!(f, "invalid edge distribution: {why}"),
            Error::UniformOnly { operation } => {
                write!(f, "{operation} is only defined for the uniform(0,1) edge law")
            }
            Error::NegativeBeta2 { beta2 } => write!(
                f,
                "beta2 = {beta2} < 0 is outside the attractive region where the scalar formula holds"
            ),
            Error::InvalidEdgeCount { p } => write!(f, "edge count p = {p} must be at least 2"),
            Error::NoStationaryPoint { beta1, beta2 } => write!(
                f,
                "no interior maximizer inside the reachable domain for beta = ({beta1}, {beta2})"
            ),
            Error::GradientUndefined { beta1, beta2 } => write!(
                f,
                "two global maximizers at beta = ({beta1}, {beta2}): the gradient jumps here"
            ),
            Error::NotUnimodal { p, peaks } => {
                write!(f, "n(theta) has {peaks} local maxima on the search grid for p = {p}")
            }
            Error::NoTwoPhaseRegion { beta1, beta1_c } => write!(
                f,
                "beta1 = {beta1} is not below the critical value {beta1_c}; no two-maximizer region"
            ),
            Error::Inconsistent(what) => write!(f, "internal inconsistency: {what}"),
            Error::GaussianDivergent { beta2 } => write!(
                f,
                "beta2 = {beta2} is not below 1/2; the Gaussian normalization integral diverges"
            ),
            Error::InvalidArgument { name, reason, .. } => write!(f, "invalid {name}: {reason}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
