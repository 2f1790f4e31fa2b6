use thiserror::Error;

/// Errors raised by the solvers and model constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cavity linewidth must be positive, got {0}")]
    NonPositiveLinewidth(f64),
    #[error("Lorentzian weight must be non-negative, got {0}")]
    NegativeWeight(f64),
    #[error("qubit-reservoir couplings are both zero")]
    ZeroCoupling,
    #[error("relative coupling r1 must lie in [0, 1], got {0}")]
    OutOfRangeCoupling(f64),
    #[error("separability parameter must lie in [-1, 1], got {0}")]
    OutOfRangeSeparability(f64),
    #[error("initial state is not normalized: |c01|^2 + |c02|^2 = {0}")]
    NotNormalized(f64),
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),
    #[error("closed form requires equal qubit frequencies, got delta_21 = {0}")]
    ScenarioMismatch(f64),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("correlation lag must be non-negative, got {0}")]
    NegativeLag(f64),
    #[error("amplitudes exceed unit norm: |c1|^2 + |c2|^2 = {0}")]
    SupernormalState(f64),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("integration step {dt} exceeds the resolution limit {limit}")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("unknown approximation regime `{0}`")]
    UnknownRegime(String),
    #[error("analysis window spans {span} but at least {required} is needed")]
    WindowTooShort { span: f64, required: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
