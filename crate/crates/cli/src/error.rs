use std::path::PathBuf;

use cavity_entangler::Error as ModelError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid {field}: {message}")]
    Invalid { field: String, message: String },
    #[error("solver disagreement: {a} vs {b} sup-norm {sup:.3e} exceeds guard {guard:.3e}")]
    Guard { a: String, b: String, sup: f64, guard: f64 },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn invalid(field: &str, message: impl Into<String>) -> Self {
        CliError::Invalid { field: field.to_string(), message: message.into() }
    }

    /// Model errors are input problems; name the scenario field responsible.
    pub fn from_model(err: ModelError) -> Self {
        let field = match &err {
            ModelError::NonPositiveLinewidth(_) => "lambda",
            ModelError::NegativeWeight(_) | ModelError::ZeroCoupling => "R",
            ModelError::OutOfRangeCoupling(_) => "r1",
            ModelError::OutOfRangeSeparability(_) => "s",
            ModelError::NotNormalized(_) | ModelError::SupernormalState(_) => "initial state",
            ModelError::ScenarioMismatch(_) => "delta2",
            ModelError::NegativeTime(_) | ModelError::NegativeLag(_) | ModelError::InvalidGrid(_) => "t_max",
            ModelError::StepTooLarge { .. } => "dt",
            ModelError::UnknownRegime(_) => "solver",
            ModelError::WindowTooShort { .. } => "t_max",
            ModelError::NonFinite(what) => what,
        };
        CliError::invalid(field, err.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid { .. } => 2,
            CliError::Guard { .. } => 3,
            CliError::Io { .. } => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
