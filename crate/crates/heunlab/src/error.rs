use thiserror::Error;

/// Command failures, split by exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AppError {
    /// Malformed or invalid input; exit code 3.
    #[error("input error: {0}")]
    Input(String),
    /// Well-formed input outside the mathematical domain of the command; exit code 2.
    #[error("domain error: {0}")]
    Domain(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Input(_) => 3,
            AppError::Domain(_) => 2,
        }
    }
}

impl From<heunlab_core::Error> for AppError {
    fn from(e: heunlab_core::Error) -> Self {
        use heunlab_core::Error as E;
        match &e {
            E::OutsideDomain { sum } => AppError::Domain(format!(
                "x lies outside the absolute-convergence domain |A||x| + |B||x|^2 < 1 \
                 (sum = {sum}); pass --force to sum anyway"
            )),
            // values the user wrote that no command accepts
            E::InvalidC(_)
            | E::InvalidParams(_)
            | E::InvalidRecurrence(_)
            | E::TruncationTooLarge(_) => AppError::Input(e.to_string()),
            // valid instances that fall outside what the analysis covers
            _ => AppError::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Input(format!("io: {e}"))
    }
}
