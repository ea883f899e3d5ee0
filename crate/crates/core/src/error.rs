use thiserror::Error;

/// Errors raised by the numerical kernels and the run orchestration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("basis overflow at kick t={t}: momentum window would exceed {cap} sites")]
    BasisOverflow { t: u64, cap: usize },

    #[error("no accelerator mode: tau*eta = {tau_eta} exceeds k_tilde = {k_tilde}")]
    NoAcceleratorMode { tau_eta: f64, k_tilde: f64 },

    #[error("argument outside supported domain: {0}")]
    Domain(String),

    #[error("fit rejected: {0}")]
    Fit(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

impl Error {
    /// Process exit status: 2 for configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::NoAcceleratorMode { .. }
            | Error::Config(_)
            | Error::Json(_) => 2,
            Error::BasisOverflow { .. } | Error::Domain(_) | Error::Fit(_) | Error::Io(_) => 3,
        }
    }
}
