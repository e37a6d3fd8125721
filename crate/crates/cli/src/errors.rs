use monodromy_core::certify::CertifyError;
use monodromy_core::curves::CurveError;
use monodromy_core::galois::GaloisError;
use monodromy_core::grouplab::GroupLabError;
use monodromy_core::modarith::ModArithError;
use monodromy_core::sieve::SieveError;
use monodromy_core::symplectic::SymplecticError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCode {
    Usage,
    Budget,
    Precondition,
    CheckFailed,
}

impl ErrorCode {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCode::Usage => 1,
            ErrorCode::Budget => 2,
            ErrorCode::Precondition => 3,
            ErrorCode::CheckFailed => 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CliError {
    pub code: ErrorCode,
    pub message: String,
}

impl CliError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::Usage, message)
    }

    pub fn context(mut self, what: impl std::fmt::Display) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<SymplecticError> for CliError {
    fn from(e: SymplecticError) -> Self {
        let code = match e {
            SymplecticError::UnsupportedModulus(_) | SymplecticError::UnsupportedGenus(_) => ErrorCode::Budget,
            SymplecticError::InvalidInput(_) => ErrorCode::Usage,
            _ => ErrorCode::Precondition,
        };
        Self::new(code, e.to_string())
    }
}

impl From<GroupLabError> for CliError {
    fn from(e: GroupLabError) -> Self {
        match e {
            GroupLabError::CapExceeded { .. } | GroupLabError::UnsupportedSize(_) => {
                Self::new(ErrorCode::Budget, e.to_string())
            }
            GroupLabError::Symplectic(inner) => inner.into(),
        }
    }
}

impl From<ModArithError> for CliError {
    fn from(e: ModArithError) -> Self {
        Self::new(ErrorCode::Precondition, e.to_string())
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        let code = match e {
            CurveError::FieldTooLarge { .. } | CurveError::GenusTooLarge { .. } => ErrorCode::Budget,
            CurveError::Parse(_) => ErrorCode::Usage,
            _ => ErrorCode::Precondition,
        };
        Self::new(code, e.to_string())
    }
}

impl From<GaloisError> for CliError {
    fn from(e: GaloisError) -> Self {
        let code = match e {
            GaloisError::PrecisionFailure => ErrorCode::Budget,
            GaloisError::InvalidInput(_) => ErrorCode::Usage,
            _ => ErrorCode::Precondition,
        };
        Self::new(code, e.to_string())
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Curve(inner) => inner.into(),
            CertifyError::InvalidInput(_) => Self::usage(e.to_string()),
            _ => Self::new(ErrorCode::Precondition, e.to_string()),
        }
    }
}

impl From<SieveError> for CliError {
    fn from(e: SieveError) -> Self {
        let code = match e {
            SieveError::EmptyFamily(_) => ErrorCode::Precondition,
            SieveError::InvalidParams(_) | SieveError::InvalidFamily(_) => ErrorCode::Usage,
        };
        Self::new(code, e.to_string())
    }
}
