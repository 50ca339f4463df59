use opk_core::OpkError;
use serde_json::json;

/// Failure of a run, with its exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Obstruction(String),
    Io(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Failure(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Obstruction(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse(_) => "parse",
            CliError::Obstruction(_) => "obstruction",
            CliError::Io(_) => "io",
            CliError::Failure(_) => "failure",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Obstruction(m) | CliError::Io(m) | CliError::Failure(m) => m,
        }
    }

    /// The machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        json!({"error": {"kind": self.kind(), "code": self.exit_code(), "message": self.message()}}).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<OpkError> for CliError {
    fn from(e: OpkError) -> Self {
        match e {
            OpkError::Parse { .. } => CliError::Parse(e.to_string()),
            OpkError::Torsion { .. } => CliError::Obstruction(e.to_string()),
            OpkError::InvalidArgument(_) | OpkError::InvalidRing(_) | OpkError::NotIntegers(_) | OpkError::Unsupported(_) => {
                CliError::Usage(e.to_string())
            }
            OpkError::Shape(_) | OpkError::InvalidComplex(_) => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
