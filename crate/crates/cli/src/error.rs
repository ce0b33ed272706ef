use serde::Serialize;
use serde_json::{json, Value};

use arithdyn::degrees::DegreeError;
use arithdyn::dynamics::DynamicsError;
use arithdyn::heights::HeightError;
use arithdyn::maps::MapError;

/// Everything that makes a run fail. Serialized as a JSON object on stderr.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{message}")]
    Usage { message: String },
    /// Malformed input text; `line` and `column` are 1-based.
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse { source_name: String, line: usize, column: usize, message: String },
    #[error("{message}")]
    Invalid { message: String },
    /// A configured resource limit would be exceeded.
    #[error("refused: {message} (cap `{cap}`)")]
    Cap { cap: String, message: String },
    #[error("{message}")]
    Io { path: String, message: String },
    #[error("{message}")]
    Computation { message: String },
}

#[derive(Serialize)]
struct Body<'a> {
    kind: &'a str,
    message: String,
    #[serde(flatten)]
    extra: Value,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage { message: message.into() }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        CliError::Invalid { message: message.into() }
    }

    pub fn cap(cap: &str, message: impl Into<String>) -> Self {
        CliError::Cap { cap: cap.to_string(), message: message.into() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage { .. } => "usage",
            CliError::Parse { .. } => "parse",
            CliError::Invalid { .. } => "invalid-input",
            CliError::Cap { .. } => "cap-exceeded",
            CliError::Io { .. } => "io",
            CliError::Computation { .. } => "computation",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } | CliError::Parse { .. } | CliError::Invalid { .. } => 2,
            CliError::Cap { .. } => 3,
            CliError::Io { .. } | CliError::Computation { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let extra = match self {
            CliError::Parse { source_name, line, column, .. } => {
                json!({ "source": source_name, "line": line, "column": column })
            }
            CliError::Cap { cap, .. } => json!({ "cap": cap }),
            CliError::Io { path, .. } => json!({ "path": path }),
            _ => json!({}),
        };
        let message = match self {
            CliError::Parse { message, .. } | CliError::Cap { message, .. } => message.clone(),
            other => other.to_string(),
        };
        json!({ "error": Body { kind: self.kind(), message, extra } })
    }

    /// Parse error at a byte offset of `text`.
    pub fn parse_at(source_name: &str, text: &str, offset: usize, message: impl Into<String>) -> Self {
        let (line, column) = line_column(text, offset);
        CliError::Parse { source_name: source_name.to_string(), line, column, message: message.into() }
    }
}

/// 1-based line and column (in characters) of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::UnknownFamily(_) | MapError::InvalidParameter { .. } => CliError::invalid(e.to_string()),
            other => CliError::Computation { message: other.to_string() },
        }
    }
}

impl From<HeightError> for CliError {
    fn from(e: HeightError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<DegreeError> for CliError {
    fn from(e: DegreeError) -> Self {
        match e {
            DegreeError::ScanTooLarge { .. } => CliError::cap("max_scan", e.to_string()),
            DegreeError::LemmaHypothesis(_) | DegreeError::NotMonomial | DegreeError::NoVerifiedInverse => {
                CliError::invalid(e.to_string())
            }
            other => CliError::Computation { message: other.to_string() },
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::EnumerationTooLarge { estimate, cap } => CliError::cap(
                "enumeration_cap",
                format!("the enumeration would scan about {estimate} points, more than the cap of {cap}"),
            ),
            DynamicsError::Map(m) => m.into(),
            DynamicsError::Degree(d) => d.into(),
            DynamicsError::InvalidArgument(_) | DynamicsError::DimensionMismatch { .. } | DynamicsError::NotInverse => {
                CliError::invalid(e.to_string())
            }
            other => CliError::Computation { message: other.to_string() },
        }
    }
}
