use adiag_core::error::{CacheError, ExprError, FamilyError, GroupError, RepError};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

/// A failure reported as JSON on stderr.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CliError {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<usize>,
    pub exit_code: i32,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { error: "usage", message: message.into(), offset: None, exit_code: EXIT_USAGE }
    }

    pub fn compute(message: impl Into<String>) -> Self {
        CliError { error: "computation", message: message.into(), offset: None, exit_code: EXIT_COMPUTE }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { error: "io", message: message.into(), offset: None, exit_code: EXIT_COMPUTE }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("error serialises")
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::OrderCapExceeded { .. } => CliError { error: "orderCap", ..CliError::compute(e.to_string()) },
            GroupError::InvalidParameter { .. } | GroupError::NotAutomorphism(_) | GroupError::ActionOrder { .. } => {
                CliError { error: "invalidGroup", ..CliError::usage(e.to_string()) }
            }
            _ => CliError { error: "invalidTable", ..CliError::usage(e.to_string()) },
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        let message = e.to_string();
        match e {
            ExprError::Syntax { offset, .. } => {
                CliError { error: "syntax", offset: Some(offset), ..CliError::usage(message) }
            }
            ExprError::UnknownAtom { offset, .. } => {
                CliError { error: "unknownAtom", offset: Some(offset), ..CliError::usage(message) }
            }
            ExprError::MalformedAction { offset, .. } => {
                CliError { error: "malformedAction", offset: Some(offset), ..CliError::usage(message) }
            }
            ExprError::Group(g) => g.into(),
        }
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        CliError { error: "representation", ..CliError::compute(e.to_string()) }
    }
}

impl From<CacheError> for CliError {
    fn from(e: CacheError) -> Self {
        match e {
            CacheError::Rep(r) => r.into(),
            other => CliError { error: "cache", ..CliError::compute(other.to_string()) },
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::InvalidParameter(m) => CliError { error: "invalidFamily", ..CliError::usage(m) },
            FamilyError::Expr(x) => x.into(),
            FamilyError::Rep(r) => r.into(),
        }
    }
}
