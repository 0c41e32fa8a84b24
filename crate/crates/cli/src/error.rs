use hecke_core::error::Error;
use serde_json::{json, Value};

pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read input: {0}")]
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_resource() => EXIT_RESOURCE,
            CliError::Core(_) | CliError::Io(_) => EXIT_DOMAIN,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }

    pub fn to_json(&self) -> Value {
        let message = self.to_string();
        let body = match self {
            CliError::Core(Error::Domain { precondition, detail }) => {
                json!({"kind": "domain", "precondition": precondition, "detail": detail})
            }
            CliError::Core(Error::Resource { bound, detail }) => {
                json!({"kind": "resource", "bound": bound, "detail": detail})
            }
            CliError::Core(Error::Dimension { expected, got }) => {
                json!({"kind": "dimension", "expected": expected, "got": got})
            }
            CliError::Core(Error::Parse { field, detail }) => {
                json!({"kind": "parse", "field": field, "detail": detail})
            }
            CliError::Core(Error::ExtendField { p, k, needed, polynomial }) => json!({
                "kind": "extend_field",
                "p": p,
                "k": k,
                "needed": needed,
                "polynomial": polynomial,
            }),
            CliError::Core(Error::Inconsistent(detail)) => {
                json!({"kind": "inconsistent", "detail": detail})
            }
            CliError::Usage(detail) => json!({"kind": "usage", "detail": detail}),
            CliError::Io(detail) => json!({"kind": "io", "detail": detail}),
        };
        let mut body = body;
        body["message"] = Value::String(message);
        json!({ "error": body })
    }
}
