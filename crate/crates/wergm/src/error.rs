//! Machine-readable error records.

use serde_json::json;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub module: String,
    pub operation: String,
    pub message: String,
    pub parameter: Option<String>,
}

impl CliError {
    pub fn cli(operation: &str, message: impl Into<String>, parameter: Option<&str>) -> Self {
        Self {
            module: "cli".into(),
            operation: operation.into(),
            message: message.into(),
            parameter: parameter.map(String::from),
        }
    }

    /// Wrap a numerical error, keeping the module and parameter it names.
    pub fn core(operation: &str, err: wergm_core::Error) -> Self {
        Self {
            module: err.module().into(),
            operation: operation.into(),
            message: err.to_string(),
            parameter: err.parameter().map(String::from),
        }
    }

    pub fn to_json(&self) -> String {
        json!({
            "module": self.module,
            "operation": self.operation,
            "message": self.message,
            "offending_parameter": self.parameter,
        })
        .to_string()
    }
}
