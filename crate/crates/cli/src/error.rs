use std::fmt;

/// A failure reported as a single `error: <kind>: <message>` line.
#[derive(Debug)]
pub struct CliError {
    kind: String,
    message: String,
}

impl CliError {
    pub fn new(kind: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError { kind: kind.into(), message: message.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}: {}", self.kind, self.message.replace('\n', " "))
    }
}
