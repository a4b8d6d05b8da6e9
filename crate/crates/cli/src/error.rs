use std::process::ExitCode;

use flagmotive::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Core(Error),

    #[error("{field}: {source}")]
    Field {
        field: String,
        source: Box<CliError>,
    },

    /// The criterion and the oracle gave different answers.
    #[error("oracle disagreement: {0}")]
    Disagreement(String),
}

impl CliError {
    pub fn at(field: &str, e: Error) -> Self {
        CliError::Core(e).within(field)
    }

    pub fn within(self, field: &str) -> Self {
        CliError::Field {
            field: field.to_string(),
            source: Box::new(self),
        }
    }

    fn root(&self) -> &CliError {
        match self {
            CliError::Field { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self.root() {
            CliError::Core(Error::InternalInvariant(_)) | CliError::Disagreement(_) => {
                ExitCode::from(3)
            }
            _ => ExitCode::from(2),
        }
    }

    /// One diagnostic line, plus one line per axiom witness for rejected tables.
    pub fn report(&self) -> String {
        let mut out = format!("error: {self}");
        if let CliError::Core(Error::InvalidIndexTable(violations)) = self.root() {
            for v in violations {
                out.push_str(&format!("\n  witness: {v}"));
            }
        }
        out
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
