use std::fmt;
use std::path::{Path, PathBuf};

use asmsim_core::{CorpusError, MetricError, ParseError};
use thiserror::Error;

pub const EXIT_IO: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_EXTERNAL: i32 = 4;
pub const EXIT_CORPUS: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{message}")]
    Config { path: PathBuf, message: String },
    #[error("{source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{source}")]
    Corpus { entity: String, source: CorpusError },
    #[error("{source}")]
    Metric { entity: String, source: MetricError },
    #[error("{message}")]
    Compiler { entity: String, message: String },
    #[error("{message}")]
    Usage { message: String },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Config { .. } | CliError::Usage { .. } => EXIT_IO,
            CliError::Parse { .. } => EXIT_CORPUS,
            CliError::Metric { .. } => EXIT_DEGENERATE,
            CliError::Compiler { .. } => EXIT_EXTERNAL,
            CliError::Corpus { source, .. } => match source {
                CorpusError::UnreadablePath { .. } => EXIT_IO,
                CorpusError::EmptyProgram { .. }
                | CorpusError::Metric { .. }
                | CorpusError::NonPositive { .. } => EXIT_DEGENERATE,
                _ => EXIT_CORPUS,
            },
        }
    }

    pub fn entity(&self) -> String {
        match self {
            CliError::Io { path, .. } | CliError::Config { path, .. } => path.display().to_string(),
            CliError::Parse { path, source } => format!("{}:{}", path.display(), source.line()),
            CliError::Corpus { entity, source } => match source {
                CorpusError::EmptyProgram { id } | CorpusError::UnreadablePath { id, .. } => {
                    format!("{entity}/{id}")
                }
                CorpusError::Metric { a, b, .. } => format!("{entity}/{a}~{b}"),
                _ => entity.clone(),
            },
            CliError::Metric { entity, .. } | CliError::Compiler { entity, .. } => entity.clone(),
            CliError::Usage { .. } => "-".to_string(),
        }
    }
}

/// The single stderr line printed for a failed run.
pub struct Diagnostic<'a>(pub &'a CliError);

impl fmt::Display for Diagnostic<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let message = self.0.to_string().replace('\n', " ");
        write!(
            f,
            "error: code={} entity={} message={}",
            self.0.exit_code(),
            self.0.entity(),
            message
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagnostic_line_shape() {
        let err = CliError::Corpus {
            entity: "ds".into(),
            source: CorpusError::EmptyProgram { id: "p1a1".into() },
        };
        assert_eq!(
            Diagnostic(&err).to_string(),
            "error: code=3 entity=ds/p1a1 message=program `p1a1` has no instructions"
        );
        let err = CliError::Parse {
            path: "x.s".into(),
            source: ParseError::Unclassifiable {
                line: 4,
                message: "unrecognized token `%`".into(),
            },
        };
        assert_eq!(err.exit_code(), EXIT_CORPUS);
        assert_eq!(err.entity(), "x.s:4");
    }
}
