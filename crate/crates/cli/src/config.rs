//! Tool configuration: defaults, environment, config file and flags.
//!
//! Precedence, lowest first: built-in defaults, `ASMSIM_CC` (compiler
//! program), the `--config` file, command-line flags.

use std::path::{Path, PathBuf};

use asmsim_core::{NgramMode, ParserConfig};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const COMPILER_ENV: &str = "ASMSIM_CC";
pub const DEFAULT_COMPILER: &str = "arm-none-eabi-gcc";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToolConfig {
    /// Command template. `{input}` and `{output}` are replaced by paths and
    /// `{flags}` by `compiler_flags`; without `{flags}` the flags follow the
    /// program name.
    pub compiler_command: Option<String>,
    pub compiler_flags: Vec<String>,
    pub cache_dir: Option<PathBuf>,
    pub parser: ParserConfig,
    pub strides: Option<Vec<usize>>,
    pub output_format: OutputFormat,
    pub ngram_mode: NgramMode,
    pub jobs: usize,
}

impl Default for ToolConfig {
    fn default() -> Self {
        ToolConfig {
            compiler_command: None,
            // assembly output, Thumb state, no optimization
            compiler_flags: ["-S", "-mthumb", "-O0"].map(String::from).to_vec(),
            cache_dir: None,
            parser: ParserConfig::default(),
            strides: None,
            output_format: OutputFormat::default(),
            ngram_mode: NgramMode::default(),
            jobs: 1,
        }
    }
}

/// Flag values that override the file configuration when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub format: Option<OutputFormat>,
    pub jobs: Option<usize>,
    pub strict: bool,
    pub linear_ngrams: bool,
    pub strides: Option<Vec<usize>>,
    pub compiler: Option<String>,
}

impl ToolConfig {
    fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let parsed = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|message| CliError::Config {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn resolve(
        file: Option<&Path>,
        env_compiler: Option<String>,
        overrides: &Overrides,
    ) -> Result<Self, CliError> {
        let mut config = match file {
            Some(p) => Self::from_file(p)?,
            None => ToolConfig::default(),
        };
        if config.compiler_command.is_none() {
            let program = env_compiler.unwrap_or_else(|| DEFAULT_COMPILER.to_string());
            config.compiler_command = Some(format!("{program} {{flags}} {{input}} -o {{output}}"));
        }
        if let Some(c) = &overrides.compiler {
            config.compiler_command = Some(c.clone());
        }
        if let Some(f) = overrides.format {
            config.output_format = f;
        }
        if let Some(j) = overrides.jobs {
            config.jobs = j;
        }
        if overrides.strict {
            config.parser.strict = true;
        }
        if overrides.linear_ngrams {
            config.ngram_mode = NgramMode::Linear;
        }
        if let Some(s) = &overrides.strides {
            config.strides = Some(s.clone());
        }

        let invalid = |message: String| CliError::Config {
            path: file.map_or_else(|| PathBuf::from("-"), Path::to_path_buf),
            message,
        };
        if config.jobs == 0 {
            return Err(invalid("jobs must be at least 1".to_string()));
        }
        config.parser.validate().map_err(invalid)?;
        Ok(config)
    }

    /// Program name and argument list for one compilation.
    pub fn compiler_argv(&self, input: &Path, output: &Path) -> Vec<String> {
        let template = self.compiler_command.as_deref().unwrap_or(DEFAULT_COMPILER);
        let mut argv = Vec::new();
        let has_flags = template.split_whitespace().any(|t| t == "{flags}");
        for (i, token) in template.split_whitespace().enumerate() {
            match token {
                "{flags}" => argv.extend(self.compiler_flags.iter().cloned()),
                _ => argv.push(
                    token
                        .replace("{input}", &input.to_string_lossy())
                        .replace("{output}", &output.to_string_lossy()),
                ),
            }
            if i == 0 && !has_flags {
                argv.extend(self.compiler_flags.iter().cloned());
            }
        }
        argv
    }
}
