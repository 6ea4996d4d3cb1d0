//! `asmsim`: instruction-level similarity of assembly programs.

mod compare;
mod compile;
mod config;
mod error;
mod extract;
mod programs;
mod study;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::compare::MetricChoice;
use crate::config::{OutputFormat, Overrides, ToolConfig, COMPILER_ENV};
use crate::error::{CliError, Diagnostic};

#[derive(Debug, Parser)]
#[command(name = "asmsim", version, about = "Instruction-level similarity of assembly programs")]
struct Cli {
    /// Tool configuration file (TOML, or JSON with a .json extension).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads for parsing and pair computations.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Abort on the first unclassifiable assembly line.
    #[arg(long, global = true)]
    strict: bool,
    /// Form n-grams over the whole listing instead of inside basic blocks.
    #[arg(long, global = true)]
    linear_ngrams: bool,
    /// Totally-different strides, e.g. `1,2,3`.
    #[arg(long, global = true, value_delimiter = ',')]
    strides: Option<Vec<usize>>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dump mnemonic, frequency and n-gram features as JSON.
    Extract {
        /// Assembly files or directories.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// File pattern applied inside directory inputs.
        #[arg(long, default_value = "*.s")]
        glob: String,
        /// Write one `<stem>.json` per input here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two assembly files.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        metric: MetricChoice,
    },
    /// Cross-compile the C sources of a manifest and write a manifest of the
    /// resulting assembly.
    Compile {
        manifest: PathBuf,
        /// Derived manifest path (default: `<manifest>.asm.json`).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Compiler command template with `{input}`, `{output}` and
        /// optionally `{flags}`.
        #[arg(long)]
        compiler: Option<String>,
    },
    /// Run the grouping study over one or more manifests.
    Study {
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let compiler = match &cli.command {
        Command::Compile { compiler, .. } => compiler.clone(),
        _ => None,
    };
    let overrides = Overrides {
        format: cli.format,
        jobs: cli.jobs.map(|j| j as usize),
        strict: cli.strict,
        linear_ngrams: cli.linear_ngrams,
        strides: cli.strides.clone(),
        compiler,
    };
    let env_compiler = std::env::var(COMPILER_ENV).ok().filter(|s| !s.is_empty());
    let config = ToolConfig::resolve(cli.config.as_deref(), env_compiler, &overrides)?;

    match cli.command {
        Command::Extract { inputs, glob, out } => extract::run(&inputs, &glob, out.as_deref(), &config),
        Command::Compare { a, b, metric } => compare::run(&a, &b, metric, &config),
        Command::Compile {
            manifest,
            output,
            cache_dir,
            ..
        } => compile::run(&manifest, output.as_deref(), cache_dir.as_deref(), &config),
        Command::Study { manifests, out } => study::run(&manifests, out.as_deref(), &config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", Diagnostic(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
