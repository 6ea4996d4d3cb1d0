use std::path::Path;

use asmsim_core::{parse_assembly, AssemblyProgram, ProgramFeatures};

use crate::config::ToolConfig;
use crate::error::CliError;

/// Reads and parses one listing. Skipped lines are reported on stderr.
pub fn load_program(path: &Path, config: &ToolConfig) -> Result<AssemblyProgram, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = String::from_utf8_lossy(&bytes);
    let program = parse_assembly(&text, &config.parser).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    for d in &program.diagnostics {
        eprintln!("{}:{}: warning: skipped line: {}", path.display(), d.line_no, d.message);
    }
    Ok(program)
}

pub fn load_features(path: &Path, config: &ToolConfig) -> Result<ProgramFeatures, CliError> {
    let program = load_program(path, config)?;
    Ok(ProgramFeatures::extract(&program, &config.parser, config.ngram_mode))
}

/// Writes to stdout; a closed pipe (`| head`) ends output quietly.
pub fn write_stdout(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(CliError::io(Path::new("<stdout>"), e))
        }
        _ => Ok(()),
    }
}
