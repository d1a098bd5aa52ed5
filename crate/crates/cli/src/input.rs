//! Equation files: one equation per line, `#` starts a comment, and an
//! optional `@values a=1,b=-1` line sets the valuation.

use std::path::{Path, PathBuf};

use thiserror::Error;
use wordeq::{Alphabet, EquationError, OneVarEquation, WordError};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {source}")]
    Equation { path: PathBuf, line: usize, source: EquationError },
    #[error("{path}:{line}: {source}")]
    Values { path: PathBuf, line: usize, source: WordError },
    #[error("{0}: no equations found")]
    Empty(PathBuf),
}

pub struct EquationFile {
    pub equations: Vec<OneVarEquation>,
    pub values: Option<Alphabet>,
}

impl EquationFile {
    /// The `@values` valuation extended to every letter in use, or the
    /// default valuation `a=1, b=2, …`.
    pub fn alphabet_for(&self, e: &OneVarEquation) -> Alphabet {
        match &self.values {
            Some(a) => a.extended_with(e.letters()),
            None => Alphabet::default_for(e.letters()),
        }
    }
}

pub fn parse(path: &Path, text: &str) -> Result<EquationFile, InputError> {
    let mut equations = Vec::new();
    let mut values = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(spec) = line.strip_prefix("@values") {
            let a = Alphabet::parse(spec).map_err(|source| InputError::Values {
                path: path.into(),
                line: i + 1,
                source,
            })?;
            values = Some(a);
            continue;
        }
        let e = OneVarEquation::parse(line).map_err(|source| InputError::Equation {
            path: path.into(),
            line: i + 1,
            source,
        })?;
        equations.push(e);
    }
    if equations.is_empty() {
        return Err(InputError::Empty(path.into()));
    }
    Ok(EquationFile { equations, values })
}

pub fn read(path: &Path) -> Result<EquationFile, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.into(), source })?;
    parse(path, &text)
}
