use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use tsallis::format::config_from_json;
use tsallis::{Error, QParam, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Float,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io { path: PathBuf, source: std::io::Error },
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Parse(_)) | CliError::Io { .. } | CliError::Usage(_) => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

/// Values given on the command line.
#[derive(Debug, Default)]
pub struct Flags {
    pub q: Option<String>,
    pub trunc: Option<usize>,
    pub tol: Option<f64>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub output: Option<OutputFormat>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub q: Option<String>,
    pub trunc: usize,
    pub tol: f64,
    pub mode: Mode,
    pub seed: u64,
    pub output: OutputFormat,
    pub out: Option<PathBuf>,
}

fn parse_enum<T: ValueEnum>(text: &str, what: &str) -> Result<T, CliError> {
    T::from_str(text, true).map_err(|_| CliError::Usage(format!("invalid {what} `{text}` in config file")))
}

impl RunConfig {
    /// Flags first, then the config file, then defaults.
    pub fn resolve(flags: Flags, config: Option<&Path>) -> Result<Self, CliError> {
        let file = match config {
            Some(path) => config_from_json(&read_file(path)?)?,
            None => Default::default(),
        };
        let mode = match (flags.mode, &file.mode) {
            (Some(m), _) => m,
            (None, Some(m)) => parse_enum(m, "mode")?,
            (None, None) => Mode::Float,
        };
        let output = match (flags.output, &file.output) {
            (Some(o), _) => o,
            (None, Some(o)) => parse_enum(o, "output")?,
            (None, None) => OutputFormat::Json,
        };
        let cfg = RunConfig {
            q: flags.q.or(file.q_text()?),
            trunc: flags.trunc.or(file.trunc).unwrap_or(64),
            tol: flags.tol.or(file.tol).unwrap_or(1e-10),
            mode,
            seed: flags.seed.or(file.seed).unwrap_or(0),
            output,
            out: flags.out.or(file.out.map(PathBuf::from)),
        };
        if cfg.trunc < 4 {
            return Err(CliError::Usage(format!("trunc must be at least 4, got {}", cfg.trunc)));
        }
        if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
            return Err(CliError::Usage(format!("tol must be positive, got {}", cfg.tol)));
        }
        Ok(cfg)
    }

    pub fn q<R: Real>(&self) -> Result<QParam<R>, CliError> {
        let text = self.q.as_deref().ok_or_else(|| CliError::Usage("--q is required".into()))?;
        Ok(QParam::new(R::parse_literal(text)?)?)
    }
}
