use std::fmt;
use std::path::Path;

use eqkit_core::Error;

pub mod exit {
    pub const OK: i32 = 0;
    pub const THRESHOLD: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const PARSE: i32 = 4;
    pub const RANK: i32 = 5;
    pub const ANGLE: i32 = 6;
    pub const NOT_EQUIANGULAR: i32 = 7;
    pub const NONREAL_ROOTS: i32 = 8;
    pub const SPECTRUM: i32 = 9;
    pub const NO_CONVERGENCE: i32 = 10;
    pub const OTHER: i32 = 11;
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn parse(path: &Path, msg: impl fmt::Display) -> Self {
        CliError::Parse(format!("{}: {msg}", path.display()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                Error::RankDeficient { .. } | Error::Singular => "rank",
                Error::InvalidAlpha { .. }
                | Error::InvalidAngle { .. }
                | Error::DegenerateAngle { .. }
                | Error::OutOfRange { .. } => "angle",
                Error::NotEquiangular | Error::NotEigenpair { .. } => "not-equiangular",
                Error::NonRealRoots { .. } => "non-real-roots",
                Error::MultiplicityUnsupported { .. } | Error::WrongSpectrum(_) | Error::ComplexSpectrum => "spectrum",
                Error::NoConvergence { .. } => "no-convergence",
                Error::NonFinite => "parse",
                _ => "other",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "io" => exit::IO,
            "parse" => exit::PARSE,
            "usage" => exit::USAGE,
            "rank" => exit::RANK,
            "angle" => exit::ANGLE,
            "not-equiangular" => exit::NOT_EQUIANGULAR,
            "non-real-roots" => exit::NONREAL_ROOTS,
            "spectrum" => exit::SPECTRUM,
            "no-convergence" => exit::NO_CONVERGENCE,
            _ => exit::OTHER,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Parse(m) | CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
