use std::path::PathBuf;

use qdm_core::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Failure {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Input(String),

    #[error("bad spectrum: {0}")]
    Spectrum(String),

    #[error("{failed} of {total} properties failed")]
    Check { failed: usize, total: usize },
}

impl Failure {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Failure::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Check { .. } => 1,
            Failure::Input(_) => 2,
            Failure::Spectrum(_) => 3,
            Failure::Io { .. } => 4,
            Failure::Core(e) => match e {
                Error::NotHermitian(_)
                | Error::NegativeEigenvalue(_)
                | Error::InvalidTrace(_)
                | Error::OutOfRange { .. }
                | Error::InvalidSpec(_)
                | Error::InvalidConfig(_)
                | Error::Parse(_) => 2,
                Error::DimensionMismatch { .. }
                | Error::BadTarget(_)
                | Error::NotAQubit(_)
                | Error::SpectrumMismatch { .. }
                | Error::DegenerateSpectrum(_) => 3,
                Error::FlatLikelihood(_) | Error::ZeroFisher => 5,
            },
        }
    }
}
