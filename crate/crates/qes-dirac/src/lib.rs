//! Exact operator algebra and quasi-exactly-solvable (QES) spectra for a
//! planar Dirac electron bound by a Coulomb charge in a uniform magnetic
//! field.
//!
//! The crate has two halves:
//!
//! - an exact symbolic kernel ([`poly`], [`diffop`], [`matop`]) of sparse
//!   multivariate polynomials over arbitrary-precision rationals and 2x2
//!   matrices of differential operators, used by [`osp22`] to verify the
//!   osp(2,2) superalgebra representation, its structure identities, and the
//!   generator decomposition of the master radial operator;
//! - a double-precision spectral side ([`context`], [`spectra`], [`dirac`])
//!   that locates QES points as kernel vectors of a banded coefficient
//!   system, reconstructs both wavefunction components, and audits every
//!   result against the original first-order radial system.
//!
//! Start with the runnable programs in `examples/`; the `qescli` binary
//! exposes the same capabilities as subcommands (`verify-algebra`, `solve`,
//! `check`, `wavefunction`).

pub mod cli;
pub mod context;
pub mod diffop;
pub mod dirac;
pub mod matop;
pub mod osp22;
pub mod poly;
pub mod rational;
pub mod report;
pub mod solution;
pub mod spectra;

pub use context::{derive_context, PhysicalContext};
pub use diffop::{BracketKind, DiffOp};
pub use dirac::WavefunctionSample;
pub use matop::MatOp;
pub use poly::{MultiPoly, Var};
pub use rational::Rational;
pub use spectra::{find_spectral_points, Branch, ScanConfig, SpectralPoint};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid physical context: {0}")]
    InvalidContext(String),
    #[error("no finite energy at t = 1 (x0 = {x0})")]
    EnergyPole { x0: f64 },
    #[error("empty scan range after exclusions")]
    EmptyScanRange,
    #[error("empty sample set")]
    EmptySampleSet,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
