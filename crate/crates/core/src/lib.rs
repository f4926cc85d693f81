//! Exact computations with sl(3) Borel and parabolic Verma modules.
//!
//! The crate builds PBW bases of both module families, straightens the action
//! of sl(3) generators from matrix-unit commutators, and uses exact rational
//! linear algebra to find root sl(2) singular vectors and the spectra of the
//! root Casimir elements `κ_ij = E_ij E_ji + E_ji E_ij`. Traces of the root
//! monodromy operators are formal sums `Σ q^{eigenvalue}`; they are assembled
//! twice (directly from the spectra, and from the branching tables) and
//! compared with closed-form partial theta series on finite windows.
//!
//! Module map:
//! - [`exactalg`]: rationals, dense matrices, fraction-free rank and kernels.
//! - [`qseries`]: formal series in `q^{c0 + c1 λ1 + c2 λ2} t1^a t2^b`.
//! - [`verma`]: module bases, straightening, operator matrices, characters.
//! - [`branching`]: singular vectors, branching tables, κ spectra, traces.
//! - [`theta`]: closed forms and the three-way identity verifier.

pub mod branching;
pub mod exactalg;
pub mod qseries;
pub mod theta;
pub mod verma;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("incompatible windows: {0}")]
    IncompatibleWindows(String),
    #[error("divergent expansion: {0}")]
    Divergent(String),
    #[error("weight ({n},{m}) needs depth {needed} but the module is cut off at depth {depth}")]
    Truncation {
        n: usize,
        m: usize,
        needed: usize,
        depth: usize,
    },
    #[error("lambda fails the genericity guard: {0}")]
    Genericity(String),
    #[error("dimension accounting failed at weight ({n},{m}): constituents give {found}, weight space has {expected}")]
    DimensionAccounting {
        n: usize,
        m: usize,
        found: usize,
        expected: usize,
    },
    #[error("kappa spectrum at weight ({n},{m}) is incomplete: multiplicities sum to {found}, dimension {expected}")]
    IncompleteSpectrum {
        n: usize,
        m: usize,
        found: usize,
        expected: usize,
    },
    #[error("no unique affine lift at weight ({n},{m}): {detail}")]
    AmbiguousLift { n: usize, m: usize, detail: String },
    #[error("samples disagree: {0}")]
    Replication(String),
}

pub type Result<T> = std::result::Result<T, Error>;
