//! Stabilizer states built from finite symplectic geometry, with exact
//! counting formulas and frame-potential checks for complex projective
//! designs in dimension `d^n`.
//!
//! Modules, bottom-up:
//!
//! * [`combinatorics`]: exact integers and rationals, Gaussian binomials,
//!   closed-form counts.
//! * [`symplectic`]: canonical subspaces of `Z_d^{2n}`, Lagrangian
//!   enumeration, intersections, symplectic reduction.
//! * [`weyl`]: Weyl operators, symbolic and dense.
//! * [`stabilizer`]: stabilizer states as (Lagrangian, coset) pairs.
//! * [`potential`]: three frame-potential engines and design verdicts.
//! * [`cli`]: the `stabkit` command line.

pub mod cli;
pub mod combinatorics;
pub mod error;
mod linalg;
pub mod potential;
pub mod stabilizer;
pub mod summation;
pub mod symplectic;
pub mod weyl;

pub use combinatorics::{ExactInteger, ExactRational, Prime};
pub use error::{Error, Result};
pub use stabilizer::StabilizerState;
pub use symplectic::{LagrangianSubspace, PhaseVector, Subspace};

/// Resource guards shared by the enumeration and brute-force engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Subspaces visited by an enumeration.
    pub enumeration: u64,
    /// Stabilizer states realized by single-sum engines.
    pub states: u64,
    /// State pairs visited by double-sum engines.
    pub pairs: u64,
    /// Hilbert-space dimension of dense realizations.
    pub matrix: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: symplectic::DEFAULT_ENUMERATION_CAP,
            states: stabilizer::DEFAULT_STATE_CAP,
            pairs: potential::DEFAULT_PAIR_CAP,
            matrix: weyl::DEFAULT_MATRIX_CAP,
        }
    }
}
