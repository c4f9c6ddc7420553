//! Statevector simulation of two-level emitter ensembles coupled to a
//! discretized bosonic radiation bath.
//!
//! Bosonic modes are mapped onto qubit registers in a binary encoding, the
//! Hamiltonian is qubitized into weighted Pauli strings, and the dynamics is
//! evolved with exact per-string exponentials under a first-order
//! Suzuki-Trotter schedule. Master-equation and dense exact-evolution
//! reference solvers back every result, and a scenario layer reproduces the
//! standard superradiance experiments as CSV output.

// Force the system BLAS/LAPACK backend into every artifact that links this
// crate, whether or not the compilation unit itself calls into LAPACK.
extern crate openblas_src as _;

pub mod analysis;
pub mod boson;
pub mod config;
pub mod error;
pub mod hamiltonian;
pub mod lindblad;
pub mod observables;
pub mod pauli;
pub mod state;
pub mod timeseries;

pub use error::{Error, Result};
