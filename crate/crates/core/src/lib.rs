//! Exact simulation of how much a hazy (initially mixed) qubit environment
//! learns about a dephased system qubit.
//!
//! The layers, bottom up:
//!
//! * [`algebra`]: complex 2×2 algebra, dense Hermitian eigenvalues,
//!   log-domain binomials and spectrum entropies.
//! * [`model`]: initial states, decoherence factors and the closed forms.
//! * [`schur`]: exact fragment and system-fragment spectra by spin-sector
//!   decomposition, fast enough for fragments of 200 qubits.
//! * [`oracle`]: brute-force dense density matrices for small environments.
//! * [`observables`]: information curves, deficits and redundancy.

pub mod algebra;
pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod schur;
pub mod time;

pub use error::{Error, Result};
pub use model::{EnvQubit, ModelConfig, SystemQubit};
pub use time::Time;
