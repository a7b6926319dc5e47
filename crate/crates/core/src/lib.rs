//! Diagnostics for two-qubit mixed states drawn from N-qubit W/GHZ
//! subsystems and their classical mixtures: inseparability via the
//! partial-transpose criterion, Bell-CHSH violation via M(rho), and
//! usefulness as a teleportation channel via the standard-scheme fidelity.
//!
//! The library is organized bottom-up:
//!
//! - [`qmat`]: dense complex linear algebra sized for 2^N pure states and
//!   4x4 density operators;
//! - [`states`]: W/GHZ constructors, their closed-form two-qubit reductions,
//!   the p-mixture of the two, and the density file format;
//! - [`criteria`]: the three diagnostics plus the CHSH and fully entangled
//!   fraction optimization oracles;
//! - [`analysis`]: regime classification, certified thresholds, p-sweeps,
//!   and the N = 3, 4, 5 summary table with its verifier.
//!
//! All operations are pure functions of their inputs and safe to call from
//! concurrent workers; the oracles take explicit seeds so runs reproduce.

pub mod analysis;
pub mod criteria;
pub mod error;
pub mod qmat;
pub mod states;

pub use error::{Error, Result};
pub use qmat::{ComplexMatrix, TOL_EIGEN, TOL_HERMITIAN, TOL_SIGN};
pub use states::{MixtureSpec, PureState, TwoQubitDensity};
