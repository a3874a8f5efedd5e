//! Thermalization-time bounds for Pauli stabilizer Hamiltonians.
//!
//! The crate computes the generalized-energy-barrier bound for low
//! temperatures, the κ(β) condition number and critical temperature for
//! high temperatures, and checks both against exact spectral gaps of the
//! Davies and heat-bath generators of small systems.

pub mod barrier;
pub mod bath;
pub mod bits;
pub mod error;
pub mod high_temp;
pub mod liouvillian;
pub mod model;
pub mod model_io;
pub mod pauli;
pub mod verify;

pub use bath::{BathSpec, RatePreset};
pub use error::{Error, Result};
pub use model::{Rational, StabilizerModel};
pub use liouvillian::{Family, GapMethod, GapResult};
pub use pauli::{PauliKind, PauliOperator, Syndrome};
