//! Information-disturbance tradeoffs for quantum measurements.
//!
//! * [`linalg`]: dense complex matrices and a hermitian eigensolver.
//! * [`quantum`]: states, POVMs, channels and instruments.
//! * [`measures`]: measurement errors and disturbances.
//! * [`family`]: symmetric channels and the optimal instrument family.
//! * [`curves`]: closed-form optimal tradeoff curves.
//! * [`sdp`]: an interior-point SDP solver with the diamond-norm and
//!   tradeoff programs.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod curves;
pub mod error;
pub mod family;
pub mod linalg;
pub mod measures;
pub mod quantum;
pub mod sdp;

pub use error::{Error, Result};
