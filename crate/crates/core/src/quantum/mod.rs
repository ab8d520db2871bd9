//! States, POVMs, channels and instruments.
//!
//! Channels are stored as Choi matrices with the output factor first:
//! `J(T) = Σ_ij T(|i⟩⟨j|) ⊗ |i⟩⟨j|`, unnormalized (trace `d` for a
//! trace-preserving map). With this convention
//!
//! * `T(ρ) = tr₂[J (1 ⊗ ρᵀ)]`,
//! * `T*(1) = (tr₁ J)ᵀ`, so `T` is trace preserving iff `tr₁ J = 1`,
//! * `T` is completely positive iff `J ⪰ 0`.

mod channel;
mod instrument;
mod json;
mod povm;
pub mod random;
mod state;
pub mod targets;

pub use channel::Channel;
pub use instrument::Instrument;
pub use povm::Povm;
pub use state::{fidelity, DensityMatrix};

/// Tolerance for positivity and normalization of POVMs and channels.
pub const VALIDATION_TOL: f64 = 1e-9;
