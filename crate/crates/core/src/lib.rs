//! Resonant-state expansions for the time evolution of quantum decay of one
//! and two identical non-interacting particles from an s-wave delta-shell
//! potential, in units hbar = 2m = 1.
//!
//! The library computes the complex poles of the outgoing Green's function,
//! the normalized resonant states, every overlap coefficient the expansions
//! need, single- and two-particle wave functions in exact (Moshinsky),
//! split (exponential + integral) and long-time asymptotic forms, and the
//! survival and nonescape probabilities across the exponential and
//! nonexponential decay regimes.

pub mod error;
pub mod greens;
pub mod observables;
pub mod oracles;
pub mod overlaps;
pub mod poles;
pub mod propagator;
pub mod quad;
pub mod scenario;
pub mod special;
pub mod two_particle;

pub use error::{Error, Result};
pub use observables::{DecayModel, DecaySeries, SlopeFit};
pub use poles::{ModelParams, Pole, ResonantBasis, ResonantState};
pub use two_particle::{InitialStateKind, InitialStateSpec};

pub(crate) type C64 = num_complex::Complex64;
