//! Independent brute-force implementations used only by tests and to mint
//! frozen fixtures; never part of the production evaluation path.

pub mod contour;
pub mod dd;
mod faddeyeva_ref;
pub mod free;
pub mod quad_obs;
pub mod tdse;

pub use contour::{evolve_single_contour, integral_term_quadrature, moshinsky_quadrature};
pub use faddeyeva_ref::faddeyeva_reference;
pub use free::{evolve_free_single, free_propagator, free_survival_single, psi_free_two};
pub use quad_obs::quadrature_observables;
pub use tdse::{tdse_single_particle, GridTdseSpec, TdseResult};
