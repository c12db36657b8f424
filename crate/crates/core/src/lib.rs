//! Bound states and planar scattering for the family of magnetic-flux
//! Hamiltonians with a point interaction at the flux line.
//!
//! The model is fixed by five real parameters: the flux `alpha` in (0, 1)
//! and a coupling matrix Lambda = [[u, alpha conj(w)], [(1-alpha) w, v]]
//! (u, v real, w complex) relating the singular and regular boundary
//! coefficients of wavefunctions in the two critical angular-momentum
//! channels m = -1, 0. The crate computes, in natural units (hbar = 2m = 1,
//! E = k^2):
//!
//! * the negative-energy spectrum E = -p^2 with channel coefficients and
//!   radial profiles ([`spectrum`]),
//! * the unitary 2x2 channel scattering matrix Sigma(k), the full angular
//!   kernel and the differential cross-section ([`scattering`]),
//! * generalized eigenfunctions and boundary-data extraction
//!   ([`eigenbasis`]),
//! * deterministic parameter sweeps, parallelized with rayon when the
//!   `parallel` feature (default) is enabled ([`sweep`]).
//!
//! The real-order Bessel/Gamma kernels everything rests on live in
//! [`specialfn`].

mod dd;

pub mod batch;
pub mod eigenbasis;
pub mod mat2;
pub mod numfmt;
pub mod params;
pub mod scattering;
pub mod specialfn;
pub mod spectrum;
pub mod sweep;

pub use mat2::{Mat2, C64};
pub use params::{Flux, LambdaParams, ParamError, UParams};
pub use specialfn::{bessel_j, bessel_k, gamma_real, Order, SpecialFnError};
