//! Bound states of the 1+1 dimensional Dirac equation with the Lorentz-scalar
//! linear potential `V(x) = g|x|`.
//!
//! The spectrum is fixed by a transcendental quantization condition on
//! Hermite functions of generally non-integer real order
//! `nu = E^2 / 2g`: roots of `H_nu(alpha)^2 - 2 nu H_{nu-1}(alpha)^2` in
//! `nu`, with `alpha = m / sqrt(g)`, give the energy pairs
//! `E = +/- sqrt(2 nu g)`.
//!
//! * [`specfun`] evaluates the Kummer series, the reciprocal gamma function
//!   and Hermite functions of real order.
//! * [`spectral`] defines the quantization condition, brackets and refines
//!   its roots, and quantifies how far the integer-quantized spectrum is
//!   from satisfying the matching conditions.
//! * [`wavefunction`] assembles normalized two-component bound-state
//!   profiles and measures their continuity defect at the origin.
//! * [`oracle`] finds the same energies by shooting integration of the
//!   coupled first-order system, without touching Hermite functions; it
//!   cross-validates the spectral route.

pub mod error;
pub mod oracle;
pub mod specfun;
pub mod spectral;
pub mod wavefunction;

pub use error::{Error, Result};
pub use oracle::OracleResult;
pub use spectral::{Bracket, EigenvalueRecord, PhysicalParams, SolveMethod};
pub use wavefunction::{EnergySign, WavefunctionProfile};
