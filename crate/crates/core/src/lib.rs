//! Multi-cell massive-MIMO OFDM uplink pilot design by power-delay-profile
//! (PDP) alignment.
//!
//! Users in one cell transmit cyclically shifted copies of a common base
//! pilot. Choosing the shifts so that shifted PDPs do not overlap keeps the
//! pilots of one cell orthogonal; choosing them across cells so that colliding
//! taps arrive from different directions lets a large array suppress the
//! residual inter-cell pilot contamination.
//!
//! The crate is organized bottom-up:
//!
//! - [`model`]: OFDM numerology, unitary DFT, base and shifted pilots, the
//!   relative shift operator.
//! - [`channel`]: power-delay profiles, ULA steering vectors, scatterer
//!   geometry, tap covariances and random channel realizations.
//! - [`estimation`]: per-antenna MMSE over tones and per-tap spatial MMSE
//!   across the array, with closed-form error covariances and the residual
//!   interference matrix.
//! - [`alignment`]: orthogonality predicate, alignment cost and the three
//!   shift optimizers.
//! - [`harness`]: Monte-Carlo experiment runner, NMSE and spectral-efficiency
//!   metrics, result persistence.

pub mod alignment;
pub mod channel;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod model;
pub mod seed;

pub use error::{Error, Result};

/// Complex sample type used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
