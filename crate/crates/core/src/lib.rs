//! Analysis of binary-input symmetric-output (BISO) channels and of
//! two-receiver broadcast channels built from them.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`binmath`] | binary entropy, its inverse on `[0, 1/2]`, binary convolution |
//! | [`channel`] | canonical paired representation, mutual information, capacity |
//! | [`lorenz`] | BISO step curves, Lorenz curves, majorization |
//! | [`ordering`] | more-capable / essentially-less-noisy decisions, crossing sets |
//! | [`regions`] | TD, superposition, RTD (Marton sum rate) and outer-bound regions |
//! | [`oracle`] | brute-force verifiers built from explicit joint distributions |
//! | [`verify`] | the bundled acceptance checks driven by `biso verify` |
//!
//! All entropies are in bits.
//!
//! ```
//! use biso_core::channel::BisoChannel;
//! use biso_core::ordering::more_capable_sufficient;
//! use biso_core::binmath::Tolerance;
//!
//! let tol = Tolerance::default();
//! let bec = BisoChannel::bec_with_capacity(0.4).unwrap();
//! let bsc = BisoChannel::bsc_with_capacity(0.4).unwrap();
//! // the erasure channel is more capable than the symmetric one at equal capacity
//! assert_eq!(more_capable_sufficient(&bec, &bsc, &tol).unwrap(), Some(true));
//! ```

pub mod binmath;
pub mod channel;
mod error;
pub mod lorenz;
pub mod oracle;
pub mod ordering;
pub mod par;
pub mod regions;
pub mod sample;
pub mod verify;

pub use binmath::Tolerance;
pub use channel::{BisoChannel, InputBias};
pub use error::{Error, Result};
