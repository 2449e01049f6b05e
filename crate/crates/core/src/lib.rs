//! Exact spectral, Frobenius and monodromy data of `f = w_0 u_0 + ... + w_n u_n`
//! on the torus `u_0^{w_0} ... u_n^{w_n} = 1`.
//!
//! Everything is computed with exact rationals. Each module pairs its
//! construction with the identities it is expected to satisfy, and
//! [`verify`] runs those identities over single systems or whole corpora.

pub mod cli;
pub mod filtrations;
pub mod frobenius;
pub mod gauss_manin;
pub mod matrix;
pub mod rational;
pub mod reflexive;
pub mod report;
pub mod spectrum;
pub mod verify;
pub mod weights;

pub use rational::Rational;
pub use weights::{WeightError, WeightSystem};
