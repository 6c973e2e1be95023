//! Symmetric products `S_n(D) = π_n(Dⁿ)` of planar domains.
//!
//! A point of `S_n(D)` is stored in elementary-symmetric coordinates
//! `(σ_1, …, σ_n)`; its fiber is the multiset of roots of the monic
//! polynomial `λⁿ − σ_1 λⁿ⁻¹ + … + (−1)ⁿ σ_n`.
//!
//! Modules, bottom-up:
//!
//! * [`sympoly`]: Vieta coordinates, root finding and root matching.
//! * [`domains`]: planar domains and the holomorphic gadgets built on them.
//! * [`symgeo`]: membership, separating hyperplanes, arrangements and the
//!   hyperbolicity classifier.
//! * [`invmetrics`]: certified bounds for invariant pseudodistances.
//! * [`peaks`]: composed peak functions on `S_2(D)`.

pub mod domains;
mod error;
pub mod invmetrics;
mod linalg;
pub mod peaks;
pub mod rng;
pub mod symgeo;
pub mod sympoly;
pub mod tol;

pub use error::{Error, Result};
pub use num_complex::Complex64;
