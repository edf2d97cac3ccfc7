//! Spectral stability screening for small-amplitude periodic traveling waves
//! of scalar Hamiltonian dispersive equations, driven entirely by the
//! dispersion relation.
//!
//! The zero-amplitude spectrum of the linearization at a bifurcating wave is
//! purely imaginary; instability can only set in when two eigenvalues of
//! opposite Krein signature collide away from the origin. For an odd
//! polynomial dispersion relation that collision condition collapses to a
//! single polynomial equation in one variable `gamma`, whose roots this
//! crate locates exactly and classifies.
//!
//! Modules:
//! - [`dispersion`]: odd polynomial dispersion relations, comoving frames,
//!   Floquet eigenvalues, Krein signatures.
//! - [`spoly`]: the recurrent polynomial family `s_m` that homogenizes
//!   differences of odd powers.
//! - [`reduction`]: the collision polynomial in `gamma`, root classification
//!   and Hamiltonian-Hopf candidate detection.
//! - [`rootfind`]: exact root isolation for rational polynomials (Sturm
//!   chains, bisection, rational root detection).
//! - [`models`]: concrete families (generalized KdV, higher-order KdV,
//!   balanced two-term equations) and their regime thresholds.
//! - [`oracle`]: independent brute-force checks used to validate the
//!   reduction (grid scans, exact identity verification, subharmonic
//!   spectrum identities).
//! - [`identities`]: exact verification of the inequality toolbox for `s_m`
//!   on rational grids.

pub mod dispersion;
pub mod error;
pub mod identities;
pub mod models;
pub mod oracle;
pub mod poly;
pub mod rat;
pub mod reduction;
pub mod rootfind;
pub mod spoly;

pub use error::{Error, Result};
pub use rat::Rat;
