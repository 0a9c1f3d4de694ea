//! Finite discretizations of multi-dimensional Wiener–Hopf operators
//! `χ_Λ P_{Ω,α} Op_α(a) P_{Ω,α} χ_Λ`, spectral traces `tr g(T_α)`, and the
//! two-term quasi-classical asymptotics (Weyl term plus the
//! `α^{d−1} log α` boundary term) they are checked against.

pub mod asymptotics;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod operators;
pub mod spectral;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64;
