//! Exact n-point correlators of KdV tau-functions.
//!
//! Two independent routes are implemented: the matrix-resolvent trace sum and
//! the wave-function kernel sum. Both run over exact rationals or polynomial
//! rings and are specialised to the Witten–Kontsevich, generalized
//! Brézin–Gross–Witten and Lamé solutions.

pub mod airy_model;
pub mod bessel_model;
pub mod error;
pub mod lame_model;
pub mod exact_series;
pub mod matrix_resolvent;
pub mod tau_structure;
pub mod wave_kernel;

pub use error::{Error, Result};
