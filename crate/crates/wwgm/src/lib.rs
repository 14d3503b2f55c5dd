//! Phase-space quantum mechanics in the coherent-state WWGM formalism.
//!
//! Units: `hbar = 2`, so `[X, P] = 2i` and coherent-state labels are half the
//! expectation values. Phase-space variables are ordered `z = (p, x)`.

pub mod classical_limit;
pub mod dynamics;
pub mod gaussian_core;
pub mod star_numeric;
pub mod tomita;
pub mod weyl_algebra;

pub type C64 = num_complex::Complex<f64>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
