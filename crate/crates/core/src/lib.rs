//! Dense quantum-state simulation and unitary-convention spectral tools for
//! studying convolution and correlation of quantum amplitudes.
//!
//! - [`spectral`]: DFT/IDFT with `1/sqrt(N)` normalization, radix-2 FFT,
//!   cyclic convolution and correlation (direct sums and fast paths).
//! - [`qsim`]: states, linear and unitary maps, measurement sets, QFT.
//! - [`nogo`]: the componentwise-product target, residual metric, analytic
//!   contradiction check, candidate search and the QFT reduction.
//! - [`postselect`]: diagonal post-selection and its success statistics.
//! - [`io`]: JSON file formats for sequences and states.

pub mod error;
pub mod io;
pub mod nogo;
pub mod postselect;
pub mod qsim;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
