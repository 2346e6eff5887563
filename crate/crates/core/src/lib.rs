//! GAN training viewed as alternating density-ratio estimation and
//! f-divergence minimization.
//!
//! - [`fdiv`]: f-divergences, their conjugates and the generator-objective family.
//! - [`density`]: analytic Gaussian densities and the quadrature oracle.
//! - [`fit`]: fitting a single Gaussian to a mixture under each divergence.
//! - [`neural`]: a small MLP with manual backprop and Adam.
//! - [`train`]: the alternating discriminator/generator training loop.

pub mod density;
pub mod error;
pub mod fdiv;
pub mod fit;
pub mod kde;
pub mod math;
pub mod nelder_mead;
pub mod neural;
pub mod train;

pub use error::{Error, Result};
pub use fdiv::{DivergenceKind, FDivergence};
