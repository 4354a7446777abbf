//! Synthesis and pointwise-regularity analysis of Gaussian random wavelet series.
//!
//! The library builds sample paths of series of the form
//! `f_h = sum_{j,k} xi_{j,k} 2^{-h j} psi(2^j t - k)` (and multifractional and
//! Faber-Schauder variants), locates slow points with an iterative sieve on the
//! coefficient field, and measures pointwise regularity through
//! modulus-of-continuity increment ratios and wavelet leaders.
//!
//! Everything is deterministic: all randomness flows from explicit 64-bit seeds
//! through a counter-based lattice, so experiments are reproducible bit for bit.

pub mod analysis;
pub mod checks;
pub mod coeffs;
pub mod config;
pub mod dyadic;
pub mod error;
pub mod io;
pub mod randomness;
pub mod sieve;
pub mod synthesis;
pub mod wavelets;

pub use coeffs::CoeffPyramid;
pub use error::Error;
pub use randomness::{CoefficientLattice, Law};
pub use synthesis::SampledPath;
pub use wavelets::{Family, WaveletSpec};
