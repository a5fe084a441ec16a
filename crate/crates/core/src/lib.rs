//! Condition analysis of sparse super-resolution on the torus `𝕋^d`.
//!
//! The crate computes the Fisher information and Cramér–Rao bound of the
//! noisy trigonometric-moment model, the smallest singular value of the
//! partially confluent block Vandermonde matrix that governs it, and an
//! admissible Bessel-type minorant whose Poisson-summation argument turns a
//! separation condition into an explicit lower bound on that singular
//! value.
//!
//! Modules:
//! - [`specfun`]: Bessel functions, their first zeros, Gauss–Legendre rules.
//! - [`torus`]: node sets on `𝕋^d` and their separation.
//! - [`moments`]: index sets, Vandermonde blocks, Fisher information.
//! - [`minorant`]: the minorant `ψ_τ`, admissibility, bounds.
//! - [`sweep`]: phase-transition sweeps and bound campaigns.

pub mod error;
pub mod minorant;
pub mod moments;
pub mod specfun;
pub mod sweep;
pub mod torus;

pub use error::{Error, Result};
pub use minorant::{BoundReport, MinorantModel};
pub use moments::{BlockJacobian, FisherInfo, FrequencyIndexSet, WeightVector};
pub use num_complex::Complex64;
pub use torus::NodeSet;
