//! Executable constructions relating computable pattern recognition to data
//! compression.
//!
//! * [`bitcore`]: binary strings, gamma codes, permutation ranks.
//! * [`machine`]: a total boolean-formula program model with a canonical
//!   enumeration, program lengths and an exact toy Kolmogorov complexity.
//! * [`predictors`]: shortest-consistent-program ERM, the pointwise rule and
//!   longest-common-prefix nearest neighbour.
//! * [`reduction`]: the compressor built from any predictor, its bit-exact
//!   container format and decoder.
//! * [`analysis`]: error probabilities, `δ_n`, sample complexity, VC
//!   dimension and the incompressible-but-simple witness search.
//!
//! Probabilities are generic over [`Scalar`]; the aliases below fix the two
//! instantiations used in practice.

pub mod analysis;
pub mod bitcore;
mod error;
pub mod machine;
pub mod predictors;
pub mod reduction;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use bitcore::BitString;

/// Exact probabilities.
pub type Exact = num_rational::BigRational;
/// Fast approximate probabilities.
pub type Approx = f64;

pub type ExactDistribution = analysis::DistributionSpec<Exact>;
pub type ApproxDistribution = analysis::DistributionSpec<Approx>;
pub type ExactReport = analysis::SampleComplexityReport<Exact>;
pub type ApproxReport = analysis::SampleComplexityReport<Approx>;
