//! Exact sign-regularity toolkit.
//!
//! Classifies rational matrices by sign regularity, factors linear maps on
//! `m x n` matrix space into canonical preserver forms, and ships the
//! generators and brute-force checks used to validate those decisions.
//!
//! All algorithms are generic over an exact [`Scalar`]; the aliases at the
//! crate root pick arbitrary-precision rationals.

pub mod error;
pub mod exactmat;
pub mod generators;
pub mod harness;
pub mod preserver;
pub mod scalar;
pub mod signclass;
pub mod transforms;
pub mod vdp;

pub use error::{Error, Result};
pub use exactmat::{Matrix, MinorIndex};
pub use preserver::{factor_preserver, find_witness, MatrixSpaceMap, Mode, PreserverVerdict};
pub use scalar::{Scalar, Sign};
pub use signclass::{classify, matches_pattern, SignClass, SignPattern, SignSymbol};
pub use transforms::{compose_to_operator, PrimitiveTransform, TransformChain};

/// Arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;
/// Matrix of arbitrary-precision rationals, the default for all tooling.
pub type RationalMatrix = Matrix<Rational>;
/// Matrix of `i64`-backed rationals; arithmetic panics on overflow.
pub type SmallRationalMatrix = Matrix<num_rational::Rational64>;
