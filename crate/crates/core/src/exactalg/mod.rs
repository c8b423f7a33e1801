//! Exact cyclotomic arithmetic, a floating-complex fallback and dense matrices.

pub mod cyclo;
pub mod json;
pub mod linalg;
pub mod mat;
pub mod recognize;
pub mod scalar;
pub mod spectral;

pub use cyclo::{Cyclo, Rational};
pub use mat::Mat;
pub use scalar::Scalar;
pub use spectral::{simultaneous_eigenprojections, Eigenspaces};

use crate::error::Result;

/// Entrywise product A∘B.
pub fn schur_product(a: &Mat, b: &Mat) -> Result<Mat> {
    a.schur_product(b)
}

/// Entrywise inverse; errors with the position of the first zero entry.
pub fn schur_inverse(a: &Mat) -> Result<Mat> {
    a.schur_inverse()
}
