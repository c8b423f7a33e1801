pub mod catalog;
pub mod error;
pub mod exactalg;
pub mod ifs;
pub mod knotstat;
pub mod qleonard;
pub mod report;
pub mod scheme;
pub mod settings;
pub mod spinmodel;
pub mod tlbraid;

pub use error::{Error, Result};
pub use exactalg::{Cyclo, Mat, Rational, Scalar};
pub use settings::{Mode, Settings};
