//! Extrapolation of truncated small-variable expansions to the large-variable
//! limit with self-similar approximants.

pub mod bench;
pub mod corpus;
pub mod error;
pub mod exponent;
pub mod factor;
pub mod linalg;
pub mod method;
pub mod literal;
pub mod pade;
pub mod quad;
pub mod roots;
pub mod scalar;
pub mod series;
pub mod transform;

pub use error::{Error, Result};
