//! Numerical geometry of real hypersurfaces in the complex projective and
//! complex hyperbolic spaces: shape operators, Hopf diagnostics, tubes,
//! focal sets and projective duality.

pub mod canned;
pub mod duality;
pub mod error;
pub mod hypersurface;
mod linalg;
pub mod polynomial;
pub mod space_forms;
pub mod tubes;

pub use error::{GeomError, Result};
