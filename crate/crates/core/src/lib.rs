//! Pseudospectral laboratory for Navier–Stokes type equations on the
//! periodic box, with a closed-form Burgers reference solution and
//! Gevrey-norm diagnostics.

pub mod diagnostics;
pub mod error;
pub mod lab;
pub mod mild;
pub mod oracle;
pub mod quad;
pub mod spectral;
pub mod stability;
pub mod sum;

pub use error::{LabError, Result};
