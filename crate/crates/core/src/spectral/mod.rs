//! Fourier representation of vector fields on a periodic box and the
//! diagonal operators acting on them.

mod fft;
pub mod field;
pub mod grid;
pub mod leray;
pub mod multiplier;
pub mod nonlinear;
pub mod norms;
pub mod random;

pub use field::SpectralField;
pub use grid::{build_grid, signed_freq, WavenumberGrid};
pub use leray::{leray_project, leray_project_with, project_mode, ZeroModeRule};
pub use multiplier::{apply_bounded, apply_multiplier, check_guard, MultiplierSpec};
pub use nonlinear::{nonlinear_term, ModelConfig, Projection};
pub use norms::{besov_shell_norm, l2, norm_l2, norm_sq_unchecked, physical_l2};
pub use random::RandomFieldSpec;
