//! Exact ℝ³ Burgers solution obtained from the Hopf–Cole transform of
//! `v = 1 - (t+1)^{-3/2} e^{-|x|²/(4(t+1))}`.

pub mod norms;
pub mod physical;
pub mod spectrum;
pub mod torus;

pub use norms::{exact_radius, gevrey_norm_checked, gevrey_norm_sq, oracle_norms, oracle_shells, OracleNormOptions, OracleNorms};
pub use physical::{
    burgers_residual, eval_jet, eval_physical, hopf_cole_residual, radial_profile, ExampleParams, OracleJet,
};
pub use spectrum::{
    initial_tail_constant, series_log_h, spectrum_series, GaussianSeriesSpectrum, RadialSpectrum, SeriesValue,
};
pub use torus::{periodized_samples, sample_on_torus, TorusRoute};
