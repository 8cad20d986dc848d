//! Diagnostic quantities along solutions and finite-range checks of the
//! growth, radius and energy statements they should satisfy.

pub mod bounds;
pub mod diffineq;
pub mod energy;
pub mod fit;
pub mod radius;
pub mod series;

pub use bounds::{
    check_growth_bound, verdict_from_ratios, BoundCheckReport, BoundId, BoundParams, FieldProvider, GrowthProvider,
    OracleProvider, Verdict,
};
pub use diffineq::{differential_ratio, integrated_ratio, monitor_differential_inequality};
pub use energy::{cumulative_integral, energy_identity_check, EnergyLog, EnergyMonitor};
pub use fit::{fit_decay_slope, least_squares, LinearFit};
pub use radius::{
    estimate_radius, estimate_radius_oracle, estimate_radius_radial, radial_window, shell_maxima, RadiusEstimate,
};
pub use series::{norm_series, norm_series_fields, norm_series_oracle, NormRecord, NormSeries, Provenance, Quantity};
