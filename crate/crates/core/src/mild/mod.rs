//! Solutions of the mild (Duhamel) formulation: time marching, Picard
//! iteration over stored trajectories, and weighted trajectory norms.

pub mod duhamel;
pub mod etd;
pub mod phi;
pub mod picard;
pub mod trajectory;
pub mod weighted;

pub use duhamel::{duhamel_all, duhamel_bilinear};
pub use etd::{march, max_advection_speed, DiagnosticsHook, MarchOptions, NoHook};
pub use picard::{
    beta_integral, contraction_report, kernel_factor, picard_solve, ContractionReport, PicardOptions,
    PicardOutcome, PicardState,
};
pub use trajectory::{graded_nodes, heat_propagate, TrajectoryGrid};
pub use weighted::{
    weighted_norm, Homogeneity, LambdaProfile, WeightedNormSpec, WeightedNormValue, ZetaProfile,
};
