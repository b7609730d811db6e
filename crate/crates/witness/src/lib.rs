//! Numerical witness sets for the special orthogonal group.
//!
//! SO(n) is cut out of the `n²` matrix entries by the orthogonality quadrics
//! together with `det = 1`. Intersecting with `C(n,2)` random affine
//! hyperplanes leaves finitely many points; their number is the degree. This
//! crate finds those points by homotopy continuation, populates them by
//! monodromy, moves them to new slices and counts real ones.

pub mod format;
pub mod homotopy;
pub mod poly;
pub mod rng;
pub mod sdp_oracle;
pub mod slice;
pub mod tracker;
pub mod witness;

pub type C64 = num_complex::Complex<f64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(&'static str),
    #[error("out of domain: {0}")]
    Domain(&'static str),
    #[error("invalid settings: {0}")]
    Settings(&'static str),
    #[error("malformed input: {0}")]
    Format(String),
}

pub use homotopy::{run_total_degree, GammaHomotopy, SliceHomotopy, TotalDegreeRun};
pub use poly::{orthogonality_system, PolySystem, Polynomial};
pub use slice::{random_slice, Slice};
pub use tracker::{track, Homotopy, PathResult, PathStatus, TrackerSettings};
pub use witness::{
    monodromy_populate, move_slice, real_census, real_count, split_components, total_degree_solve,
    CensusReport, MonodromyReport, MoveReport, SolveReport, WitnessSet,
};
pub use format::{census_to_csv, witness_from_json, witness_to_json};
pub use sdp_oracle::{sdp_critical_solve, SdpOracleReport};
