//! Numerical analysis of unbounded simply connected planar domains.
//!
//! Everything is computed in the image domain using conformal invariance: the
//! library decomposes circle level sets into crosscuts, estimates harmonic
//! measure by walk-on-spheres, solves mixed boundary-value problems for
//! extremal distance, brackets hyperbolic distance through the quasihyperbolic
//! metric, and turns the resulting per-radius profiles into Hardy-number
//! estimates and weighted-Bergman membership decisions. The Riemann map of the
//! domain is never constructed.

pub mod error;
pub mod geometry;
pub mod hardy;
pub mod hyperbolic;
pub mod modulus;
pub mod profile;
pub mod wos;

pub use error::Error;
pub use geometry::{
    circle_intersection, crosscut_decomposition, ArcSpan, BoundaryPiece, Crosscut,
    CrosscutDecomposition, Domain, DomainSpec, Point,
};
pub use hardy::{
    bergman_membership, comb_domain, hardy_number_estimate, question_integral_classifier,
    starlike_hardy_oracle, verify_counterexample, CounterexampleConfig, CounterexampleReport,
    EstimatorTag, HardyEstimate, IntegralVerdict, MembershipDecision, Verdict,
};
pub use hyperbolic::{disk_hyperbolic_distance, quasihyperbolic_distance, MetricBracket, QhTarget};
pub use modulus::tables::{
    build_canonical_tables, default_theta_grid, delta_star, lambda_star, CanonicalTables,
};
pub use modulus::{extremal_distance, reduced_extremal_distance_full, Chart, ModulusProblem};
pub use profile::{profile, validate_profile, LevelSetProfile, ProfileConfig, ProfileRow};
pub use wos::{
    component_measures, component_measures_with, harmonic_measure, ComponentMeasures,
    MeasureEstimate, WosConfig,
};

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
