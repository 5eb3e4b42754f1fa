//! Breakdown points and definability bounds for directional functionals.
//!
//! The crate works with probability measures on the circle and on S²
//! ([`measure`]), the finite rotation groups acting on them ([`group`]), mean-direction
//! functionals with an explicit domain of definability ([`functional`]), and two bounded
//! metrics ([`metric`]). [`breakdown`] combines them: grid search for the contamination
//! that flips an estimate by π, upper bounds on how close an invariant (and therefore
//! undefinable) measure lies, and finite-sample replacement counts.

pub mod breakdown;
pub mod error;
pub mod functional;
pub mod geom;
pub mod group;
pub mod io;
pub mod measure;
pub mod metric;
pub mod quad;
pub mod sampling;
pub mod special;

pub use breakdown::{
    bias_breakdown, breakdown_report, definability_bounds, finite_sample_breakdown,
    flip_threshold_circular_mean, invariant_set_distance_involution, tv_fragility_demo,
    BiasBreakdown, BreakdownReport, DefinabilityBounds, FiniteSampleBreakdown, SearchParams,
};
pub use error::{Error, Result};
pub use functional::{
    check_equivariance, circular_mean, spherical_mean, Estimate, Functional, MeanDirection,
};
pub use geom::{angular_distance, antipode, Direction, GroupElement, Space};
pub use group::{is_invariant, residual_symmetrize, symmetrize, FiniteSubgroup};
pub use measure::{mix, Discrete, Measure, Mixture, Resultant, VonMises, TAU_DOMAIN};
pub use metric::{distance, kuiper, tv, MetricKind};
