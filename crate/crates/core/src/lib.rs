//! Certified canonical heights and arithmetic distance estimates for
//! endomorphisms of projective space over Q.
//!
//! Everything is exact or outward-rounded: projective points and morphisms
//! are integer data, heights are certified dyadic enclosures, and every
//! inequality the library reports is backed by an integer identity or an
//! interval computation.

pub mod canonical;
pub mod certificate;
pub mod conjugation;
pub mod distance;
pub mod dyadic;
pub mod error;
pub mod experiments;
pub mod interpolation;
pub mod interval;
pub mod matrix;
pub mod monomial;
pub mod morphism;
pub mod point;

pub use canonical::{
    canonical_height, canonical_height_detailed, preperiodicity_check, CanonicalHeight,
    Preperiodicity, TateOpts,
};
pub use certificate::{certify, find_certificate, offsets, OffsetCertificate, VerifiedMorphism};
pub use conjugation::{conjugate, dynamical_distance_search, enumerate_pgl, PglMap};
pub use distance::{
    pointwise_gap, pullback_defect_gap, sup_estimates, sup_estimates_over, DistanceEstimate,
    DistanceMode,
};
pub use dyadic::{parse_rational_decimal, Dyadic, Round};
pub use experiments::{
    alpha_scan, bounded_complexity_search, enumerate_coeff_tensors, phi_a_experiment,
    ExperimentReport,
};
pub use interpolation::{monomial_entries, prop9_slack, recover_map, MonomialMatrix};
pub use morphism::{clear_denominators, Morphism, MorphismStatus};
pub use point::{enumerate_points, ProjPoint};
pub use error::{Error, Result};
pub use interval::{
    interval_combine, ln2_enclosure, ln_dyadic, ln_interval, log_enclosure, CombineMode,
    HeightInterval,
};
