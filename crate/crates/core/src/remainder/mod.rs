//! Numerical verification of the formula with remainder for smooth,
//! compactly supported functions.

mod bounds;
mod cones;
mod functions;
mod spec;

pub use bounds::{
    derivative_l1_norm, derivative_norm, fit_remainder_bound, gaussian_family, BoundFit,
};
pub use cones::{
    cone_box, cone_characters, cone_operator_part, cone_remainder, cone_totals, cone_weighted_sum,
    polytope_remainder, polytope_totals, verify_main_theorem, ConeTotals, Estimate, PolytopeTotals,
    Report, MAX_HARNESS_DIM, MAX_HARNESS_K,
};

pub use functions::{
    gaussian_1d, hermite_he, DirectionalExpansion, Gaussian, PolyBump, SmoothFunction,
    TrigGaussian, Zero, GAUSSIAN_RADIUS,
};
pub use spec::FunctionSpec;
