//! Exact Euler-Maclaurin summation over simple lattice polytopes.

pub mod bernoulli1d;
pub mod emcore;
pub mod error;
pub mod exactnum;
pub mod limits;
pub mod poly;
pub mod polytope;
pub mod quadrature;
pub mod remainder;

pub use bernoulli1d::{em_interval, em_interval_poly, m_poly, twisted_q, OperatorPoly, TwistedQ};
pub use emcore::{
    weighted_sum_breakdown, weighted_sum_polynomial, weighted_sum_regular, Breakdown, GroupTable,
};
pub use error::{Error, Result};
pub use exactnum::{CyclotomicNumber, Rational, RationalAngle};
pub use limits::Limits;
pub use poly::MPoly;
pub use polytope::{
    choose_polarizing_vector, polarize, weighted_sum_bruteforce, HPolytope, PolarizedCone,
    PolarizingVector, PolytopeJson, SimplePolytope,
};
pub use remainder::{verify_main_theorem, Estimate, Gaussian, Report, SmoothFunction};
