//! Verification machinery: quadrature, finite differences, sampled-data
//! jets and exact rationals.

pub mod finite_diff;
pub mod quadrature;
pub mod rational;
pub mod sampled;

pub use finite_diff::{
    fd_derivatives, fd_tolerance, finite_difference_jet, fornberg_weights, FdContext, Stencil,
};
pub use quadrature::{gauss_legendre, integrate, QuadratureRule};
pub use rational::{binomial, binomial_identity_check, binomial_sum, BinomialReport, Rational};
pub use sampled::{sampled_function, sampled_to_jet, Endpoint, UniformSamples};
