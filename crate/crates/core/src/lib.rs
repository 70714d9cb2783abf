//! Smooth step functions, functions with flat ends, two-point Hermite
//! interpolation, blend-to-zero operators and smooth transitions, with the
//! numerical machinery to verify them.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! below cover the common case.
//!
//! ```
//! use smooth_transitions::step_functions::beta_step_lr;
//!
//! let b = beta_step_lr::<f64>(1, 1); // 3x² - 2x³
//! assert_eq!(b.value(0.5), 0.5);
//! let d = b.derivatives(0.0, 2).unwrap();
//! assert_eq!(d, vec![0.0, 0.0, 6.0]);
//! ```

pub mod error;
pub mod flat_ends;
pub mod function;
pub mod hermite;
pub mod jets;
pub mod numerics;
pub mod operators;
pub mod scalar;
pub mod step_functions;
pub mod transitions;

pub use error::{Error, Result};
pub use flat_ends::{
    affine_transform, change_of_interval, extend_step_to_line, lincomb, product,
    symmetry_check, to_staircase, validate_symmetric_step, AffineMap, SymmetryReport,
};
pub use function::{Interval, Order, SmoothFunction, StepOrders};
pub use hermite::{hermite_interpolant, hermite_oracle, EndpointJet, HermiteSpec};
pub use jets::{Elementary, Jet};
pub use operators::{apply, complement, linearity_check, verify_blend, BlendOperator, Direction};
pub use scalar::Scalar;
pub use transitions::{
    seam_report, transition_from_blends, transition_from_single, transition_hermite,
    PiecewiseTransition,
};

pub type Jet64 = Jet<f64>;
pub type Jet32 = Jet<f32>;
pub type Interval64 = Interval<f64>;
pub type SmoothFn64 = SmoothFunction<f64>;
pub type SmoothFn32 = SmoothFunction<f32>;
pub type EndpointJet64 = EndpointJet<f64>;
pub type HermiteSpec64 = HermiteSpec<f64>;
pub type BlendOperator64 = BlendOperator<f64>;
pub type Transition64 = PiecewiseTransition<f64>;
