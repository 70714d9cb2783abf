//! The five smooth step families on `[0, 1]`.

pub mod beta;
pub mod expo_rational;
pub mod fabius;
pub mod rational_b;
pub mod trig;

pub use beta::{beta_jet, beta_step, beta_step_lr, beta_value};
pub use expo_rational::{expo_rational_jet, expo_rational_step, expo_rational_value};
pub use fabius::{fabius, Fabius};
pub use rational_b::{rational_jet, rational_step, rational_step_lr, rational_value};
pub use trig::{
    apply_ode_operator, ode_constant, ode_residual, olofsen_check, trig_coefficients, trig_step,
    OlofsenReport, TrigCoefficients, MAX_TRIG_M,
};
