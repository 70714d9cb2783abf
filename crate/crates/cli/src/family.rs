//! Named step-function families.

use serde::{Deserialize, Serialize};
use smooth_transitions::step_functions::{
    beta_step_lr, expo_rational_step, fabius, rational_step_lr, trig_step,
};
use smooth_transitions::{Result, SmoothFn64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Beta,
    Rational,
    Trig,
    Expo,
    Fabius,
}

/// A family plus its parameters; unused parameters are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSpec {
    pub family: Family,
    #[serde(default = "default_orders")]
    pub orders: (u32, u32),
    #[serde(default)]
    pub m: u32,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

fn default_orders() -> (u32, u32) {
    (1, 1)
}

fn default_tol() -> f64 {
    1e-10
}

fn default_grid() -> usize {
    1 << 12
}

impl StepSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            orders: default_orders(),
            m: 0,
            tol: default_tol(),
            grid: default_grid(),
        }
    }

    pub fn build(&self) -> Result<SmoothFn64> {
        let (l, r) = self.orders;
        Ok(match self.family {
            Family::Beta => beta_step_lr(l, r),
            Family::Rational => rational_step_lr(l, r),
            Family::Trig => trig_step(self.m)?,
            Family::Expo => expo_rational_step(),
            Family::Fabius => fabius(self.tol, self.grid)?,
        })
    }
}
