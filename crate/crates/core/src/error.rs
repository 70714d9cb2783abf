use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("division by a jet with zero constant term")]
    DivisionByZero,

    #[error("invalid interval [{a}, {b}]: left end must be below right end")]
    InvalidInterval { a: f64, b: f64 },

    #[error("domain mismatch: [{a1}, {b1}] vs [{a2}, {b2}]")]
    DomainMismatch { a1: f64, b1: f64, a2: f64, b2: f64 },

    #[error("requested jet order {requested} exceeds the supported order {supported} of `{label}`")]
    InsufficientOrder {
        label: String,
        requested: usize,
        supported: usize,
    },

    #[error("infinite order is not allowed here: {0}")]
    InfiniteOrder(&'static str),

    #[error("endpoint mapping violated: {0}")]
    EndpointMapping(String),

    #[error("range escape: value {value} at x = {x} outside [{lo}, {hi}]")]
    RangeEscape { x: f64, value: f64, lo: f64, hi: f64 },

    #[error("not a step function: {0}")]
    NotAStep(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ill-conditioned confluent system: l + r = {0} exceeds the guard of 12")]
    IllConditioned(usize),

    #[error("singular linear system")]
    Singular,

    #[error("iteration did not converge after {iterations} sweeps (last change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("non-finite sample at x = {0}")]
    NonFinite(f64),

    #[error("stencil leaves the domain at x = {x} (step {step:e})")]
    StencilEscape { x: f64, step: f64 },

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("binomial identity failed for m = {m}, k = {k}")]
    IdentityFailure { m: u32, k: u32 },

    #[error("operator mismatch: {0}")]
    OperatorMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
