//! Semiclassical Dicke-model simulator for a Josephson-junction condensate
//! coupled to a single cavity mode.

pub mod analytic;
pub mod demodulation;
pub mod envelope;
pub mod error;
pub mod full_dynamics;
pub mod harness;
pub mod model;
pub mod observables;
pub mod ode;
pub mod series;
pub mod special_functions;

pub use error::{Error, Result};
pub use model::{DickeParams, SolutionCase};
