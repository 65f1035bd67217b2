//! Integral bases of `C(x)[D]/<L>` for linear differential operators `L`
//! with polynomial coefficients.

pub mod closure;
pub mod error;
pub mod exactmath;
pub mod hermite;
pub mod localsolver;
pub mod logseries;
pub mod oreops;

pub use error::{Error, Result, SplitEvent};
