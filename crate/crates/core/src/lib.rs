//! Evaluation and complete asymptotic expansions of Eulerian q-series as
//! `q = e^{-t} -> 1-`.
//!
//! A series is either a [`ProductSpec`], written with finite Pochhammer
//! symbols, or an already normalized [`SeriesSpec`]. Three independent
//! numbers can be computed for it:
//!
//! * the value by direct summation ([`series_sum`]),
//! * the matching integral over a continuous index ([`quad::integral`]),
//! * the asymptotic prediction from the stationary points of the phase
//!   function ([`expansion::asym_total`]).

// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expansion;
pub mod logvalue;
pub mod phase;
pub mod presets;
pub mod qseries;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use expansion::{asym_form, asym_total, AsymptoticResult, Branch};
pub use logvalue::LogValue;
pub use phase::{build_phase, check_hypothesis, stationary_points, PhaseFamily, StationaryPoint};
pub use qseries::{
    f_deriv, f_eval, normalize, series_sum, EulerianForm, PochTerm, ProductSpec, QuadTerm,
    SeriesSpec,
};
