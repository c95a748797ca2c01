//! Scalar special functions: Bernoulli numbers and polynomials,
//! polylogarithms of integer order `s <= 2`, and the Gamma function.

mod bernoulli;
mod gamma;
mod polylog;

pub use bernoulli::{
    bernoulli_f64, bernoulli_number, bernoulli_poly, BernoulliTable, Rational, BERNOULLI_MAX,
};
pub use gamma::{gamma_fn, ln_gamma, ln_gamma_signed};
pub use polylog::{
    dilog, dilog_exp_neg, li1, li1_exp_neg, log1m_exp_neg, polylog_int_exp_neg, polylog_nonpos,
    polylog_nonpos_exp_neg, polylog_shift, POLYLOG_NONPOS_MAX,
};

/// Builds the Bernoulli and Eulerian tables.
///
/// Every function builds them lazily on first use anyway. Calling this at
/// startup moves the one-time cost out of timed or concurrent regions.
pub fn init_tables() {
    let _ = bernoulli::table();
    polylog::init_tables();
}
