//! Exact and Monte Carlo experiments on generalized von Mangoldt sums over
//! F_q[t]: finite fields and polynomials, Galois representations given by
//! their local traces, Dirichlet characters mod t^m, twisted L-functions,
//! Haar-random unitary matrices, and the short-interval variance.

pub mod acceptance;
pub mod arith;
pub mod chars;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod gf;
pub mod lfunc;
pub mod polyring;
pub mod reps;
pub mod rmt;

pub use error::{Error, Result};
pub use exec::Exec;
