//! Exact and arbitrary-precision engines for bilateral basic hypergeometric
//! series, theta functions and their asymptotics, plus an identity checker.

pub mod asym;
pub mod bilateral;
pub mod error;
pub mod exactq;
pub mod numq;
pub mod qfun;
pub mod verify;

pub use error::{Error, Result};
