//! Modular reductions of the star Coxeter group [5,3;k] over primes of the
//! golden-ratio ring, with classification, C-group verification and
//! coset-based polytope counts.

pub mod cgroup;
pub mod classify;
pub mod error;
pub mod field;
pub mod golden;
pub mod group;
pub mod matrix;
pub mod polytope;
pub mod star;
pub mod survey;

pub use error::Error;
pub use field::{build_field, FieldCtx, FieldElem};
pub use golden::{classify_prime, golden_legendre, GoldenInt, GoldenPrime, PrimeClass};
pub use group::{bsgs, enumerate, GroupHandle, DEFAULT_CAP};
pub use matrix::Mat4;
pub use star::{StarParams, K};
