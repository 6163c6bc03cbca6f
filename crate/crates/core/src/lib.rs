//! Audit toolkit for the Xi-function boundary-value construction.
//!
//! The crate evaluates Riemann's Xi function two independent ways, constructs
//! the auxiliary function `v(y; t, ε)` and audits the energy identity built
//! from it, re-derives the imaginary-part expansion symbolically, and runs the
//! sign search that decides whether a candidate zero `t1 + i t2` with `t2 != 0`
//! leads to a contradiction. Every numerical routine is generic over
//! [`numerics::Real`] so it can run in binary64 or multi-precision arithmetic.

pub mod error;
pub mod numerics;
pub mod special;
pub mod zeros;
pub mod construction;
pub mod signs;
pub mod identity;
pub mod symbolic;
pub mod report;
pub mod cli;

pub use error::{AuditError, Result};
