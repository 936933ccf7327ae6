//! Certified tests of multiple positivity for power-series coefficient
//! sequences.
//!
//! The crate evaluates Toeplitz minors of coefficient windows with ball
//! arithmetic, computes the Maclaurin coefficients of
//! `xi1(z) = xi(sqrt(z) + 1/2)` to high precision, checks Turán-type
//! inequality chains, turns zero-free sectors into Pólya frequency orders,
//! and verifies the contour-integral representation of Toeplitz minors
//! numerically. Each capability has a runnable program under `examples/`.

pub mod cli;
pub mod error;
pub mod integral;
pub mod multipliers;
pub mod numerics;
pub mod sector;
pub mod toeplitz;
pub mod turan;
pub mod xicoeffs;

pub use error::{Error, Result};
pub use numerics::{Ball, ComplexBall, PrecisionPolicy, Real, Sign, SignTag};
