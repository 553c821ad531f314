//! Simulation of classical and quantum gambling against fair sources.
//!
//! The crate is organized bottom-up:
//!
//! - [`sequences`]: finite bit strings, lazily generated infinite bit sequences,
//!   cylinder-set probabilities and frequency statistics.
//! - [`strategy`]: non-anticipating gambling strategies over bit histories and
//!   the subsequence extraction they induce; [`tables`] holds the published
//!   decision tables of the built-in strategies.
//! - [`classical_casino`]: the coin-toss casino, payoff ledgers and the
//!   Monte Carlo / exhaustive harnesses for the martingale payoff law.
//! - [`qmatrix`]: a small dense complex matrix kernel (Jacobi eigensolver and
//!   SVD, Schatten norms, tensor products, partial trace) and the streaming
//!   tensor-product game history [`qmatrix::QuantumPrefix`].
//! - [`qmetrics`]: density matrices, pure states, trace distance, fidelity,
//!   angle distance, Bloch coordinates, measurements and Schmidt data.
//! - [`sampling`]: the pinned seeded generator and every random input sampler.
//! - [`qcasino`]: engines for the three kinds of quantum casino.

pub mod classical_casino;
pub mod error;
pub mod qcasino;
pub mod qmatrix;
pub mod qmetrics;
pub mod sampling;
pub mod sequences;
pub mod strategy;
pub mod tables;

pub use error::{Error, Result};
pub use num_complex::Complex64;
