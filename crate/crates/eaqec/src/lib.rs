//! Stabilizer and entanglement-assisted quantum error-correcting codes over
//! depolarizing channels.
//!
//! The crate is organized around a small number of building blocks:
//!
//! - [`symplectic`]: phaseless Pauli words as packed bit arrays, the GF(2)
//!   symplectic product, group enumeration, and reduction of check matrices
//!   to a paired standard form.
//! - [`codes`]: stabilizer and entanglement-assisted (EAQEC) code models,
//!   the standard-form transform that moves ancilla qubits to the receiver,
//!   combination codes, bound checks, and a catalog of built-in codes.
//! - [`decoder`]: complete syndrome tables (minimum-weight and
//!   minimum-probability), Pauli-frame decoding, and logical error
//!   distributions.
//! - [`fidelity`]: exact channel fidelity as a weight enumerator of the
//!   correctable set, polynomial expansion in exact rationals, lower bounds,
//!   Monte Carlo estimation, and the quaternary MacWilliams transform.
//! - [`distill`]: entanglement distillation modeled through channel
//!   fidelity, composition with EAQEC transmission, and scheme comparison.
//!
//! All types are immutable after construction and all operations are pure,
//! so everything can be shared freely across threads. The larger
//! enumerations and Monte Carlo sampling parallelize internally with rayon
//! and produce results that do not depend on the worker count.

pub mod codes;
pub mod decoder;
pub mod distill;
pub mod fidelity;
pub mod symplectic;

mod error;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
