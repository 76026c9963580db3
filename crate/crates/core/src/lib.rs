//! Open-system time evolution of maximally entangled bipartite states and
//! the distillability diagnostics evaluated along it.
//!
//! Module map:
//! - [`linalg`]: dense complex matrices, tensor products, partial trace and
//!   transpose, Hermitian eigenvalues.
//! - [`states`]: initial states and spin operators.
//! - [`channels`]: Kraus channels, dephasing propagators, phase integrals.
//! - [`dynamics`]: Lindblad models and a fixed-step RK4 integrator.
//! - [`distill`]: fidelity, reduction and partial-transpose criteria.
//!
//! Basis convention: qubit `|0⟩` is the `Sz = +1/2` (excited) level and
//! spin bases are ordered by descending `m`. Composite indices are
//! `i * dim_b + j`, subsystem A being the slow index.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod distill;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenResult, Subsystem};
pub use num_complex::Complex64;
pub use states::{DensityMatrix, PureState, SpinOperators};
