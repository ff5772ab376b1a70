//! Symbolic-numeric core for a generalized q-deformed boson algebra.
//!
//! The crate implements the Hopf algebra generated by `a`, `a†`, `N` with
//! `a a† + a† a = [αN + β]_q`, its dually conjugate function algebra in the
//! noncommuting coordinates `(x, z, y)`, the pairing between them capped by
//! the universal T matrix, and the coherent-state constructions built on the
//! Fock ladder: single-node states complete under an explicit radial measure,
//! and bipartite states that entangle whenever `q ≠ 1`.
//!
//! Everything here is pure computation over `Complex64`; the companion CLI
//! crate carries IO, file formats and orchestration.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bipartite;
pub mod coherent;
pub mod dualalg;
pub mod duality;
pub mod error;
pub mod exppoly;
pub mod fockrep;
pub mod matrix;
pub mod params;
pub mod quad;
pub mod special;
pub mod ualg;

pub use error::{Error, Result};
pub use exppoly::ExpPoly;
pub use matrix::CMatrix;
pub use params::{DeformationParams, ScalarSeriesBudget};

pub use num_complex::Complex64;
