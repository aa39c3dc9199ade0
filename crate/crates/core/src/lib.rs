//! Deterministic density-matrix simulator of teleportation-based state
//! transfer from a photon polarization qubit into the nitrogen nuclear spin
//! of an NV center.
//!
//! Layers, bottom-up: [`quantum`] (dense density-matrix primitives), [`nv`]
//! (NV conventions and the strained |A₂⟩ projector), [`protocol`] (the
//! transfer pipeline), [`tomography`] and [`experiments`].

// `!(x > 0.0)` is used on purpose so NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod nv;
mod parallel;
pub mod protocol;
pub mod quantum;
pub mod rng;
pub mod tomography;

pub use error::{Error, Result};
