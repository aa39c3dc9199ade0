//! Dense density-matrix primitives on small labeled tensor-product spaces.
//!
//! Everything here is immutable after construction; operations return new
//! values. Subsystem order is (photon, electron, nuclear) wherever those
//! factors appear together.

mod channel;
pub(crate) use density::reassemble_clipped;
mod density;
mod layout;
mod matrix;
mod state;

pub use channel::{apply_channel, dephasing_channel, embed_operator, QuantumChannel, CPTP_TOL};
pub use density::{
    partial_trace, project, state_fidelity, DensityOperator, Projection, HERALD_THRESHOLD,
    HERMITIAN_TOL, POSITIVITY_TOL, PROJECTOR_TOL, TRACE_TOL,
};
pub use layout::{HilbertLayout, Subsystem, ELECTRON, NUCLEAR, PHOTON};
pub use matrix::{kron, ComplexMatrix};
pub use state::PureState;

pub use num_complex::Complex64;
