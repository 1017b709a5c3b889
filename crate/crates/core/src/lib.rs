//! Simulation of a state-specific Kochen–Specker contextuality test on two
//! qubits: parity-filter pipelines, the witness `C`, a noncontextual
//! hidden-variable oracle, and a two-photon linear-optics model of the
//! filters.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix `f64`.

pub mod channels;
pub mod error;
pub mod experiment;
pub mod matrix;
pub mod nchv;
pub mod optics;
pub mod pauli;
mod scalar;
pub mod state;

pub use channels::{FilterKind, FilterStage, Parity};
pub use error::{Error, Result};
pub use experiment::{Setting, StateDescriptor};
pub use matrix::{commutator, kron, ComplexMatrix};
pub use nchv::{NchvAssignment, NineObservableValues};
pub use pauli::{pauli, PauliString};
pub use scalar::Real;
pub use state::QuantumState;

pub use num_complex::Complex;

pub type Matrix = ComplexMatrix<f64>;
pub type State = QuantumState<f64>;
pub type Table = experiment::OutcomeTable<f64>;
pub type Config = experiment::ExperimentConfig<f64>;
pub type Circuit = optics::OpticalCircuit<f64>;
pub type Photons = optics::TwoPhotonState<f64>;

pub type Matrix32 = ComplexMatrix<f32>;
pub type State32 = QuantumState<f32>;
