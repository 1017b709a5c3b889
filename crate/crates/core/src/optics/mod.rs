//! Two-photon linear-optics model of the filtration settings.
//!
//! Qubits are photon polarizations (`|0⟩ ≡ H`, `|1⟩ ≡ V`). The photons also
//! carry a two-dimensional internal label; its overlap `s` between the two
//! photons controls how much which-path information the parity check leaks.

mod circuit;
mod elements;
mod photons;

pub use circuit::{
    channel_table, coincidence_table, default_probes, effective_mixing, layout, mixing_mismatch,
    DetectorArm, MixingFit, OpticalCircuit, ProbeState, MIXING_FIT_LIMIT,
};
pub use elements::{jones, pbs_transform, waveplate, Element, PlateKind};
pub use photons::{
    source_state, Distinguishability, PhotonMode, Polarization, TwoPhotonState, INTERNAL_DIM,
    SOURCE_MODES,
};
