//! Simulator and protocol library for deterministic and randomized dynamical
//! decoupling of interacting spin-1/2 networks.
//!
//! The crate is organized around a small number of exact primitives:
//!
//! - [`pauli`]: projective Pauli-group arithmetic with integer phase tracking.
//!   Every control object (group elements, pulses, toggling frames) is a
//!   [`pauli::PauliString`].
//! - [`hamiltonian`]: spin-network Hamiltonians as Pauli term lists and dense
//!   Hermitian matrices, with coupling profiles, the logical-rotating frame,
//!   and an optional time-dependent exchange anisotropy.
//! - [`groups`]: built-in decoupling groups and control paths, plus first- and
//!   second-order averaging verifiers.
//! - [`protocols`]: expansion of a protocol descriptor (free evolution, PDD,
//!   SDD, CDD, NRD, EMD, RPD, SRPD, interpolated) into a concrete sequence of
//!   control frames, one per pulse interval.
//! - [`propagator`]: toggled-frame propagation with exact bang-bang pulses,
//!   dense Hermitian exponentials and the entanglement fidelity metric.
//! - [`experiment`]: seeded Monte Carlo driver producing fidelity traces,
//!   scaling-exponent fits and de-randomization searches.
//! - [`presets`]: the shipped benchmark scenarios.
//! - [`report`]: CSV emission for fidelity traces.

pub mod error;
pub mod experiment;
pub mod groups;
pub mod hamiltonian;
pub mod linalg;
pub mod pauli;
pub mod presets;
pub mod protocols;
pub mod propagator;
pub mod report;

pub use error::{DdError, Result};
pub use experiment::{FidelityTrace, RunConfig, TraceRecord};
pub use groups::{ControlPath, DecouplingGroup};
pub use hamiltonian::{AnisotropyRealization, AnisotropySpec, CouplingKind, HamiltonianSpec, SystemModel};
pub use linalg::CMat;
pub use pauli::{Letter, PauliString, Phase};
pub use protocols::{FrameSequence, ProtocolKind, ProtocolSpec};
pub use propagator::EvolutionConfig;
