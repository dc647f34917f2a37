//! Emulation of quantum gate operations with coherent optical matrix-vector
//! multiplication on a lattice of Gaussian modes.
//!
//! A state vector is encoded into the columns of an N x N lattice of
//! localized Gaussian beams, a gate matrix is imprinted cell by cell on a
//! second modulation plane, and a cylindrical-lens Fourier transform along x
//! contracts the columns so that the zero-spatial-frequency profile carries
//! the product `M u` in its rows. On top of that core multiplier the crate
//! provides the Hadamard gate and basis, phase oracles, the Deutsch-Jozsa
//! algorithm, crosstalk/fidelity benches and a diffraction-aware physical
//! mode that reproduces the fidelity loss of shrinking modes.
//!
//! Modules:
//! - [`lattice`]: grid geometry, fields and Gaussian cell modes
//! - [`gates`]: state vectors, gate matrices, oracles, ground-truth matvec
//! - [`optics`]: the encode / modulate / transform / readout pipeline
//! - [`experiments`]: crosstalk benches, Deutsch-Jozsa runs, scaling study
//! - [`io`]: CSV/JSON/PGM/PNG import and export
//! - [`config`]: layered run configuration
//! - [`cli`]: the command-line front end used by the `beamgate` binary
//!
//! The `examples/` directory holds one runnable program per capability; see
//! the README for a tour.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
mod fft;
pub mod gates;
pub mod io;
pub mod lattice;
pub mod optics;

pub use error::{Error, Result};
pub use gates::{BooleanFunction, FunctionClass, GateMatrix, StateVector};
pub use lattice::{Field, LatticeLayout};
pub use optics::{Mode, PipelineConfig, Plane, ReadoutResult};
