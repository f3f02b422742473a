//! Simulator for an impedance-matched Lambda-system microwave photon detector:
//! a driven flux qubit dispersively coupled to a resonator, modelled by a
//! Lindblad master equation on a truncated qubit x Fock space.
//!
//! Modules, bottom up: [`space`] and [`hamiltonian`] build operators,
//! [`dynamics`] propagates and solves steady states, [`ladder`] gives the
//! dressed-state picture, [`response`] the CW reflection, [`protocols`] the
//! time-gated detection and reset, and [`config`], [`cli`], [`render`] the
//! front end.

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod ladder;
pub mod params;
pub mod protocols;
pub mod pulse;
pub mod render;
pub mod response;
pub mod space;
pub mod sweep;

pub use error::{Error, Result};
