//! Blackbody radiation from oscillator entropy.
//!
//! The crate evaluates the Wien, Rayleigh-Jeans and Planck radiation laws,
//! counts oscillator microstates exactly, inverts the per-oscillator
//! entropy through `dS/dE = 1/T` to recover Planck's law, integrates and
//! extremizes spectra, samples microstates by Monte Carlo, and recovers
//! `h`, `k`, Avogadro's number and the elementary charge from spectral fits.

pub mod cli;
pub mod constants;
pub mod counting;
pub mod error;
pub mod fit;
pub mod integrals;
pub mod numerics;
pub mod special;
pub mod sim;
pub mod spectral;
pub mod table;
pub mod thermo;

pub use error::{Error, Result};
