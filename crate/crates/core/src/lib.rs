//! Casimir energy and force between real metallic mirrors, computed from
//! tabulated optical data.
//!
//! The pipeline runs bottom-up: [`optical_data`] parses a table and fits a
//! Drude extrapolation, [`dispersion`] maps it to the imaginary axis,
//! [`reflection`] gives the mirror amplitudes, and [`lifshitz`] integrates
//! them into energies, forces and reduction factors. [`oracles`] holds
//! independent reference computations used for certification.

pub mod cli;
pub mod constants;
pub mod dispersion;
pub mod lifshitz;
pub mod materials;
pub mod optical_data;
pub mod oracles;
pub mod quadrature;
pub mod reflection;
mod spline;

pub use constants::PhysicalConstants;
