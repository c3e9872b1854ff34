//! Random graph spectra and graph energy.
//!
//! Samples Erdős–Rényi and random multipartite graphs, computes exact
//! adjacency spectra with a dense symmetric eigensolver, and compares graph
//! energy and empirical spectral distributions against their limiting laws.

pub mod check;
pub mod cli;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod graphs;
pub mod laws;
pub mod matrix;
pub mod spectra;

pub use error::{Error, Result};
pub use graphs::{PartSizes, PartitionSpec, Seed};
pub use matrix::SymMatrix;
pub use spectra::Spectrum;
