//! Simon's problem re-derived as a geometric quantum machine-learning
//! pipeline.
//!
//! The crate is organised bottom-up:
//!
//! - [`boolfn`]: Boolean-function oracles, GF(2) algebra, datasets.
//! - [`qsim`]: exact statevector simulation of the 2N-qubit Simon register.
//! - [`simon`]: sampling, hidden-string recovery and the classical baseline.
//! - [`embed`]: the twirled (group-averaged) embedding of a function as a
//!   diagonal density, its circuit realization and the symmetry actions.
//! - [`observe`]: the invariant all-Z observable and shot-based features.
//! - [`learn`]: standardization, kernel PCA, k-means, one-class SVM, F1.
//! - [`graphs`]: functional-graph topology (degrees, Betti numbers, cycles).
//! - [`experiment`]: the drivers behind the command-line subcommands.
//!
//! Interchangeable algorithm variants (function generators, embedders,
//! kernels, query strategies) are trait objects held in name-keyed
//! [`registry::Registry`] tables so that configs can select them at runtime.

pub mod boolfn;
pub mod embed;
pub mod error;
pub mod experiment;
pub mod graphs;
pub mod learn;
pub mod observe;
pub mod qsim;
pub mod registry;
pub mod simon;

pub use error::{Error, Result};
