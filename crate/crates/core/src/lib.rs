//! Numerical core of the hybrid quantum-classical ransomware classifier.
//!
//! Everything here is pure computation over `alloc` collections so the crate
//! builds without `std`: a dense statevector simulator ([`qsim`]), the ZZ
//! feature map and RealAmplitudes ansatz builders ([`circuits`]), the
//! variational classifier with its MSE cost and gradients ([`vqc`]), an
//! unconstrained COBYLA ([`optim`]), standardization and PCA ([`preprocess`]),
//! the logistic-regression baseline ([`baseline`]) and binary classification
//! metrics ([`metrics`]).
//!
//! File formats, CSV ingestion, threading and the CLI live in the `qransom`
//! crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod baseline;
pub mod circuits;
pub mod error;
pub mod exec;
pub mod linalg;
mod math;
pub mod metrics;
pub mod optim;
pub mod preprocess;
pub mod qsim;
pub mod rng;
pub mod vqc;

pub use error::{Error, Result};
