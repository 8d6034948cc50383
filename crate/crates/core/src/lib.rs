//! Uncoded transmission of a bivariate Gaussian source over a one-to-two
//! Gaussian broadcast channel.
//!
//! Receiver `i` observes `Y_i = X + Z_i` with `Z_i ~ N(0, N_i)`, `N1 < N2`,
//! and wants `S_i` under squared error. The uncoded scheme sends a
//! power-normalized mix `alpha S1 + beta S2` and each receiver applies a
//! scalar MMSE gain. This crate evaluates the resulting distortions, the
//! SNR threshold under which the scheme is optimal, the converse bound that
//! certifies optimality, rate-distortion quantities, and a seeded
//! Monte-Carlo simulator of the scheme.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod closed_forms;
pub mod error;
pub mod montecarlo;
pub mod numeric;
pub mod params;
pub mod rate_distortion;
pub mod region;

pub use closed_forms::{BoundWitness, ConverseContext, Receiver, Threshold};
pub use error::{Error, Result};
pub use montecarlo::{MmseCoefficients, SimulationConfig, SimulationReport};
pub use params::{
    negate_rho_transform, validate_problem, ChannelParams, DistortionPair, Problem, SourceParams,
    UncodedCoeffs, VarianceTuple,
};
pub use rate_distortion::Rate;
pub use region::{BoundaryPoint, MatchReport, OracleReport};
