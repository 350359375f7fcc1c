//! Finite-alphabet lossy source coding with the likelihood encoder:
//! probability arithmetic, rate-distortion solvers, random codebooks,
//! Monte Carlo coding pipelines and exact soft-covering checks.
//!
//! Everything numeric is generic over [`Real`]; the aliases below fix `f64`.

pub mod coding;
pub mod error;
pub mod prob;
pub mod rd;
pub mod rng;
pub mod scalar;
pub mod schemes;
pub mod softcover;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Pmf64 = prob::Pmf<f64>;
pub type JointPmf64 = prob::JointPmf<f64>;
pub type Channel64 = prob::Channel<f64>;
pub type DistortionMeasure64 = prob::DistortionMeasure<f64>;
pub type Codebook64 = coding::Codebook<f64>;
pub type RateDistortionPoint64 = rd::RateDistortionPoint<f64>;
pub type WzConfig64 = schemes::WzConfig<f64>;
pub type BtConfig64 = schemes::BtConfig<f64>;
pub type P2pConfig64 = schemes::P2pConfig<f64>;

pub type Pmf32 = prob::Pmf<f32>;
pub type JointPmf32 = prob::JointPmf<f32>;
pub type Channel32 = prob::Channel<f32>;
pub type DistortionMeasure32 = prob::DistortionMeasure<f32>;
