use std::fmt;

use super::ReconstructionMap;
use crate::error::{Error, Result};
use crate::prob::Channel;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    /// Iterates settled below the convergence tolerance.
    Converged,
    /// Stopped at the iteration cap.
    IterationLimit,
    /// Target at or above the zero-rate distortion; no optimization needed.
    ZeroRate,
    /// Evaluated in closed form from the supplied channels.
    Exact,
    /// Convex combination of two points.
    TimeShared,
}

impl SolverStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverStatus::Converged => "converged",
            SolverStatus::IterationLimit => "iteration-limit",
            SolverStatus::ZeroRate => "zero-rate",
            SolverStatus::Exact => "exact",
            SolverStatus::TimeShared => "time-shared",
        }
    }
}

impl fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rate(s) and distortion(s) of an operating point with the objects that achieve it.
///
/// Point-to-point and Wyner-Ziv problems carry one rate and one distortion;
/// Berger-Tung corners carry `(R1, R2)` and `(D1, D2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateDistortionPoint<T = f64> {
    pub rates: Vec<T>,
    pub distortions: Vec<T>,
    pub achieving_channels: Vec<Channel<T>>,
    pub reconstructions: Vec<ReconstructionMap>,
    pub status: SolverStatus,
    pub iterations: usize,
    /// How the point was obtained when that matters for interpreting it.
    pub note: Option<String>,
}

impl<T: Real> RateDistortionPoint<T> {
    pub fn rate(&self) -> T {
        self.rates[0]
    }

    pub fn distortion(&self) -> T {
        self.distortions[0]
    }

    pub fn sum_rate(&self) -> T {
        self.rates.iter().copied().sum()
    }
}

/// `lambda * p1 + (1 - lambda) * p2`, componentwise on rates and distortions.
pub fn time_share<T: Real>(
    p1: &RateDistortionPoint<T>,
    p2: &RateDistortionPoint<T>,
    lambda: T,
) -> Result<RateDistortionPoint<T>> {
    if !(lambda >= T::zero() && lambda <= T::one()) {
        return Err(Error::InvalidParameter(format!("time-sharing weight {lambda} outside [0, 1]")));
    }
    if p1.rates.len() != p2.rates.len() || p1.distortions.len() != p2.distortions.len() {
        return Err(Error::ShapeMismatch("time-sharing points of different problem shapes".into()));
    }
    let mix =
        |a: &[T], b: &[T]| -> Vec<T> { a.iter().zip(b).map(|(&x, &y)| lambda * x + (T::one() - lambda) * y).collect() };
    Ok(RateDistortionPoint {
        rates: mix(&p1.rates, &p2.rates),
        distortions: mix(&p1.distortions, &p2.distortions),
        achieving_channels: Vec::new(),
        reconstructions: Vec::new(),
        status: SolverStatus::TimeShared,
        iterations: 0,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(r: [f64; 2], d: [f64; 2]) -> RateDistortionPoint {
        RateDistortionPoint {
            rates: r.to_vec(),
            distortions: d.to_vec(),
            achieving_channels: vec![],
            reconstructions: vec![],
            status: SolverStatus::Exact,
            iterations: 0,
            note: None,
        }
    }

    #[test]
    fn endpoints_and_midpoint() {
        let a = point([0.5, 0.2], [0.1, 0.3]);
        let b = point([0.1, 0.6], [0.2, 0.1]);
        assert_eq!(time_share(&a, &b, 1.0).unwrap().rates, a.rates);
        assert_eq!(time_share(&a, &b, 0.0).unwrap().distortions, b.distortions);
        let mid = time_share(&a, &b, 0.5).unwrap();
        assert!((mid.rates[0] - 0.3).abs() < 1e-15);
        assert!((mid.distortions[1] - 0.2).abs() < 1e-15);
        assert!(time_share(&a, &b, 1.5).is_err());
        assert!(time_share(&a, &b, f64::NAN).is_err());
        let single = RateDistortionPoint { rates: vec![0.1], distortions: vec![0.1], ..a.clone() };
        assert!(time_share(&a, &single, 0.5).is_err());
    }
}
