//! Berger-Tung corner points for a fixed pair of test channels.

use super::point::{RateDistortionPoint, SolverStatus};
use super::ReconstructionMap;
use crate::error::{Error, Result};
use crate::prob::{
    conditional_mutual_information, expected_distortion, mutual_information, Channel, DistortionMeasure, JointPmf,
};
use crate::scalar::Real;

/// Which encoder is decoded first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    /// `(I(X1;U1), I(X2;U2|U1))`: encoder 1 first.
    C1,
    /// `(I(X1;U1|U2), I(X2;U2))`: encoder 2 first.
    C2,
}

impl Corner {
    pub fn as_str(self) -> &'static str {
        match self {
            Corner::C1 => "C1",
            Corner::C2 => "C2",
        }
    }
}

/// Joint over `(U1, X1, X2, U2)` built as `P(x1, x2) P(u1|x1) P(u2|x2)`.
pub fn long_chain_joint<T: Real>(joint_x1x2: &JointPmf<T>, ch1: &Channel<T>, ch2: &Channel<T>) -> Result<JointPmf<T>> {
    joint_x1x2.check_arity(2)?;
    joint_x1x2.extend(ch1, 0, "u1")?.extend(ch2, 1, "u2")?.keep_axes(&[2, 0, 1, 3])?.relabel(&["u1", "x1", "x2", "u2"])
}

/// Joint of `(X_k, phi(U1, U2))` from the four-axis chain joint.
fn source_reconstruction_joint<T: Real>(
    chain: &JointPmf<T>,
    source_axis: usize,
    phi: &ReconstructionMap,
    outputs: usize,
) -> JointPmf<T> {
    let s = chain.shape();
    let nx = s[source_axis];
    let mut xy = vec![T::zero(); nx * outputs];
    for u1 in 0..s[0] {
        for x1 in 0..s[1] {
            for x2 in 0..s[2] {
                for u2 in 0..s[3] {
                    let x = if source_axis == 1 { x1 } else { x2 };
                    let y = phi.apply(u1, u2);
                    xy[x * outputs + y] = xy[x * outputs + y] + chain.get(&[u1, x1, x2, u2]);
                }
            }
        }
    }
    JointPmf::from_parts_unchecked(vec![nx, outputs], vec!["x".into(), "y".into()], xy)
}

/// Greedy `phi_k(u1, u2) = argmin_y sum_{x_k} P(u1, x_k, u2) d_k(x_k, y)`.
pub fn optimal_bt_reconstruction<T: Real>(
    joint_x1x2: &JointPmf<T>,
    ch1: &Channel<T>,
    ch2: &Channel<T>,
    d: &DistortionMeasure<T>,
    source: usize,
) -> Result<ReconstructionMap> {
    if source != 1 && source != 2 {
        return Err(Error::InvalidParameter(format!("source index {source} must be 1 or 2")));
    }
    let chain = long_chain_joint(joint_x1x2, ch1, ch2)?;
    let axis = source;
    let u_x_u = chain.keep_axes(&[0, axis, 3])?;
    let s = u_x_u.shape().to_vec();
    if d.sources() != s[1] {
        return Err(Error::ShapeMismatch("distortion and source alphabet disagree".into()));
    }
    ReconstructionMap::from_fn(s[0], s[2], d.reconstructions(), |u1, u2| {
        let mut best = (0, T::infinity());
        for y in 0..d.reconstructions() {
            let cost: T = (0..s[1]).map(|x| u_x_u.get(&[u1, x, u2]) * d.d(x, y)).sum();
            if cost < best.1 {
                best = (y, cost);
            }
        }
        best.0
    })
}

/// Corner rates and distortions of the Berger-Tung inner bound for the given test channels and maps.
#[allow(clippy::too_many_arguments)]
pub fn berger_tung_corner<T: Real>(
    joint_x1x2: &JointPmf<T>,
    ch1: &Channel<T>,
    ch2: &Channel<T>,
    phi1: &ReconstructionMap,
    phi2: &ReconstructionMap,
    d1: &DistortionMeasure<T>,
    d2: &DistortionMeasure<T>,
    corner: Corner,
) -> Result<RateDistortionPoint<T>> {
    let chain = long_chain_joint(joint_x1x2, ch1, ch2)?;
    let s = chain.shape().to_vec();
    for (k, (phi, d)) in [(phi1, d1), (phi2, d2)].into_iter().enumerate() {
        if phi.first_size() != s[0] || phi.second_size() != s[3] {
            return Err(Error::ShapeMismatch(format!(
                "phi{} is {}x{}, auxiliary alphabets are {}x{}",
                k + 1,
                phi.first_size(),
                phi.second_size(),
                s[0],
                s[3]
            )));
        }
        if d.sources() != s[k + 1] || phi.outputs() > d.reconstructions() {
            return Err(Error::ShapeMismatch(format!("distortion d{} does not fit source {}", k + 1, k + 1)));
        }
    }
    // axes: 0 = u1, 1 = x1, 2 = x2, 3 = u2
    let rates = match corner {
        Corner::C1 => vec![
            mutual_information(&chain.keep_axes(&[1, 0])?)?,
            conditional_mutual_information(&chain.keep_axes(&[2, 3, 0])?)?,
        ],
        Corner::C2 => vec![
            conditional_mutual_information(&chain.keep_axes(&[1, 0, 3])?)?,
            mutual_information(&chain.keep_axes(&[2, 3])?)?,
        ],
    };
    let dist1 = expected_distortion(&source_reconstruction_joint(&chain, 1, phi1, d1.reconstructions()), d1)?;
    let dist2 = expected_distortion(&source_reconstruction_joint(&chain, 2, phi2, d2.reconstructions()), d2)?;
    Ok(RateDistortionPoint {
        rates,
        distortions: vec![dist1.min(d1.d_max()), dist2.min(d2.d_max())],
        achieving_channels: vec![ch1.clone(), ch2.clone()],
        reconstructions: vec![phi1.clone(), phi2.clone()],
        status: SolverStatus::Exact,
        iterations: 0,
        note: Some(corner.as_str().to_string()),
    })
}

/// `I(X1, X2; U1, U2)`, the sum-rate bound at either corner.
pub fn berger_tung_sum_rate<T: Real>(joint_x1x2: &JointPmf<T>, ch1: &Channel<T>, ch2: &Channel<T>) -> Result<T> {
    let chain = long_chain_joint(joint_x1x2, ch1, ch2)?;
    let s = chain.shape();
    let (nu1, nx1, nx2, nu2) = (s[0], s[1], s[2], s[3]);
    let xu = chain.keep_axes(&[1, 2, 0, 3])?;
    let flat = JointPmf::from_parts_unchecked(
        vec![nx1 * nx2, nu1 * nu2],
        vec!["x1x2".into(), "u1u2".into()],
        xu.probs().to_vec(),
    );
    mutual_information(&flat)
}
