//! Exact finite-alphabet probability arithmetic.
//!
//! All types validate at construction and are immutable afterwards. Tables
//! are row-major with the first axis most significant, the same order used
//! for enumerated sequence spaces.

mod channel;
mod distortion;
mod info;
mod joint;
mod pmf;
mod sequence;

pub use channel::Channel;
pub use distortion::{expected_distortion, sequence_distortion, DistortionMeasure};
pub use info::{binary_entropy, conditional_mutual_information, entropy, joint_entropy, mutual_information};
pub use joint::{compose, JointPmf};
pub use pmf::Pmf;
pub use sequence::{iid_extension, sequence_space, SymbolSequence, ENUMERATION_LIMIT};

pub(crate) use pmf::inverse_cdf;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A probability table with a shape, so distances can be taken between like objects.
pub trait ProbTable<T: Real> {
    fn table(&self) -> &[T];
    fn dims(&self) -> Vec<usize>;
}

impl<T: Real> ProbTable<T> for Pmf<T> {
    fn table(&self) -> &[T] {
        self.probs()
    }
    fn dims(&self) -> Vec<usize> {
        vec![self.len()]
    }
}

impl<T: Real> ProbTable<T> for JointPmf<T> {
    fn table(&self) -> &[T] {
        self.probs()
    }
    fn dims(&self) -> Vec<usize> {
        self.shape().to_vec()
    }
}

/// Total variation distance, half the L1 distance between the tables.
pub fn total_variation<T: Real, P: ProbTable<T> + ?Sized, Q: ProbTable<T> + ?Sized>(p: &P, q: &Q) -> Result<T> {
    if p.dims() != q.dims() {
        return Err(Error::ShapeMismatch(format!("total variation between shapes {:?} and {:?}", p.dims(), q.dims())));
    }
    let l1: T = p.table().iter().zip(q.table()).map(|(&a, &b)| (a - b).abs()).sum();
    Ok((l1 / T::lit(2.0)).min(T::one()))
}
