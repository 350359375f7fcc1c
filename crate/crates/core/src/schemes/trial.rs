use serde::Serialize;

use crate::coding::{likelihood_encode, Codebook, MessagePair};
use crate::error::{Error, Result};
use crate::prob::{Channel, JointPmf, Pmf, SymbolSequence};
use crate::rng::{derive_seed, stream};
use crate::scalar::Real;
use rand::Rng;

/// Monte Carlo settings shared by every scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonteCarlo {
    pub trials: usize,
    pub master_seed: u64,
    /// Number of independent codebooks per experiment; trials are split into this many contiguous blocks.
    pub codebooks_per_experiment: usize,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        Self { trials: 100, master_seed: 0, codebooks_per_experiment: 10 }
    }
}

impl MonteCarlo {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.codebooks_per_experiment == 0 {
            return Err(Error::InvalidParameter("codebooks_per_experiment must be at least 1".into()));
        }
        Ok(())
    }

    pub fn blocks(&self) -> usize {
        self.codebooks_per_experiment.min(self.trials).max(1)
    }

    /// Codebook block used by trial `i`.
    pub fn block_of(&self, i: usize) -> usize {
        ((i as u128 * self.blocks() as u128) / self.trials.max(1) as u128) as usize
    }

    pub fn trial_seed(&self, tag: &str, i: usize) -> u64 {
        derive_seed(self.master_seed, tag, i as u64)
    }

    pub fn codebook_seed(&self, tag: &str, block: usize) -> u64 {
        derive_seed(self.master_seed, tag, block as u64)
    }
}

/// Events that are recorded rather than treated as failures.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TrialFlags {
    /// Some encoder saw zero likelihood everywhere and fell back to a uniform message.
    pub all_zero_likelihood: bool,
    /// The virtual-message decoder saw zero likelihood everywhere and returned index 0.
    pub decode_degenerate: bool,
}

impl TrialFlags {
    pub fn any(&self) -> bool {
        self.all_zero_likelihood || self.decode_degenerate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial_index: usize,
    pub trial_seed: u64,
    pub codebook_block: usize,
    /// One entry per source.
    pub distortions: Vec<f64>,
    /// `None` when the scheme has no virtual message.
    pub virtual_decode_ok: Option<bool>,
    pub flags: TrialFlags,
}

pub(crate) fn sample_sequence<T: Real>(p: &Pmf<T>, n: usize, rng: &mut impl Rng) -> SymbolSequence {
    let symbols = (0..n).map(|_| p.sample_with(rng.gen::<f64>())).collect();
    SymbolSequence::from_vec_unchecked(symbols, p.len())
}

/// Draws `n` pairs from a two-axis joint.
pub(crate) fn sample_pairs<T: Real>(
    joint: &JointPmf<T>,
    n: usize,
    rng: &mut impl Rng,
) -> (SymbolSequence, SymbolSequence) {
    let flat = joint.flatten();
    let (na, nb) = (joint.shape()[0], joint.shape()[1]);
    let (a, b): (Vec<usize>, Vec<usize>) = (0..n)
        .map(|_| {
            let k = flat.sample_with(rng.gen::<f64>());
            (k / nb, k % nb)
        })
        .unzip();
    (SymbolSequence::from_vec_unchecked(a, na), SymbolSequence::from_vec_unchecked(b, nb))
}

/// Likelihood encoding with the uniform-message fallback used on the simulation path.
pub(crate) fn encode_or_fallback<T: Real>(
    cb: &Codebook<T>,
    ch: &Channel<T>,
    x: &SymbolSequence,
    seed: u64,
    flags: &mut TrialFlags,
) -> Result<MessagePair> {
    match likelihood_encode(cb, ch, x, seed) {
        Err(Error::AllZeroLikelihood) => {
            flags.all_zero_likelihood = true;
            let u: f64 = stream(seed).gen();
            Ok(cb.message(((u * cb.len() as f64) as usize).min(cb.len() - 1)))
        }
        other => other,
    }
}
