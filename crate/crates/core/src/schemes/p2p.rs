use super::trial::{encode_or_fallback, sample_sequence, MonteCarlo, TrialFlags, TrialResult};
use crate::coding::{codebook_size, codeword_lookup, Codebook, DEFAULT_SYMBOL_BUDGET};
use crate::error::{Error, Result};
use crate::prob::{mutual_information, sequence_distortion, Channel, DistortionMeasure, JointPmf, Pmf};
use crate::rng::{derive_seed, stream};
use crate::scalar::Real;

pub const P2P_TAG: &str = "p2p";

/// Point-to-point likelihood-encoder experiment.
#[derive(Debug, Clone)]
pub struct P2pConfig<T = f64> {
    pub source: Pmf<T>,
    /// `P(x|y)`, the channel the encoder scores codewords with.
    pub channel: Channel<T>,
    /// `P(y)`, the codeword letter distribution.
    pub generator: Pmf<T>,
    pub d: DistortionMeasure<T>,
    pub n: usize,
    pub rate: f64,
    pub monte_carlo: MonteCarlo,
}

impl<T: Real> P2pConfig<T> {
    /// Derives `P(y)` and `P(x|y)` from a forward test channel `P(y|x)`.
    pub fn from_test_channel(
        source: Pmf<T>,
        test_channel: &Channel<T>,
        d: DistortionMeasure<T>,
        n: usize,
        rate: f64,
        monte_carlo: MonteCarlo,
    ) -> Result<Self> {
        let generator = test_channel.output_pmf(&source)?;
        let (channel, _) = test_channel.reverse(&source)?;
        Ok(Self { source, channel, generator, d, n, rate, monte_carlo })
    }

    pub fn validate(&self) -> Result<()> {
        self.monte_carlo.validate()?;
        if self.n == 0 {
            return Err(Error::InvalidParameter("blocklength must be at least 1".into()));
        }
        if !self.rate.is_finite() || self.rate < 0.0 {
            return Err(Error::InvalidParameter(format!("rate {} must be finite and nonnegative", self.rate)));
        }
        if self.channel.inputs() != self.generator.len() || self.channel.outputs() != self.source.len() {
            return Err(Error::ShapeMismatch(format!(
                "channel is {}x{}, generator has {} symbols and source {}",
                self.channel.inputs(),
                self.channel.outputs(),
                self.generator.len(),
                self.source.len()
            )));
        }
        if self.d.sources() != self.source.len() || self.d.reconstructions() != self.generator.len() {
            return Err(Error::ShapeMismatch("distortion table does not match source and codeword alphabets".into()));
        }
        let words = codebook_size(self.n, self.rate)? as u128;
        let required = words * self.n as u128;
        if required > DEFAULT_SYMBOL_BUDGET {
            return Err(Error::BudgetExceeded { required, budget: DEFAULT_SYMBOL_BUDGET });
        }
        Ok(())
    }

    /// `I(X;Y)` under `P(y) P(x|y)`.
    pub fn mutual_information(&self) -> Result<T> {
        let joint: JointPmf<T> = crate::prob::compose(&self.generator, &self.channel)?;
        mutual_information(&joint)
    }

    pub fn warnings(&self) -> Result<Vec<String>> {
        let i = self.mutual_information()?.as_f64();
        let mut out = Vec::new();
        if self.rate <= i {
            out.push(format!("rate condition violated: R = {:.6} <= I(X;Y) = {:.6}", self.rate, i));
        }
        Ok(out)
    }

    pub fn codebook(&self, block: usize) -> Result<Codebook<T>> {
        let seed = self.monte_carlo.codebook_seed("p2p-codebook", block);
        Codebook::generate(&self.generator, self.n, self.rate, 0.0, seed, DEFAULT_SYMBOL_BUDGET)
    }
}

/// One trial against an explicit codebook.
pub fn p2p_trial_with_codebook<T: Real>(
    source: &Pmf<T>,
    channel: &Channel<T>,
    d: &DistortionMeasure<T>,
    cb: &Codebook<T>,
    trial_seed: u64,
) -> Result<(f64, TrialFlags)> {
    let mut flags = TrialFlags::default();
    let mut rng = stream(derive_seed(trial_seed, "source", 0));
    let x = sample_sequence(source, cb.n(), &mut rng);
    let msg = encode_or_fallback(cb, channel, &x, derive_seed(trial_seed, "encoder", 0), &mut flags)?;
    let y = codeword_lookup(cb, msg)?;
    Ok((sequence_distortion(d, &x, &y)?.as_f64(), flags))
}

/// Single point-to-point trial with its own codebook drawn from `gen`.
#[allow(clippy::too_many_arguments)]
pub fn run_p2p_trial<T: Real>(
    source: &Pmf<T>,
    channel: &Channel<T>,
    gen: &Pmf<T>,
    d: &DistortionMeasure<T>,
    n: usize,
    rate: f64,
    seed: u64,
) -> Result<TrialResult> {
    let cb = Codebook::generate(gen, n, rate, 0.0, derive_seed(seed, "codebook", 0), DEFAULT_SYMBOL_BUDGET)?;
    let (dist, flags) = p2p_trial_with_codebook(source, channel, d, &cb, seed)?;
    Ok(TrialResult {
        trial_index: 0,
        trial_seed: seed,
        codebook_block: 0,
        distortions: vec![dist],
        virtual_decode_ok: None,
        flags,
    })
}

pub(crate) fn p2p_trial<T: Real>(cfg: &P2pConfig<T>, cb: &Codebook<T>, i: usize) -> Result<TrialResult> {
    let seed = cfg.monte_carlo.trial_seed(P2P_TAG, i);
    let (dist, flags) = p2p_trial_with_codebook(&cfg.source, &cfg.channel, &cfg.d, cb, seed)?;
    Ok(TrialResult {
        trial_index: i,
        trial_seed: seed,
        codebook_block: cfg.monte_carlo.block_of(i),
        distortions: vec![dist],
        virtual_decode_ok: None,
        flags,
    })
}
