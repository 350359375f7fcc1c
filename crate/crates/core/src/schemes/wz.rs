use super::trial::{encode_or_fallback, sample_pairs, MonteCarlo, TrialFlags, TrialResult};
use crate::coding::{codebook_size, codeword_lookup, ml_channel_decode, reconstruct, Codebook, DEFAULT_SYMBOL_BUDGET};
use crate::error::{Error, Result};
use crate::prob::{compose, mutual_information, sequence_distortion, Channel, DistortionMeasure, JointPmf, Pmf};
use crate::rd::ReconstructionMap;
use crate::rng::{derive_seed, stream};
use crate::scalar::Real;

pub const WZ_TAG: &str = "wz";

/// Wyner-Ziv experiment: source `X`, decoder side information `B`, test channel `P(v|x)`.
#[derive(Debug, Clone)]
pub struct WzConfig<T = f64> {
    pub joint_xb: JointPmf<T>,
    pub test_channel: Channel<T>,
    pub phi: ReconstructionMap,
    pub d: DistortionMeasure<T>,
    pub n: usize,
    pub rate_r: f64,
    pub rate_rprime: f64,
    pub monte_carlo: MonteCarlo,
}

/// Information quantities that set the Wyner-Ziv rate conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WzInformation {
    pub i_xv: f64,
    pub i_vb: f64,
}

impl WzInformation {
    /// `R' = max(0, I(V;B) - binning)` and `R = I(X;V) - R' + cover`.
    pub fn margin_rates(&self, cover: f64, binning: f64) -> (f64, f64) {
        let rprime = (self.i_vb - binning).max(0.0);
        let r = (self.i_xv - rprime + cover).max(0.0);
        (r, rprime)
    }
}

/// A validated Wyner-Ziv configuration with its derived channels.
#[derive(Debug, Clone)]
pub struct WzScheme<T = f64> {
    pub config: WzConfig<T>,
    /// `P(v)`, the codeword letter distribution.
    pub p_v: Pmf<T>,
    /// `P(x|v)`, used by the encoder.
    pub p_x_given_v: Channel<T>,
    /// `P(b|v)` through the chain `V - X - B`, used by the decoder.
    pub p_b_given_v: Channel<T>,
    /// `V` symbols of zero probability; their inverse rows are uniform.
    pub unreachable_v: Vec<usize>,
    pub info: WzInformation,
}

impl<T: Real> WzScheme<T> {
    pub fn new(config: WzConfig<T>) -> Result<Self> {
        config.monte_carlo.validate()?;
        config.joint_xb.check_arity(2)?;
        let (nx, nb) = (config.joint_xb.shape()[0], config.joint_xb.shape()[1]);
        let ch = &config.test_channel;
        if ch.inputs() != nx {
            return Err(Error::ShapeMismatch(format!(
                "test channel has {} inputs, source has {nx} symbols",
                ch.inputs()
            )));
        }
        if config.phi.first_size() != ch.outputs() || config.phi.second_size() != nb {
            return Err(Error::ShapeMismatch(format!(
                "reconstruction map is {}x{}, expected {}x{nb}",
                config.phi.first_size(),
                config.phi.second_size(),
                ch.outputs()
            )));
        }
        if config.d.sources() != nx || config.phi.outputs() > config.d.reconstructions() {
            return Err(Error::ShapeMismatch(
                "distortion table does not match source and reconstruction alphabets".into(),
            ));
        }
        check_rates(config.n, &[config.rate_r, config.rate_rprime])?;
        let words =
            codebook_size(config.n, config.rate_r)? as u128 * codebook_size(config.n, config.rate_rprime)? as u128;
        let required = words * config.n as u128;
        if required > DEFAULT_SYMBOL_BUDGET {
            return Err(Error::BudgetExceeded { required, budget: DEFAULT_SYMBOL_BUDGET });
        }

        let p_x = config.joint_xb.marginal(0)?;
        let p_v = ch.output_pmf(&p_x)?;
        let (p_x_given_v, unreachable_v) = ch.reverse(&p_x)?;
        let (p_b_given_x, _) = config.joint_xb.conditional(0, 1)?;
        let p_b_given_v = p_x_given_v.then(&p_b_given_x)?;
        let i_xv = mutual_information(&compose(&p_x, ch)?)?.as_f64();
        let i_vb = mutual_information(&compose(&p_v, &p_b_given_v)?)?.as_f64();
        Ok(Self { config, p_v, p_x_given_v, p_b_given_v, unreachable_v, info: WzInformation { i_xv, i_vb } })
    }

    pub fn warnings(&self) -> Vec<String> {
        let c = &self.config;
        let mut out = Vec::new();
        if c.rate_r + c.rate_rprime <= self.info.i_xv {
            out.push(format!(
                "rate condition violated: R + R' = {:.6} <= I(X;V) = {:.6}",
                c.rate_r + c.rate_rprime,
                self.info.i_xv
            ));
        }
        if c.rate_rprime > 0.0 && c.rate_rprime >= self.info.i_vb {
            out.push(format!("rate condition violated: R' = {:.6} >= I(V;B) = {:.6}", c.rate_rprime, self.info.i_vb));
        }
        if !self.unreachable_v.is_empty() {
            out.push(format!("unreachable V symbols {:?} given uniform inverse rows", self.unreachable_v));
        }
        out
    }

    pub fn codebook(&self, block: usize) -> Result<Codebook<T>> {
        let c = &self.config;
        let seed = c.monte_carlo.codebook_seed("wz-codebook", block);
        Codebook::generate(&self.p_v, c.n, c.rate_r, c.rate_rprime, seed, DEFAULT_SYMBOL_BUDGET)
    }

    /// Trial `i` against an explicit codebook.
    pub fn trial(&self, cb: &Codebook<T>, i: usize) -> Result<TrialResult> {
        let c = &self.config;
        let seed = c.monte_carlo.trial_seed(WZ_TAG, i);
        let mut flags = TrialFlags::default();
        let mut rng = stream(derive_seed(seed, "source", 0));
        let (x, b) = sample_pairs(&c.joint_xb, c.n, &mut rng);
        let sent = encode_or_fallback(cb, &self.p_x_given_v, &x, derive_seed(seed, "encoder", 0), &mut flags)?;
        let decision = ml_channel_decode(cb, sent.m, &self.p_b_given_v, &b)?;
        flags.decode_degenerate = decision.degenerate;
        let v = codeword_lookup(cb, crate::coding::MessagePair::new(sent.m, decision.mprime))?;
        let y = reconstruct(&c.phi, &v, &b)?;
        Ok(TrialResult {
            trial_index: i,
            trial_seed: seed,
            codebook_block: c.monte_carlo.block_of(i),
            distortions: vec![sequence_distortion(&c.d, &x, &y)?.as_f64()],
            virtual_decode_ok: Some(decision.mprime == sent.mprime),
            flags,
        })
    }
}

/// Trial `i` of the experiment described by `cfg`, using the codebook of its block.
pub fn run_wz_trial<T: Real>(cfg: &WzConfig<T>, trial_index: usize) -> Result<TrialResult> {
    let scheme = WzScheme::new(cfg.clone())?;
    let cb = scheme.codebook(cfg.monte_carlo.block_of(trial_index))?;
    scheme.trial(&cb, trial_index)
}

pub(crate) fn check_rates(n: usize, rates: &[f64]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("blocklength must be at least 1".into()));
    }
    for &r in rates {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidParameter(format!("rate {r} must be finite and nonnegative")));
        }
    }
    Ok(())
}
