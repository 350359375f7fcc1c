use super::trial::{encode_or_fallback, sample_pairs, MonteCarlo, TrialFlags, TrialResult};
use super::wz::check_rates;
use crate::coding::{
    codebook_size, codeword_lookup, ml_channel_decode, reconstruct, Codebook, MessagePair, DEFAULT_SYMBOL_BUDGET,
};
use crate::error::{Error, Result};
use crate::prob::{
    conditional_mutual_information, mutual_information, sequence_distortion, Channel, DistortionMeasure, JointPmf, Pmf,
};
use crate::rd::{long_chain_joint, ReconstructionMap};
use crate::rng::{derive_seed, stream};
use crate::scalar::Real;

pub const BT_TAG: &str = "bt";

/// Berger-Tung corner-C1 experiment: encoder 1 is decoded first and its
/// codeword serves as side information for encoder 2's virtual message.
#[derive(Debug, Clone)]
pub struct BtConfig<T = f64> {
    pub joint_x1x2: JointPmf<T>,
    /// `P(u1|x1)`.
    pub ch1: Channel<T>,
    /// `P(u2|x2)`.
    pub ch2: Channel<T>,
    pub phi1: ReconstructionMap,
    pub phi2: ReconstructionMap,
    pub d1: DistortionMeasure<T>,
    pub d2: DistortionMeasure<T>,
    pub n: usize,
    pub rate1: f64,
    pub rate2: f64,
    pub rate2_prime: f64,
    pub monte_carlo: MonteCarlo,
}

/// Information quantities of the long chain `U1 - X1 - X2 - U2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BtInformation {
    pub i_x1u1: f64,
    pub i_x2u2: f64,
    pub i_u1u2: f64,
    /// `I(X2;U2|U1)`.
    pub i_x2u2_given_u1: f64,
}

impl BtInformation {
    /// Corner-C1 rates with margins: `(R1, R2, R2')` where `R1 = I(X1;U1) + cover`,
    /// `R2 = I(X2;U2|U1) + cover` and `R2' = max(0, I(U1;U2) - binning)`.
    pub fn margin_rates(&self, cover: f64, binning: f64) -> (f64, f64, f64) {
        (self.i_x1u1 + cover, self.i_x2u2_given_u1 + cover, (self.i_u1u2 - binning).max(0.0))
    }
}

#[derive(Debug, Clone)]
pub struct BtScheme<T = f64> {
    pub config: BtConfig<T>,
    pub p_u1: Pmf<T>,
    pub p_u2: Pmf<T>,
    pub p_x1_given_u1: Channel<T>,
    pub p_x2_given_u2: Channel<T>,
    /// `P(u1|u2)` through the long chain, used to decode the virtual message from `u1`.
    pub p_u1_given_u2: Channel<T>,
    pub unreachable_u1: Vec<usize>,
    pub unreachable_u2: Vec<usize>,
    pub info: BtInformation,
}

impl<T: Real> BtScheme<T> {
    pub fn new(config: BtConfig<T>) -> Result<Self> {
        config.monte_carlo.validate()?;
        config.joint_x1x2.check_arity(2)?;
        let c = &config;
        let (nx1, nx2) = (c.joint_x1x2.shape()[0], c.joint_x1x2.shape()[1]);
        if c.ch1.inputs() != nx1 || c.ch2.inputs() != nx2 {
            return Err(Error::ShapeMismatch("test channel inputs do not match the source alphabets".into()));
        }
        let (nu1, nu2) = (c.ch1.outputs(), c.ch2.outputs());
        for (k, phi, d, nx) in [(1, &c.phi1, &c.d1, nx1), (2, &c.phi2, &c.d2, nx2)] {
            if phi.first_size() != nu1 || phi.second_size() != nu2 {
                return Err(Error::ShapeMismatch(format!(
                    "phi{k} is {}x{}, expected {nu1}x{nu2}",
                    phi.first_size(),
                    phi.second_size()
                )));
            }
            if d.sources() != nx || phi.outputs() > d.reconstructions() {
                return Err(Error::ShapeMismatch(format!("distortion d{k} does not match source {k}")));
            }
        }
        check_rates(c.n, &[c.rate1, c.rate2, c.rate2_prime])?;
        let n = c.n as u128;
        let required = codebook_size(c.n, c.rate1)? as u128 * n
            + codebook_size(c.n, c.rate2)? as u128 * codebook_size(c.n, c.rate2_prime)? as u128 * n;
        if required > DEFAULT_SYMBOL_BUDGET {
            return Err(Error::BudgetExceeded { required, budget: DEFAULT_SYMBOL_BUDGET });
        }

        let p_x1 = c.joint_x1x2.marginal(0)?;
        let p_x2 = c.joint_x1x2.marginal(1)?;
        let p_u1 = c.ch1.output_pmf(&p_x1)?;
        let p_u2 = c.ch2.output_pmf(&p_x2)?;
        let (p_x1_given_u1, unreachable_u1) = c.ch1.reverse(&p_x1)?;
        let (p_x2_given_u2, unreachable_u2) = c.ch2.reverse(&p_x2)?;
        // axes of the chain: u1, x1, x2, u2
        let chain = long_chain_joint(&c.joint_x1x2, &c.ch1, &c.ch2)?;
        let (p_u1_given_u2, _) = chain.keep_axes(&[3, 0])?.conditional(0, 1)?;
        let info = BtInformation {
            i_x1u1: mutual_information(&chain.keep_axes(&[1, 0])?)?.as_f64(),
            i_x2u2: mutual_information(&chain.keep_axes(&[2, 3])?)?.as_f64(),
            i_u1u2: mutual_information(&chain.keep_axes(&[0, 3])?)?.as_f64(),
            i_x2u2_given_u1: conditional_mutual_information(&chain.keep_axes(&[2, 3, 0])?)?.as_f64(),
        };
        Ok(Self {
            config,
            p_u1,
            p_u2,
            p_x1_given_u1,
            p_x2_given_u2,
            p_u1_given_u2,
            unreachable_u1,
            unreachable_u2,
            info,
        })
    }

    pub fn warnings(&self) -> Vec<String> {
        let c = &self.config;
        let i = &self.info;
        let mut out = Vec::new();
        if c.rate1 <= i.i_x1u1 {
            out.push(format!("rate condition violated: R1 = {:.6} <= I(X1;U1) = {:.6}", c.rate1, i.i_x1u1));
        }
        if c.rate2 + c.rate2_prime <= i.i_x2u2 {
            out.push(format!(
                "rate condition violated: R2 + R2' = {:.6} <= I(X2;U2) = {:.6}",
                c.rate2 + c.rate2_prime,
                i.i_x2u2
            ));
        }
        if c.rate2_prime > 0.0 && c.rate2_prime >= i.i_u1u2 {
            out.push(format!("rate condition violated: R2' = {:.6} >= I(U1;U2) = {:.6}", c.rate2_prime, i.i_u1u2));
        }
        if !self.unreachable_u1.is_empty() || !self.unreachable_u2.is_empty() {
            out.push(format!(
                "unreachable auxiliary symbols U1 {:?}, U2 {:?} given uniform inverse rows",
                self.unreachable_u1, self.unreachable_u2
            ));
        }
        out
    }

    pub fn codebooks(&self, block: usize) -> Result<(Codebook<T>, Codebook<T>)> {
        let c = &self.config;
        let mc = &c.monte_carlo;
        let cb1 = Codebook::generate(
            &self.p_u1,
            c.n,
            c.rate1,
            0.0,
            mc.codebook_seed("bt-codebook-1", block),
            DEFAULT_SYMBOL_BUDGET,
        )?;
        let cb2 = Codebook::generate(
            &self.p_u2,
            c.n,
            c.rate2,
            c.rate2_prime,
            mc.codebook_seed("bt-codebook-2", block),
            DEFAULT_SYMBOL_BUDGET,
        )?;
        Ok((cb1, cb2))
    }

    /// Trial `i` against explicit codebooks.
    pub fn trial(&self, cb1: &Codebook<T>, cb2: &Codebook<T>, i: usize) -> Result<TrialResult> {
        let c = &self.config;
        let seed = c.monte_carlo.trial_seed(BT_TAG, i);
        let mut flags = TrialFlags::default();
        let mut rng = stream(derive_seed(seed, "source", 0));
        let (x1, x2) = sample_pairs(&c.joint_x1x2, c.n, &mut rng);
        let m1 = encode_or_fallback(cb1, &self.p_x1_given_u1, &x1, derive_seed(seed, "encoder", 1), &mut flags)?;
        let sent2 = encode_or_fallback(cb2, &self.p_x2_given_u2, &x2, derive_seed(seed, "encoder", 2), &mut flags)?;
        let u1 = codeword_lookup(cb1, m1)?;
        let decision = ml_channel_decode(cb2, sent2.m, &self.p_u1_given_u2, &u1)?;
        flags.decode_degenerate = decision.degenerate;
        let u2 = codeword_lookup(cb2, MessagePair::new(sent2.m, decision.mprime))?;
        let y1 = reconstruct(&c.phi1, &u1, &u2)?;
        let y2 = reconstruct(&c.phi2, &u1, &u2)?;
        Ok(TrialResult {
            trial_index: i,
            trial_seed: seed,
            codebook_block: c.monte_carlo.block_of(i),
            distortions: vec![
                sequence_distortion(&c.d1, &x1, &y1)?.as_f64(),
                sequence_distortion(&c.d2, &x2, &y2)?.as_f64(),
            ],
            virtual_decode_ok: Some(decision.mprime == sent2.mprime),
            flags,
        })
    }
}

/// Trial `i` of the experiment described by `cfg`, using the codebooks of its block.
pub fn run_bt_trial<T: Real>(cfg: &BtConfig<T>, trial_index: usize) -> Result<TrialResult> {
    let scheme = BtScheme::new(cfg.clone())?;
    let (cb1, cb2) = scheme.codebooks(cfg.monte_carlo.block_of(trial_index))?;
    scheme.trial(&cb1, &cb2, trial_index)
}
