use super::encoder::{position_log_table, word_log_likelihood};
use super::Codebook;
use crate::error::{Error, Result};
use crate::prob::{Channel, SymbolSequence};
use crate::rd::ReconstructionMap;
use crate::scalar::Real;

/// Outcome of maximum-likelihood decoding within a sub-codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MlDecision {
    pub mprime: usize,
    /// Every candidate had zero likelihood; `mprime` is then 0.
    pub degenerate: bool,
}

/// `argmax_{m'} sum_t log2 ch(b_t | v_t(m, m'))`, ties to the lowest index.
///
/// Scores within a relative `sqrt(eps)` of the maximum count as tied, so
/// summation-order rounding never decides between equally likely codewords.
pub fn ml_channel_decode<T: Real>(
    cb: &Codebook<T>,
    m: usize,
    ch: &Channel<T>,
    b: &SymbolSequence,
) -> Result<MlDecision> {
    if m >= cb.num_m() {
        return Err(Error::MessageOutOfRange { m, mprime: 0, num_m: cb.num_m(), num_mprime: cb.num_mprime() });
    }
    if b.len() != cb.n() || ch.inputs() != cb.alphabet() || b.alphabet() > ch.outputs() {
        return Err(Error::ShapeMismatch(format!(
            "decoder: observation length {} / alphabet {} against blocklength {} and {}x{} channel",
            b.len(),
            b.alphabet(),
            cb.n(),
            ch.inputs(),
            ch.outputs()
        )));
    }
    if cb.num_mprime() == 1 {
        return Ok(MlDecision { mprime: 0, degenerate: false });
    }
    let table = position_log_table(ch, b.symbols());
    let scores: Vec<T> = cb.sub_codebook(m).map(|w| word_log_likelihood(&table, cb.alphabet(), w)).collect();
    let best = scores.iter().copied().fold(T::neg_infinity(), T::max);
    if best == T::neg_infinity() {
        return Ok(MlDecision { mprime: 0, degenerate: true });
    }
    let slack = T::epsilon().sqrt() * best.abs().max(T::one());
    let arg = scores.iter().position(|&s| s >= best - slack).unwrap_or(0);
    Ok(MlDecision { mprime: arg, degenerate: false })
}

/// Symbolwise `phi(v_t, b_t)`.
pub fn reconstruct(phi: &ReconstructionMap, v: &SymbolSequence, b: &SymbolSequence) -> Result<SymbolSequence> {
    if v.len() != b.len() {
        return Err(Error::ShapeMismatch(format!("sequences of length {} and {}", v.len(), b.len())));
    }
    if v.alphabet() > phi.first_size() || b.alphabet() > phi.second_size() {
        return Err(Error::ShapeMismatch(format!(
            "alphabets ({}, {}) outside the {}x{} reconstruction map",
            v.alphabet(),
            b.alphabet(),
            phi.first_size(),
            phi.second_size()
        )));
    }
    let out = v.symbols().iter().zip(b.symbols()).map(|(&a, &c)| phi.apply(a, c)).collect();
    SymbolSequence::new(out, phi.outputs())
}
