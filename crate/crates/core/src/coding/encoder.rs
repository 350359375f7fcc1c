//! The likelihood encoder: pick a codeword with probability proportional to
//! the likelihood of the source sequence under the memoryless test channel.

use rand::Rng;

use super::{Codebook, MessagePair};
use crate::error::{Error, Result};
use crate::prob::{inverse_cdf, Channel, Pmf, SymbolSequence};
use crate::rng::stream;
use crate::scalar::Real;

fn check_compatible<T: Real>(cb: &Codebook<T>, ch: &Channel<T>, x: &SymbolSequence) -> Result<()> {
    if x.len() != cb.n() {
        return Err(Error::ShapeMismatch(format!("sequence of length {} against blocklength {}", x.len(), cb.n())));
    }
    if ch.inputs() != cb.alphabet() {
        return Err(Error::ShapeMismatch(format!(
            "channel has {} inputs, codebook alphabet has {} symbols",
            ch.inputs(),
            cb.alphabet()
        )));
    }
    if x.alphabet() > ch.outputs() {
        return Err(Error::ShapeMismatch(format!(
            "sequence alphabet {} exceeds channel outputs {}",
            x.alphabet(),
            ch.outputs()
        )));
    }
    Ok(())
}

/// Per-position table `log2 ch(x_t | v)`, laid out `[t][v]`.
pub(crate) fn position_log_table<T: Real>(ch: &Channel<T>, x: &[usize]) -> Vec<T> {
    let k = ch.inputs();
    let mut table = Vec::with_capacity(x.len() * k);
    for &xt in x {
        table.extend((0..k).map(|v| ch.prob(v, xt).log2()));
    }
    table
}

#[inline]
pub(crate) fn word_log_likelihood<T: Real>(table: &[T], alphabet: usize, word: &[u16]) -> T {
    let mut acc = T::zero();
    for (t, &v) in word.iter().enumerate() {
        acc = acc + table[t * alphabet + usize::from(v)];
    }
    acc
}

/// `sum_t log2 ch(x_t | v_t(msg))`; `-inf` when any factor is zero.
pub fn log_likelihood<T: Real>(cb: &Codebook<T>, ch: &Channel<T>, x: &SymbolSequence, msg: MessagePair) -> Result<T> {
    check_compatible(cb, ch, x)?;
    cb.check_message(msg)?;
    let word = cb.word(cb.flat_index(msg));
    Ok(word.iter().zip(x.symbols()).map(|(&v, &xt)| ch.prob(usize::from(v), xt).log2()).fold(T::zero(), |a, b| a + b))
}

/// Log-likelihood of every codeword, in flat `(m, m')` order.
pub fn log_likelihoods<T: Real>(cb: &Codebook<T>, ch: &Channel<T>, x: &SymbolSequence) -> Result<Vec<T>> {
    check_compatible(cb, ch, x)?;
    let table = position_log_table(ch, x.symbols());
    Ok(cb.words().map(|w| word_log_likelihood(&table, cb.alphabet(), w)).collect())
}

/// Normalizes log2-domain weights with a max shift. Errors when every weight is `-inf`.
pub fn normalize_log_weights<T: Real>(logs: &[T]) -> Result<Pmf<T>> {
    let max = logs.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() || max.is_nan() {
        return Err(Error::AllZeroLikelihood);
    }
    let weights: Vec<T> = logs.iter().map(|&l| (l - max).exp2()).collect();
    let total: T = weights.iter().copied().sum();
    Ok(Pmf::from_vec_unchecked(weights.into_iter().map(|w| w / total).collect()))
}

/// Encoder distribution over messages, flat `(m, m')` order (see [`Codebook::message`]).
pub fn encoder_posterior<T: Real>(cb: &Codebook<T>, ch: &Channel<T>, x: &SymbolSequence) -> Result<Pmf<T>> {
    normalize_log_weights(&log_likelihoods(cb, ch, x)?)
}

/// Draws a message from the encoder posterior using the stream keyed by `rng_seed`.
pub fn likelihood_encode<T: Real>(
    cb: &Codebook<T>,
    ch: &Channel<T>,
    x: &SymbolSequence,
    rng_seed: u64,
) -> Result<MessagePair> {
    let posterior = encoder_posterior(cb, ch, x)?;
    let u: f64 = stream(rng_seed).gen();
    Ok(cb.message(inverse_cdf(posterior.probs(), u)))
}
