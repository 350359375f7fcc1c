//! Random codebooks, the likelihood encoder and the ML virtual-message decoder.

mod codebook;
mod decoder;
mod encoder;

pub use codebook::{
    codebook_size, codeword_lookup, generate_codebook, keyed_letter, Codebook, MessagePair, DEFAULT_SYMBOL_BUDGET,
};
pub use decoder::{ml_channel_decode, reconstruct, MlDecision};
pub use encoder::{encoder_posterior, likelihood_encode, log_likelihood, log_likelihoods, normalize_log_weights};
