use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::prob::{Pmf, SymbolSequence};
use crate::rng::keyed_uniform;
use crate::scalar::Real;

/// Default ceiling on `codewords * n` for a materialized codebook.
pub const DEFAULT_SYMBOL_BUDGET: u128 = 1 << 26;

/// Largest exponent accepted when turning a rate into a codebook size.
const MAX_LOG2_SIZE: f64 = 60.0;

/// Index pair `(m, m')`: transmitted message and virtual message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MessagePair {
    pub m: usize,
    pub mprime: usize,
}

impl MessagePair {
    pub fn new(m: usize, mprime: usize) -> Self {
        Self { m, mprime }
    }
}

/// `ceil(2^{n * rate})`, the number of indices a rate buys at blocklength `n`.
pub fn codebook_size(n: usize, rate: f64) -> Result<usize> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::InvalidParameter(format!("rate {rate} must be finite and >= 0")));
    }
    let exponent = n as f64 * rate;
    if exponent > MAX_LOG2_SIZE {
        return Err(Error::InvalidParameter(format!("rate {rate} at blocklength {n} asks for 2^{exponent} codewords")));
    }
    // shave relative rounding so that integral exponents map to exact powers
    let size = (exponent.exp2() * (1.0 - 1e-12)).ceil();
    Ok((size as usize).max(1))
}

/// Letter `t` of codeword `(m, m')` under `seed`, by inverse CDF of a keyed uniform.
pub fn keyed_letter<T: Real>(gen: &Pmf<T>, seed: u64, m: usize, mprime: usize, t: usize) -> usize {
    gen.sample_with(keyed_uniform(seed, m as u64, mprime as u64, t as u64))
}

/// Random codebook `{v^n(m, m')}` with letters drawn i.i.d. from a generator pmf.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook<T = f64> {
    n: usize,
    num_m: usize,
    num_mprime: usize,
    alphabet: usize,
    symbols: Vec<u16>,
    generator: Pmf<T>,
    seed: Option<u64>,
}

impl<T: Real> Codebook<T> {
    /// Codebook of `ceil(2^{nR}) x ceil(2^{nR'})` codewords.
    pub fn generate(gen: &Pmf<T>, n: usize, rate_r: f64, rate_rprime: f64, seed: u64, budget: u128) -> Result<Self> {
        let num_m = codebook_size(n, rate_r)?;
        let num_mprime = codebook_size(n, rate_rprime)?;
        Self::with_sizes(gen, n, num_m, num_mprime, seed, budget)
    }

    pub fn with_sizes(
        gen: &Pmf<T>,
        n: usize,
        num_m: usize,
        num_mprime: usize,
        seed: u64,
        budget: u128,
    ) -> Result<Self> {
        Self::check_dims(gen, n, num_m, num_mprime, budget)?;
        let mut symbols = vec![0u16; num_m * num_mprime * n];
        symbols.par_chunks_mut(n).enumerate().for_each(|(idx, word)| {
            let (m, mp) = (idx / num_mprime, idx % num_mprime);
            for (t, s) in word.iter_mut().enumerate() {
                *s = keyed_letter(gen, seed, m, mp, t) as u16;
            }
        });
        Ok(Self { n, num_m, num_mprime, alphabet: gen.len(), symbols, generator: gen.clone(), seed: Some(seed) })
    }

    /// Codebook from an explicit table of `num_m * num_mprime` codewords in `(m, m')` row-major order.
    pub fn from_codewords(gen: &Pmf<T>, num_m: usize, num_mprime: usize, words: &[Vec<usize>]) -> Result<Self> {
        let n = words.first().map_or(0, Vec::len);
        Self::check_dims(gen, n, num_m, num_mprime, DEFAULT_SYMBOL_BUDGET)?;
        if words.len() != num_m * num_mprime {
            return Err(Error::ShapeMismatch(format!(
                "{} codewords for a {num_m} x {num_mprime} codebook",
                words.len()
            )));
        }
        let mut symbols = Vec::with_capacity(words.len() * n);
        for w in words {
            if w.len() != n {
                return Err(Error::ShapeMismatch("codewords of unequal length".into()));
            }
            if let Some(&s) = w.iter().find(|&&s| s >= gen.len()) {
                return Err(Error::SymbolOutOfRange { symbol: s, alphabet: gen.len() });
            }
            symbols.extend(w.iter().map(|&s| s as u16));
        }
        Ok(Self { n, num_m, num_mprime, alphabet: gen.len(), symbols, generator: gen.clone(), seed: None })
    }

    fn check_dims(gen: &Pmf<T>, n: usize, num_m: usize, num_mprime: usize, budget: u128) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidParameter("blocklength must be >= 1".into()));
        }
        if num_m == 0 || num_mprime == 0 {
            return Err(Error::InvalidParameter("codebook dimensions must be >= 1".into()));
        }
        if gen.len() > usize::from(u16::MAX) + 1 {
            return Err(Error::InvalidParameter(format!(
                "generator alphabet of {} symbols is too large for a codebook",
                gen.len()
            )));
        }
        let required = (num_m as u128) * (num_mprime as u128) * (n as u128);
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_m(&self) -> usize {
        self.num_m
    }

    #[inline]
    pub fn num_mprime(&self) -> usize {
        self.num_mprime
    }

    /// Total number of codewords.
    #[inline]
    pub fn len(&self) -> usize {
        self.num_m * self.num_mprime
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn generator(&self) -> &Pmf<T> {
        &self.generator
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    #[inline]
    pub fn flat_index(&self, msg: MessagePair) -> usize {
        msg.m * self.num_mprime + msg.mprime
    }

    #[inline]
    pub fn message(&self, flat: usize) -> MessagePair {
        MessagePair::new(flat / self.num_mprime, flat % self.num_mprime)
    }

    pub fn check_message(&self, msg: MessagePair) -> Result<()> {
        if msg.m >= self.num_m || msg.mprime >= self.num_mprime {
            return Err(Error::MessageOutOfRange {
                m: msg.m,
                mprime: msg.mprime,
                num_m: self.num_m,
                num_mprime: self.num_mprime,
            });
        }
        Ok(())
    }

    /// Raw letters of the codeword at flat index `flat`.
    #[inline]
    pub fn word(&self, flat: usize) -> &[u16] {
        &self.symbols[flat * self.n..(flat + 1) * self.n]
    }

    pub fn words(&self) -> impl Iterator<Item = &[u16]> + '_ {
        self.symbols.chunks_exact(self.n)
    }

    /// Codewords of sub-codebook `m`, indexed by `m'`.
    pub fn sub_codebook(&self, m: usize) -> impl Iterator<Item = &[u16]> + '_ {
        self.symbols[m * self.num_mprime * self.n..(m + 1) * self.num_mprime * self.n].chunks_exact(self.n)
    }
}

/// `v^n(msg)` as a sequence.
pub fn codeword_lookup<T: Real>(cb: &Codebook<T>, msg: MessagePair) -> Result<SymbolSequence> {
    cb.check_message(msg)?;
    Ok(SymbolSequence::from_vec_unchecked(
        cb.word(cb.flat_index(msg)).iter().map(|&s| usize::from(s)).collect(),
        cb.alphabet,
    ))
}

/// [`Codebook::generate`] under the default symbol budget.
pub fn generate_codebook<T: Real>(
    gen: &Pmf<T>,
    n: usize,
    rate_r: f64,
    rate_rprime: f64,
    seed: u64,
) -> Result<Codebook<T>> {
    Codebook::generate(gen, n, rate_r, rate_rprime, seed, DEFAULT_SYMBOL_BUDGET)
}
