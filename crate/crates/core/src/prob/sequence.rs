use super::Pmf;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest sequence space any exact operation will enumerate.
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

/// Length-`n` sequence over an alphabet of known size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolSequence {
    symbols: Vec<usize>,
    alphabet: usize,
}

impl SymbolSequence {
    pub fn new(symbols: Vec<usize>, alphabet: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidParameter("sequence must have length >= 1".into()));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::SymbolOutOfRange { symbol: s, alphabet });
        }
        Ok(Self { symbols, alphabet })
    }

    /// Sequence with row-major rank `index` in `alphabet^n`.
    pub fn from_rank(mut index: usize, alphabet: usize, n: usize) -> Self {
        let mut symbols = vec![0; n];
        for s in symbols.iter_mut().rev() {
            *s = index % alphabet;
            index /= alphabet;
        }
        Self { symbols, alphabet }
    }

    /// Row-major rank (first symbol most significant).
    pub fn rank(&self) -> usize {
        self.symbols.iter().fold(0, |acc, &s| acc * self.alphabet + s)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    #[inline]
    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    #[inline]
    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub(crate) fn from_vec_unchecked(symbols: Vec<usize>, alphabet: usize) -> Self {
        Self { symbols, alphabet }
    }
}

/// `alphabet^n`, erroring past the enumeration guard.
pub fn sequence_space(alphabet: usize, n: usize) -> Result<usize> {
    let mut size: u128 = 1;
    for _ in 0..n {
        size = size.saturating_mul(alphabet as u128);
        if size > ENUMERATION_LIMIT {
            return Err(Error::EnumerationLimit {
                required: (alphabet as u128).saturating_pow(n as u32),
                limit: ENUMERATION_LIMIT,
            });
        }
    }
    Ok(size as usize)
}

/// Product distribution over `alphabet^n` in row-major sequence order.
pub fn iid_extension<T: Real>(p: &Pmf<T>, n: usize) -> Result<Pmf<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("blocklength must be >= 1".into()));
    }
    sequence_space(p.len(), n)?;
    let mut probs = p.probs().to_vec();
    for _ in 1..n {
        probs = probs.iter().flat_map(|&a| p.probs().iter().map(move |&b| a * b)).collect();
    }
    Ok(Pmf::from_vec_unchecked(probs))
}

#[cfg(test)]
mod tests {
    use super::*;
    type Pmf = crate::prob::Pmf<f64>;

    #[test]
    fn rank_roundtrip() {
        for r in 0..27 {
            assert_eq!(SymbolSequence::from_rank(r, 3, 3).rank(), r);
        }
        assert_eq!(SymbolSequence::from_rank(5, 2, 3).symbols(), &[1, 0, 1]);
    }

    #[test]
    fn iid_examples() {
        let p = Pmf::new(vec![0.7, 0.3]).unwrap();
        assert_eq!(iid_extension(&p, 1).unwrap(), p);
        let two = iid_extension(&p, 2).unwrap();
        for (a, b) in two.probs().iter().zip([0.49, 0.21, 0.21, 0.09]) {
            assert!((a - b).abs() < 1e-15);
        }
        let pm = Pmf::point_mass(3, 2).unwrap();
        let ext = iid_extension(&pm, 4).unwrap();
        assert_eq!(ext.get(SymbolSequence::new(vec![2; 4], 3).unwrap().rank()), 1.0);
    }

    #[test]
    fn enumeration_guard() {
        assert!(iid_extension(&Pmf::uniform(2).unwrap(), 20).is_ok());
        assert!(matches!(iid_extension(&Pmf::uniform(2).unwrap(), 21), Err(Error::EnumerationLimit { .. })));
        assert!(sequence_space(1024, 3).is_err());
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(SymbolSequence::new(vec![], 2).is_err());
        assert!(SymbolSequence::new(vec![0, 2], 2).is_err());
    }
}
