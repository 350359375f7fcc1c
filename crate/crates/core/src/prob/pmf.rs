use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Checks that `probs` lies on the simplex: finite, nonnegative, sum within tolerance.
pub(crate) fn check_simplex<T: Real>(probs: &[T], what: &str) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what}: empty alphabet")));
    }
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < T::zero() {
            return Err(Error::InvalidDistribution(format!("{what}: entry {i} = {p} is not a probability")));
        }
    }
    let total: f64 = probs.iter().map(|p| p.as_f64()).sum();
    if (total - 1.0).abs() > T::SIMPLEX_TOL {
        return Err(Error::InvalidDistribution(format!("{what}: entries sum to {total}, expected 1")));
    }
    Ok(())
}

/// Inverse-CDF lookup of `u in [0,1)` into `probs`; never returns a zero-mass index.
pub(crate) fn inverse_cdf<T: Real>(probs: &[T], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, p) in probs.iter().enumerate() {
        let p = p.as_f64();
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Validated probability mass function over `0..len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf<T = f64> {
    probs: Vec<T>,
}

impl<T: Real> Pmf<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        check_simplex(&probs, "pmf")?;
        Ok(Self { probs })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidDistribution("pmf: empty alphabet".into()));
        }
        let p = T::one() / T::from_usize_lossy(size);
        Ok(Self { probs: vec![p; size] })
    }

    pub fn point_mass(size: usize, symbol: usize) -> Result<Self> {
        if symbol >= size {
            return Err(Error::SymbolOutOfRange { symbol, alphabet: size });
        }
        let mut probs = vec![T::zero(); size];
        probs[symbol] = T::one();
        Ok(Self { probs })
    }

    /// `[1 - p, p]`.
    pub fn bernoulli(p: T) -> Result<Self> {
        Self::new(vec![T::one() - p, p])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    #[inline]
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    #[inline]
    pub fn get(&self, symbol: usize) -> T {
        self.probs[symbol]
    }

    pub fn into_vec(self) -> Vec<T> {
        self.probs
    }

    pub fn is_point_mass(&self) -> bool {
        self.probs.iter().filter(|&&p| p > T::zero()).count() == 1
    }

    /// `E[f]` for a function given as a table over the alphabet.
    pub fn expectation(&self, f: &[T]) -> Result<T> {
        if f.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "function table of length {} against pmf of length {}",
                f.len(),
                self.len()
            )));
        }
        Ok(self.probs.iter().zip(f).map(|(&p, &v)| p * v).sum())
    }

    /// Inverse-CDF sample from a uniform `u in [0,1)`.
    #[inline]
    pub fn sample_with(&self, u: f64) -> usize {
        inverse_cdf(&self.probs, u)
    }

    pub(crate) fn from_vec_unchecked(probs: Vec<T>) -> Self {
        Self { probs }
    }
}

impl<T: Real + Serialize> Serialize for Pmf<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.probs.serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Pmf<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let probs = Vec::<T>::deserialize(d)?;
        Pmf::new(probs).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_off_simplex() {
        assert!(Pmf::new(vec![0.5, 0.5 + 2e-9]).is_err());
        assert!(Pmf::new(vec![0.5, 0.5 + 5e-10]).is_ok());
        assert!(Pmf::new(vec![1.2, -0.2]).is_err());
        assert!(Pmf::<f64>::new(vec![]).is_err());
        assert!(Pmf::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn f32_uses_wider_tolerance() {
        assert!(Pmf::<f32>::new(vec![0.1, 0.2, 0.7]).is_ok());
    }

    #[test]
    fn inverse_cdf_skips_zero_mass() {
        let p = Pmf::new(vec![0.0, 0.3, 0.0, 0.7]).unwrap();
        assert_eq!(p.sample_with(0.0), 1);
        assert_eq!(p.sample_with(0.29), 1);
        assert_eq!(p.sample_with(0.31), 3);
        assert_eq!(p.sample_with(0.999_999_999_999), 3);
    }

    #[test]
    fn serde_validates() {
        let p: Pmf = serde_json::from_str("[0.25, 0.75]").unwrap();
        assert_eq!(p.probs(), &[0.25, 0.75]);
        assert!(serde_json::from_str::<Pmf>("[0.25, 0.7]").is_err());
        assert_eq!(serde_json::to_string(&p).unwrap(), "[0.25,0.75]");
    }
}
