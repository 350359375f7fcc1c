use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::{JointPmf, SymbolSequence};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Per-letter distortion table `d(x, y)` with its maximum entry cached.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMeasure<T = f64> {
    sources: usize,
    reconstructions: usize,
    table: Vec<T>,
    d_max: T,
}

impl<T: Real> DistortionMeasure<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let sources = rows.len();
        let reconstructions = rows.first().map_or(0, Vec::len);
        if sources == 0 || reconstructions == 0 {
            return Err(Error::InvalidParameter("distortion: empty table".into()));
        }
        if rows.iter().any(|r| r.len() != reconstructions) {
            return Err(Error::ShapeMismatch("distortion: ragged table".into()));
        }
        let table: Vec<T> = rows.into_iter().flatten().collect();
        if let Some(bad) = table.iter().find(|v| !v.is_finite() || **v < T::zero()) {
            return Err(Error::InvalidParameter(format!("distortion: entry {bad} is not >= 0")));
        }
        let d_max = table.iter().copied().fold(T::zero(), T::max);
        Ok(Self { sources, reconstructions, table, d_max })
    }

    /// Hamming distortion on a `size`-ary alphabet.
    pub fn hamming(size: usize) -> Result<Self> {
        Self::new((0..size).map(|x| (0..size).map(|y| if x == y { T::zero() } else { T::one() }).collect()).collect())
    }

    #[inline]
    pub fn sources(&self) -> usize {
        self.sources
    }

    #[inline]
    pub fn reconstructions(&self) -> usize {
        self.reconstructions
    }

    #[inline]
    pub fn d(&self, x: usize, y: usize) -> T {
        self.table[x * self.reconstructions + y]
    }

    #[inline]
    pub fn d_max(&self) -> T {
        self.d_max
    }

    pub fn row(&self, x: usize) -> &[T] {
        &self.table[x * self.reconstructions..(x + 1) * self.reconstructions]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.table.chunks(self.reconstructions).map(<[T]>::to_vec).collect()
    }
}

/// `(1/n) sum_t d(x_t, y_t)`.
pub fn sequence_distortion<T: Real>(d: &DistortionMeasure<T>, x: &SymbolSequence, y: &SymbolSequence) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch(format!("sequences of length {} and {}", x.len(), y.len())));
    }
    if x.alphabet() > d.sources() || y.alphabet() > d.reconstructions() {
        return Err(Error::ShapeMismatch(format!(
            "alphabets ({}, {}) exceed distortion table {}x{}",
            x.alphabet(),
            y.alphabet(),
            d.sources(),
            d.reconstructions()
        )));
    }
    let total: T = x.symbols().iter().zip(y.symbols()).map(|(&a, &b)| d.d(a, b)).sum();
    // sum of n values each <= d_max, divided by n, can overshoot by an ulp
    Ok((total / T::from_usize_lossy(x.len())).min(d.d_max()))
}

/// `sum_{x,y} j(x,y) d(x,y)`.
pub fn expected_distortion<T: Real>(j: &JointPmf<T>, d: &DistortionMeasure<T>) -> Result<T> {
    j.check_arity(2)?;
    if j.shape() != [d.sources(), d.reconstructions()] {
        return Err(Error::ShapeMismatch(format!(
            "joint shape {:?} against distortion {}x{}",
            j.shape(),
            d.sources(),
            d.reconstructions()
        )));
    }
    Ok(j.probs().iter().zip(&d.table).map(|(&p, &v)| p * v).sum())
}

impl<T: Real + Serialize> Serialize for DistortionMeasure<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for DistortionMeasure<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(d)?;
        DistortionMeasure::new(rows).map_err(de::Error::custom)
    }
}
