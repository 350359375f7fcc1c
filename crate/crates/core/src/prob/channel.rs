use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::pmf::check_simplex;
use super::Pmf;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-stochastic kernel `P(output | input)`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel<T = f64> {
    inputs: usize,
    outputs: usize,
    table: Vec<T>,
}

impl<T: Real> Channel<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDistribution("channel: no input rows".into()));
        }
        let outputs = rows[0].len();
        let mut table = Vec::with_capacity(rows.len() * outputs);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != outputs {
                return Err(Error::ShapeMismatch(format!(
                    "channel row {x} has {} outputs, row 0 has {outputs}",
                    row.len()
                )));
            }
            check_simplex(row, &format!("channel row {x}"))?;
            table.extend_from_slice(row);
        }
        Ok(Self { inputs: rows.len(), outputs, table })
    }

    /// Builds a channel from `f(x, y)`; rows are validated.
    pub fn from_fn(inputs: usize, outputs: usize, f: impl Fn(usize, usize) -> T) -> Result<Self> {
        let rows = (0..inputs).map(|x| (0..outputs).map(|y| f(x, y)).collect()).collect();
        Self::new(rows)
    }

    pub fn identity(size: usize) -> Result<Self> {
        Self::from_fn(size, size, |x, y| if x == y { T::one() } else { T::zero() })
    }

    /// Binary symmetric channel with the given crossover probability.
    pub fn bsc(crossover: T) -> Result<Self> {
        let stay = T::one() - crossover;
        Self::new(vec![vec![stay, crossover], vec![crossover, stay]])
    }

    /// Every row equal to `q`: output independent of input.
    pub fn constant(inputs: usize, q: &Pmf<T>) -> Result<Self> {
        Self::new(vec![q.probs().to_vec(); inputs])
    }

    /// Deterministic channel `y = f(x)`.
    pub fn deterministic(outputs: usize, map: &[usize]) -> Result<Self> {
        if let Some(&bad) = map.iter().find(|&&y| y >= outputs) {
            return Err(Error::SymbolOutOfRange { symbol: bad, alphabet: outputs });
        }
        Self::from_fn(map.len(), outputs, |x, y| if map[x] == y { T::one() } else { T::zero() })
    }

    #[inline]
    pub fn inputs(&self) -> usize {
        self.inputs
    }

    #[inline]
    pub fn outputs(&self) -> usize {
        self.outputs
    }

    #[inline]
    pub fn prob(&self, input: usize, output: usize) -> T {
        self.table[input * self.outputs + output]
    }

    #[inline]
    pub fn row(&self, input: usize) -> &[T] {
        &self.table[input * self.outputs..(input + 1) * self.outputs]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.table.chunks_exact(self.outputs)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(<[T]>::to_vec).collect()
    }

    /// Output distribution for the given input distribution.
    pub fn output_pmf(&self, input: &Pmf<T>) -> Result<Pmf<T>> {
        self.check_input(input.len())?;
        let mut out = vec![T::zero(); self.outputs];
        for (x, &px) in input.probs().iter().enumerate() {
            for (o, &w) in out.iter_mut().zip(self.row(x)) {
                *o = *o + px * w;
            }
        }
        Ok(Pmf::from_vec_unchecked(out))
    }

    /// Cascade `self` then `next`: `(x -> y -> z)` summed over `y`.
    pub fn then(&self, next: &Channel<T>) -> Result<Channel<T>> {
        if next.inputs != self.outputs {
            return Err(Error::ShapeMismatch(format!(
                "cascade of {}-output channel into {}-input channel",
                self.outputs, next.inputs
            )));
        }
        let mut table = vec![T::zero(); self.inputs * next.outputs];
        for x in 0..self.inputs {
            for y in 0..self.outputs {
                let w = self.prob(x, y);
                if w == T::zero() {
                    continue;
                }
                for z in 0..next.outputs {
                    let c = &mut table[x * next.outputs + z];
                    *c = *c + w * next.prob(y, z);
                }
            }
        }
        Ok(Channel { inputs: self.inputs, outputs: next.outputs, table })
    }

    /// Bayes inversion against `input`: returns `P(input | output)` and the
    /// outputs of zero probability, whose rows are set uniform.
    pub fn reverse(&self, input: &Pmf<T>) -> Result<(Channel<T>, Vec<usize>)> {
        self.check_input(input.len())?;
        let out = self.output_pmf(input)?;
        let mut unreachable = Vec::new();
        let mut table = vec![T::zero(); self.outputs * self.inputs];
        let uniform = T::one() / T::from_usize_lossy(self.inputs);
        for y in 0..self.outputs {
            let py = out.get(y);
            let row = &mut table[y * self.inputs..(y + 1) * self.inputs];
            if py <= T::zero() {
                unreachable.push(y);
                row.iter_mut().for_each(|r| *r = uniform);
                continue;
            }
            for (x, r) in row.iter_mut().enumerate() {
                *r = input.get(x) * self.prob(x, y) / py;
            }
        }
        Ok((Channel { inputs: self.outputs, outputs: self.inputs, table }, unreachable))
    }

    pub(crate) fn check_input(&self, len: usize) -> Result<()> {
        if len != self.inputs {
            return Err(Error::ShapeMismatch(format!("channel expects {} input symbols, got {len}", self.inputs)));
        }
        Ok(())
    }

    pub(crate) fn from_flat_unchecked(inputs: usize, outputs: usize, table: Vec<T>) -> Self {
        debug_assert_eq!(table.len(), inputs * outputs);
        Self { inputs, outputs, table }
    }
}

impl<T: Real + Serialize> Serialize for Channel<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Channel<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(d)?;
        Channel::new(rows).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    type Pmf = crate::prob::Pmf<f64>;
    type Channel = crate::prob::Channel<f64>;

    #[test]
    fn rejects_bad_rows() {
        assert!(Channel::new(vec![vec![0.5, 0.5], vec![0.2, 0.7]]).is_err());
        assert!(Channel::new(vec![vec![0.5, 0.5], vec![1.0]]).is_err());
        assert!(Channel::new(vec![]).is_err());
    }

    #[test]
    fn cascade_of_bscs() {
        let a = Channel::bsc(0.1).unwrap();
        let b = Channel::bsc(0.2).unwrap();
        let c = a.then(&b).unwrap();
        // 0.1 * 0.8 + 0.9 * 0.2
        assert!((c.prob(0, 1) - 0.26).abs() < 1e-15);
    }

    #[test]
    fn reverse_is_bayes() {
        let ch = Channel::bsc(0.1).unwrap();
        let p = Pmf::new(vec![0.3, 0.7]).unwrap();
        let (rev, unreachable) = ch.reverse(&p).unwrap();
        assert!(unreachable.is_empty());
        let py0 = 0.3 * 0.9 + 0.7 * 0.1;
        assert!((rev.prob(0, 0) - 0.27 / py0).abs() < 1e-15);
    }

    #[test]
    fn reverse_flags_unreachable_outputs() {
        let ch = Channel::new(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let p = Pmf::uniform(2).unwrap();
        let (rev, unreachable) = ch.reverse(&p).unwrap();
        assert_eq!(unreachable, vec![2]);
        assert_eq!(rev.row(2), &[0.5, 0.5]);
    }
}
