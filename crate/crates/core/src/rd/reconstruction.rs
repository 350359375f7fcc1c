use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Deterministic symbolwise decoder `y = phi(v, b)` stored as a `|V| x |B|` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionMap {
    first: usize,
    second: usize,
    outputs: usize,
    table: Vec<usize>,
}

impl ReconstructionMap {
    pub fn new(rows: Vec<Vec<usize>>, outputs: usize) -> Result<Self> {
        let first = rows.len();
        let second = rows.first().map_or(0, Vec::len);
        if first == 0 || second == 0 {
            return Err(Error::InvalidParameter("reconstruction map: empty table".into()));
        }
        if rows.iter().any(|r| r.len() != second) {
            return Err(Error::ShapeMismatch("reconstruction map: ragged table".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        if let Some(&y) = table.iter().find(|&&y| y >= outputs) {
            return Err(Error::SymbolOutOfRange { symbol: y, alphabet: outputs });
        }
        Ok(Self { first, second, outputs, table })
    }

    pub fn from_fn(first: usize, second: usize, outputs: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        Self::new((0..first).map(|v| (0..second).map(|b| f(v, b)).collect()).collect(), outputs)
    }

    /// `phi(v, b) = v`.
    pub fn first_projection(first: usize, second: usize) -> Result<Self> {
        Self::from_fn(first, second, first, |v, _| v)
    }

    /// `phi(v, b) = b`.
    pub fn second_projection(first: usize, second: usize) -> Result<Self> {
        Self::from_fn(first, second, second, |_, b| b)
    }

    #[inline]
    pub fn apply(&self, v: usize, b: usize) -> usize {
        self.table[v * self.second + b]
    }

    pub fn first_size(&self) -> usize {
        self.first
    }

    pub fn second_size(&self) -> usize {
        self.second
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.second).map(<[usize]>::to_vec).collect()
    }
}

impl Serialize for ReconstructionMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// Deserializes from a table of rows; the output alphabet is taken as `max entry + 1`.
impl<'de> Deserialize<'de> for ReconstructionMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<usize>>::deserialize(d)?;
        let outputs = rows.iter().flatten().copied().max().map_or(1, |m| m + 1);
        ReconstructionMap::new(rows, outputs).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projections_and_bounds() {
        let first = ReconstructionMap::first_projection(3, 2).unwrap();
        let second = ReconstructionMap::second_projection(3, 2).unwrap();
        assert_eq!(first.apply(2, 1), 2);
        assert_eq!(second.apply(2, 1), 1);
        assert!(ReconstructionMap::new(vec![vec![0, 3]], 3).is_err());
        assert!(ReconstructionMap::new(vec![vec![0, 1], vec![0]], 2).is_err());
    }
}
