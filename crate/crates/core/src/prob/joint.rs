use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::pmf::check_simplex;
use super::{Channel, Pmf};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Probability table over a product alphabet, row-major (axis 0 most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<T = f64> {
    shape: Vec<usize>,
    labels: Vec<String>,
    probs: Vec<T>,
}

fn default_labels(arity: usize) -> Vec<String> {
    (0..arity).map(|i| format!("axis{i}")).collect()
}

pub(crate) fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

impl<T: Real> JointPmf<T> {
    pub fn new(shape: Vec<usize>, probs: Vec<T>) -> Result<Self> {
        let labels = default_labels(shape.len());
        Self::with_labels(shape, labels, probs)
    }

    pub fn with_labels(shape: Vec<usize>, labels: Vec<String>, probs: Vec<T>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::InvalidDistribution(format!("joint: bad shape {shape:?}")));
        }
        if labels.len() != shape.len() {
            return Err(Error::ShapeMismatch(format!("{} labels for {} axes", labels.len(), shape.len())));
        }
        let cells: usize = shape.iter().product();
        if probs.len() != cells {
            return Err(Error::ShapeMismatch(format!(
                "joint of shape {shape:?} needs {cells} entries, got {}",
                probs.len()
            )));
        }
        check_simplex(&probs, "joint")?;
        Ok(Self { shape, labels, probs })
    }

    /// Two-axis joint from a matrix of rows (axis 0 indexes rows).
    pub fn from_matrix(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged joint matrix".into()));
        }
        Self::new(vec![r, c], rows.into_iter().flatten().collect())
    }

    /// Product joint `p(a) q(b)`.
    pub fn independent(p: &Pmf<T>, q: &Pmf<T>) -> Self {
        let probs = p.probs().iter().flat_map(|&a| q.probs().iter().map(move |&b| a * b)).collect();
        Self::from_parts_unchecked(vec![p.len(), q.len()], default_labels(2), probs)
    }

    pub fn from_pmf(p: &Pmf<T>) -> Self {
        Self::from_parts_unchecked(vec![p.len()], default_labels(1), p.probs().to_vec())
    }

    #[inline]
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    #[inline]
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relabel(mut self, labels: &[&str]) -> Result<Self> {
        if labels.len() != self.arity() {
            return Err(Error::ShapeMismatch(format!("{} labels for {} axes", labels.len(), self.arity())));
        }
        self.labels = labels.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    pub fn get(&self, index: &[usize]) -> T {
        debug_assert_eq!(index.len(), self.arity());
        let st = strides(&self.shape);
        self.probs[index.iter().zip(&st).map(|(i, s)| i * s).sum::<usize>()]
    }

    pub fn check_arity(&self, expected: usize) -> Result<()> {
        if self.arity() != expected {
            return Err(Error::WrongArity { expected, got: self.arity() });
        }
        Ok(())
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.arity() {
            return Err(Error::BadAxis { axis, arity: self.arity() });
        }
        Ok(())
    }

    /// Projects onto `axes` (in the given order), summing out the rest.
    pub fn keep_axes(&self, axes: &[usize]) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidParameter("must keep at least one axis".into()));
        }
        for (i, &a) in axes.iter().enumerate() {
            self.check_axis(a)?;
            if axes[..i].contains(&a) {
                return Err(Error::InvalidParameter(format!("axis {a} listed twice")));
            }
        }
        let new_shape: Vec<usize> = axes.iter().map(|&a| self.shape[a]).collect();
        let in_strides = strides(&self.shape);
        let out_strides = strides(&new_shape);
        let mut out = vec![T::zero(); new_shape.iter().product()];
        for (flat, &p) in self.probs.iter().enumerate() {
            if p == T::zero() {
                continue;
            }
            let mut o = 0;
            for (&a, &os) in axes.iter().zip(&out_strides) {
                o += (flat / in_strides[a]) % self.shape[a] * os;
            }
            out[o] = out[o] + p;
        }
        let labels = axes.iter().map(|&a| self.labels[a].clone()).collect();
        Ok(Self::from_parts_unchecked(new_shape, labels, out))
    }

    /// Sums out `axis`. A joint with one remaining axis is still a `JointPmf`;
    /// see [`JointPmf::into_pmf`].
    pub fn marginalize(&self, axis: usize) -> Result<Self> {
        self.check_axis(axis)?;
        if self.arity() == 1 {
            return Err(Error::InvalidParameter("cannot marginalize the only axis".into()));
        }
        let keep: Vec<usize> = (0..self.arity()).filter(|&a| a != axis).collect();
        self.keep_axes(&keep)
    }

    /// Single-axis marginal as a `Pmf`.
    pub fn marginal(&self, axis: usize) -> Result<Pmf<T>> {
        Ok(Pmf::from_vec_unchecked(self.keep_axes(&[axis])?.probs))
    }

    pub fn into_pmf(self) -> Result<Pmf<T>> {
        self.check_arity(1)?;
        Ok(Pmf::from_vec_unchecked(self.probs))
    }

    /// Appends a new last axis drawn through `ch` from the symbol on axis `from`.
    pub fn extend(&self, ch: &Channel<T>, from: usize, label: &str) -> Result<Self> {
        self.check_axis(from)?;
        ch.check_input(self.shape[from])?;
        let st = strides(&self.shape);
        let k = ch.outputs();
        let mut out = Vec::with_capacity(self.probs.len() * k);
        for (flat, &p) in self.probs.iter().enumerate() {
            let x = (flat / st[from]) % self.shape[from];
            out.extend(ch.row(x).iter().map(|&w| p * w));
        }
        let mut shape = self.shape.clone();
        shape.push(k);
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        Ok(Self::from_parts_unchecked(shape, labels, out))
    }

    /// `P(target | given)` as a channel; rows for zero-probability `given`
    /// symbols are uniform and reported in the second return value.
    pub fn conditional(&self, given: usize, target: usize) -> Result<(Channel<T>, Vec<usize>)> {
        if given == target {
            return Err(Error::InvalidParameter("conditioning axis equals target axis".into()));
        }
        let pair = self.keep_axes(&[given, target])?;
        let (g, t) = (pair.shape[0], pair.shape[1]);
        let mut table = pair.probs;
        let mut unreachable = Vec::new();
        let uniform = T::one() / T::from_usize_lossy(t);
        for (row_idx, row) in table.chunks_exact_mut(t).enumerate() {
            let total: T = row.iter().copied().sum();
            if total <= T::zero() {
                unreachable.push(row_idx);
                row.iter_mut().for_each(|r| *r = uniform);
            } else {
                row.iter_mut().for_each(|r| *r = *r / total);
            }
        }
        Ok((Channel::from_flat_unchecked(g, t, table), unreachable))
    }

    /// Collapses the joint into a single axis over the flattened product alphabet.
    pub fn flatten(&self) -> Pmf<T> {
        Pmf::from_vec_unchecked(self.probs.clone())
    }

    pub(crate) fn from_parts_unchecked(shape: Vec<usize>, labels: Vec<String>, probs: Vec<T>) -> Self {
        Self { shape, labels, probs }
    }
}

/// Joint of `p(x) ch(y | x)` with axes `(input, output)`.
pub fn compose<T: Real>(p: &Pmf<T>, ch: &Channel<T>) -> Result<JointPmf<T>> {
    ch.check_input(p.len())?;
    JointPmf::from_pmf(p).extend(ch, 0, "output")?.relabel(&["input", "output"])
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JointRepr<T> {
    Matrix(Vec<Vec<T>>),
    Table {
        shape: Vec<usize>,
        #[serde(default)]
        labels: Option<Vec<String>>,
        probs: Vec<T>,
    },
}

impl<T: Real + Serialize> Serialize for JointPmf<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.arity() == 2 {
            let rows: Vec<Vec<T>> = self.probs.chunks(self.shape[1]).map(<[T]>::to_vec).collect();
            JointRepr::Matrix(rows).serialize(s)
        } else {
            JointRepr::Table { shape: self.shape.clone(), labels: Some(self.labels.clone()), probs: self.probs.clone() }
                .serialize(s)
        }
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for JointPmf<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let joint = match JointRepr::<T>::deserialize(d)? {
            JointRepr::Matrix(rows) => JointPmf::from_matrix(rows),
            JointRepr::Table { shape, labels: Some(labels), probs } => JointPmf::with_labels(shape, labels, probs),
            JointRepr::Table { shape, labels: None, probs } => JointPmf::new(shape, probs),
        };
        joint.map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    type Pmf = crate::prob::Pmf<f64>;
    type Channel = crate::prob::Channel<f64>;
    type JointPmf = crate::prob::JointPmf<f64>;

    fn table_2x3() -> JointPmf {
        JointPmf::from_matrix(vec![vec![0.1, 0.2, 0.05], vec![0.3, 0.15, 0.2]]).unwrap()
    }

    #[test]
    fn marginals_by_hand() {
        let j = table_2x3();
        let rows = j.marginal(0).unwrap();
        let cols = j.marginal(1).unwrap();
        // independent summation oracle
        let m = [[0.1, 0.2, 0.05], [0.3, 0.15, 0.2]];
        for (r, row) in m.iter().enumerate() {
            assert!((rows.get(r) - row.iter().sum::<f64>()).abs() < 1e-15);
        }
        for c in 0..3 {
            assert!((cols.get(c) - (m[0][c] + m[1][c])).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_axis_and_arity() {
        let j = table_2x3();
        assert!(matches!(j.marginalize(2), Err(Error::BadAxis { .. })));
        assert!(j.keep_axes(&[0, 0]).is_err());
        assert!(j.check_arity(3).is_err());
    }

    #[test]
    fn compose_examples() {
        let p = Pmf::point_mass(3, 1).unwrap();
        let ch = Channel::from_fn(3, 2, |_, y| if y == 0 { 0.25 } else { 0.75 }).unwrap();
        let j = compose(&p, &ch).unwrap();
        for x in [0, 2] {
            assert_eq!(j.get(&[x, 0]) + j.get(&[x, 1]), 0.0);
        }

        let p = Pmf::new(vec![0.2, 0.3, 0.5]).unwrap();
        let j = compose(&p, &Channel::identity(3).unwrap()).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                let want = if x == y { p.get(x) } else { 0.0 };
                assert_eq!(j.get(&[x, y]), want);
            }
        }

        let j = compose(&Pmf::uniform(2).unwrap(), &Channel::bsc(0.1).unwrap()).unwrap();
        let want = [0.45, 0.05, 0.05, 0.45];
        for (a, b) in j.probs().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(compose(&Pmf::uniform(3).unwrap(), &Channel::bsc(0.1).unwrap()).is_err());
    }

    #[test]
    fn marginalizing_output_recovers_input() {
        let p = Pmf::new(vec![0.2, 0.3, 0.5]).unwrap();
        let ch =
            Channel::from_fn(3, 2, |x, y| if y == 0 { 0.1 * (x as f64 + 1.0) } else { 1.0 - 0.1 * (x as f64 + 1.0) })
                .unwrap();
        let back = compose(&p, &ch).unwrap().marginalize(1).unwrap().into_pmf().unwrap();
        for (a, b) in back.probs().iter().zip(p.probs()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn product_marginal_is_factor() {
        let p = Pmf::new(vec![0.4, 0.6]).unwrap();
        let q = Pmf::new(vec![0.1, 0.2, 0.7]).unwrap();
        let j = JointPmf::independent(&p, &q);
        let m = j.marginal(1).unwrap();
        for (a, b) in m.probs().iter().zip(q.probs()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn keep_axes_reorders() {
        let j = JointPmf::new(vec![2, 2, 2], (1..=8).map(|v| v as f64 / 36.0).collect()).unwrap();
        let r = j.keep_axes(&[2, 0]).unwrap();
        assert_eq!(r.shape(), &[2, 2]);
        // (c=1, a=0) sums over b: cells (0,0,1)=2 and (0,1,1)=4
        assert!((r.get(&[1, 0]) - 6.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn conditional_rows() {
        let j = table_2x3();
        let (ch, unreachable) = j.conditional(0, 1).unwrap();
        assert!(unreachable.is_empty());
        assert!((ch.prob(0, 1) - 0.2 / 0.35).abs() < 1e-15);
    }

    #[test]
    fn serde_matrix_and_table() {
        let j: JointPmf = serde_json::from_str("[[0.25,0.25],[0.25,0.25]]").unwrap();
        assert_eq!(j.shape(), &[2, 2]);
        let j: JointPmf = serde_json::from_str(r#"{"shape":[2,1,2],"probs":[0.1,0.2,0.3,0.4]}"#).unwrap();
        assert_eq!(j.arity(), 3);
        assert!(serde_json::from_str::<JointPmf>("[[0.5,0.25],[0.25,0.25]]").is_err());
    }
}
