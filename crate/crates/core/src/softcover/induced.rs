use crate::coding::Codebook;
use crate::error::{Error, Result};
use crate::prob::{iid_extension, sequence_space, total_variation, Channel, Pmf};
use crate::scalar::Real;

pub const MAX_ENUMERATED_CODEWORDS: usize = 1 << 16;

/// Output distribution of a uniformly chosen codeword sent through the memoryless channel.
pub fn induced_sequence_dist<T: Real>(cb: &Codebook<T>, ch: &Channel<T>) -> Result<Pmf<T>> {
    if ch.inputs() != cb.alphabet() {
        return Err(Error::ShapeMismatch(format!(
            "channel has {} inputs, codebook alphabet has {}",
            ch.inputs(),
            cb.alphabet()
        )));
    }
    if cb.len() > MAX_ENUMERATED_CODEWORDS {
        return Err(Error::EnumerationLimit { required: cb.len() as u128, limit: MAX_ENUMERATED_CODEWORDS as u128 });
    }
    let k = ch.outputs();
    let size = sequence_space(k, cb.n())?;
    let mut total = vec![T::zero(); size];
    let mut cur = Vec::with_capacity(size);
    let mut next = Vec::with_capacity(size);
    for word in cb.words() {
        cur.clear();
        cur.push(T::one());
        for &v in word {
            let row = ch.row(v as usize);
            next.clear();
            for &p in &cur {
                next.extend(row.iter().map(|&q| p * q));
            }
            std::mem::swap(&mut cur, &mut next);
        }
        for (t, &p) in total.iter_mut().zip(&cur) {
            *t = *t + p;
        }
    }
    let scale = T::from_usize_lossy(cb.len());
    Pmf::new(total.into_iter().map(|p| p / scale).collect())
}

/// `|| P_{X^n} - prod target ||_TV` for the codebook-induced output distribution.
pub fn tv_to_iid<T: Real>(cb: &Codebook<T>, ch: &Channel<T>, target: &Pmf<T>) -> Result<T> {
    if target.len() != ch.outputs() {
        return Err(Error::ShapeMismatch(format!(
            "target has {} symbols, channel has {} outputs",
            target.len(),
            ch.outputs()
        )));
    }
    total_variation(&induced_sequence_dist(cb, ch)?, &iid_extension(target, cb.n())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Pmf = crate::prob::Pmf<f64>;
    type Channel = crate::prob::Channel<f64>;
    type Codebook = crate::coding::Codebook<f64>;

    #[test]
    fn output_independent_channel_gives_iid() {
        let q = Pmf::new(vec![0.3, 0.7]).unwrap();
        let ch = Channel::constant(3, &q).unwrap();
        let cb = Codebook::generate(&Pmf::uniform(3).unwrap(), 4, 0.5, 0.0, 3, 1 << 20).unwrap();
        let induced = induced_sequence_dist(&cb, &ch).unwrap();
        let iid = iid_extension(&q, 4).unwrap();
        for (a, b) in induced.probs().iter().zip(iid.probs()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(tv_to_iid(&cb, &ch, &q).unwrap() < 1e-15);
    }

    #[test]
    fn single_codeword_identity() {
        let cb = Codebook::from_codewords(&Pmf::uniform(2).unwrap(), 1, 1, &[vec![1, 0]]).unwrap();
        let id = Channel::identity(2).unwrap();
        let induced = induced_sequence_dist(&cb, &id).unwrap();
        assert_eq!(induced.probs(), &[0.0, 0.0, 1.0, 0.0]);
        assert!((tv_to_iid(&cb, &id, &Pmf::uniform(2).unwrap()).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn two_codewords_hand_mixture() {
        let cb = Codebook::from_codewords(&Pmf::uniform(2).unwrap(), 2, 1, &[vec![0, 0], vec![0, 1]]).unwrap();
        let ch = Channel::bsc(0.1).unwrap();
        let induced = induced_sequence_dist(&cb, &ch).unwrap();
        // 00: (0.81 + 0.09)/2, 01: (0.09 + 0.81)/2, 10: (0.09 + 0.01)/2, 11: (0.01 + 0.09)/2
        let expect = [0.45, 0.45, 0.05, 0.05];
        for (a, b) in induced.probs().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn mismatches_are_rejected() {
        let cb = Codebook::from_codewords(&Pmf::uniform(2).unwrap(), 1, 1, &[vec![1, 0]]).unwrap();
        assert!(induced_sequence_dist(&cb, &Channel::identity(3).unwrap()).is_err());
        assert!(tv_to_iid(&cb, &Channel::identity(2).unwrap(), &Pmf::uniform(3).unwrap()).is_err());
    }
}
