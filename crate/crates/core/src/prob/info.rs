//! Information measures in bits.

use super::{JointPmf, Pmf};
use crate::error::Result;
use crate::scalar::Real;

/// Negative results closer to zero than this are rounding, not information.
const CLAMP: f64 = 1e-12;

fn clamp_nonneg<T: Real>(v: T) -> T {
    if v < T::zero() && v > -T::lit(CLAMP) {
        T::zero()
    } else {
        v.max(T::zero())
    }
}

/// `H(p) = -sum p log2 p`.
pub fn entropy<T: Real>(p: &Pmf<T>) -> T {
    (-p.probs().iter().map(|&v| v.xlog2x()).sum::<T>()).max(T::zero())
}

/// Entropy of the flattened joint.
pub fn joint_entropy<T: Real>(j: &JointPmf<T>) -> T {
    (-j.probs().iter().map(|&v| v.xlog2x()).sum::<T>()).max(T::zero())
}

/// Binary entropy function `h(p)`.
pub fn binary_entropy<T: Real>(p: T) -> T {
    -(p.xlog2x() + (T::one() - p).xlog2x())
}

/// `I(A;B)` for a two-axis joint.
pub fn mutual_information<T: Real>(j: &JointPmf<T>) -> Result<T> {
    j.check_arity(2)?;
    let pa = j.marginal(0)?;
    let pb = j.marginal(1)?;
    let cols = j.shape()[1];
    let mut acc = T::zero();
    for (flat, &p) in j.probs().iter().enumerate() {
        if p <= T::zero() {
            continue;
        }
        let (a, b) = (flat / cols, flat % cols);
        acc = acc + p * (p / (pa.get(a) * pb.get(b))).log2();
    }
    Ok(clamp_nonneg(acc))
}

/// `I(axis0; axis1 | axis2)` for a three-axis joint.
pub fn conditional_mutual_information<T: Real>(j: &JointPmf<T>) -> Result<T> {
    j.check_arity(3)?;
    let s = j.shape();
    let (na, nb, nc) = (s[0], s[1], s[2]);
    let pac = j.keep_axes(&[0, 2])?;
    let pbc = j.keep_axes(&[1, 2])?;
    let pc = j.marginal(2)?;
    let mut acc = T::zero();
    for a in 0..na {
        for b in 0..nb {
            for c in 0..nc {
                let p = j.probs()[(a * nb + b) * nc + c];
                if p <= T::zero() {
                    continue;
                }
                let num = p * pc.get(c);
                let den = pac.probs()[a * nc + c] * pbc.probs()[b * nc + c];
                acc = acc + p * (num / den).log2();
            }
        }
    }
    Ok(clamp_nonneg(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    type Pmf = crate::prob::Pmf<f64>;
    type Channel = crate::prob::Channel<f64>;
    type JointPmf = crate::prob::JointPmf<f64>;
    use crate::prob::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&Pmf::point_mass(3, 1).unwrap()), 0.0);
        assert!((entropy(&Pmf::uniform(4).unwrap()) - 2.0).abs() < 1e-15);
        // closed-form binary entropy oracle
        let h = -(0.11f64 * 0.11f64.log2() + 0.89 * 0.89f64.log2());
        assert!((entropy(&Pmf::bernoulli(0.11).unwrap()) - h).abs() < 1e-15);
        assert!((h - 0.499_916).abs() < 1e-6);
        assert!((binary_entropy(0.11) - h).abs() < 1e-15);
    }

    #[test]
    fn mutual_information_examples() {
        let p = Pmf::new(vec![0.3, 0.7]).unwrap();
        let q = Pmf::new(vec![0.2, 0.5, 0.3]).unwrap();
        assert!(mutual_information(&JointPmf::independent(&p, &q)).unwrap() < 1e-15);

        let eq = compose(&Pmf::uniform(2).unwrap(), &Channel::identity(2).unwrap()).unwrap();
        assert!((mutual_information(&eq).unwrap() - 1.0).abs() < 1e-15);

        let bsc = compose(&Pmf::uniform(2).unwrap(), &Channel::bsc(0.11).unwrap()).unwrap();
        let want = 1.0 - binary_entropy(0.11);
        assert!((mutual_information(&bsc).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.500_084).abs() < 1e-6);

        let three = JointPmf::new(vec![2, 2, 2], vec![0.125; 8]).unwrap();
        assert!(mutual_information(&three).is_err());
    }

    #[test]
    fn cmi_constant_condition_is_mi() {
        let ab = compose(&Pmf::new(vec![0.4, 0.6]).unwrap(), &Channel::bsc(0.2).unwrap()).unwrap();
        let abc = ab.extend(&Channel::constant(2, &Pmf::point_mass(1, 0).unwrap()).unwrap(), 0, "c").unwrap();
        let cmi = conditional_mutual_information(&abc).unwrap();
        assert!((cmi - mutual_information(&ab).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn cmi_independent_middle_axis_is_zero() {
        let ac = compose(&Pmf::new(vec![0.4, 0.6]).unwrap(), &Channel::bsc(0.2).unwrap()).unwrap();
        let b = Pmf::new(vec![0.1, 0.3, 0.6]).unwrap();
        let acb = ac.extend(&Channel::constant(2, &b).unwrap(), 0, "b").unwrap();
        let abc = acb.keep_axes(&[0, 2, 1]).unwrap();
        assert!(conditional_mutual_information(&abc).unwrap() < 1e-15);
        assert!(conditional_mutual_information(&ac).is_err());
    }

    #[test]
    fn cmi_markov_chain_against_triple_sum() {
        // X uniform, V = BSC(0.2)(X), B = BSC(0.1)(X); target I(X;V|B)
        let bsc = |e: f64, a: usize, b: usize| if a == b { 1.0 - e } else { e };
        let mut cells = [[[0.0; 2]; 2]; 2]; // [x][v][b]
        for x in 0..2 {
            for v in 0..2 {
                for b in 0..2 {
                    cells[x][v][b] = 0.5 * bsc(0.2, x, v) * bsc(0.1, x, b);
                }
            }
        }
        let mut oracle = 0.0;
        for x in 0..2 {
            for v in 0..2 {
                for b in 0..2 {
                    let p = cells[x][v][b];
                    let pb: f64 = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| cells[i][j][b]).sum();
                    let pxb: f64 = (0..2).map(|j| cells[x][j][b]).sum();
                    let pvb: f64 = (0..2).map(|i| cells[i][v][b]).sum();
                    oracle += p * (p * pb / (pxb * pvb)).log2();
                }
            }
        }
        let x = Pmf::uniform(2).unwrap();
        let j = compose(&x, &Channel::bsc(0.2).unwrap()).unwrap().extend(&Channel::bsc(0.1).unwrap(), 0, "b").unwrap();
        let got = conditional_mutual_information(&j).unwrap();
        assert!((got - oracle).abs() < 1e-14, "{got} vs {oracle}");
        assert!(got > 0.0);
    }
}
