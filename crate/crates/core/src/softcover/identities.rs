use serde::Serialize;

use crate::coding::{encoder_posterior, Codebook, DEFAULT_SYMBOL_BUDGET};
use crate::error::{Error, Result};
use crate::prob::{compose, sequence_space, Channel, JointPmf, Pmf, SymbolSequence};

pub const IDENTITY_TOL: f64 = 1e-12;

/// Largest codebook ensemble that may be enumerated.
const MAX_ENSEMBLE: u128 = 1 << 16;

/// A tiny Wyner-Ziv instance small enough to enumerate sequences, messages and codebooks.
#[derive(Debug, Clone)]
pub struct QFixture {
    pub name: String,
    pub joint_xb: JointPmf<f64>,
    /// `P(v|x)`.
    pub test_channel: Channel<f64>,
    pub n: usize,
    pub num_m: usize,
    pub num_mprime: usize,
    /// Seed of the concrete codebook used for the posterior identity.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub fixture: String,
    /// `max |Q(m, m' | x^n) - encoder posterior|` over `x^n` of positive probability.
    pub posterior_max_error: f64,
    pub sequences_checked: usize,
    /// `max |E_C Q(x^n, b^n, v^n) - prod P(x, b, v)|`.
    pub ensemble_max_error: f64,
    pub codebooks_enumerated: usize,
    pub passed: bool,
}

/// Checks, by full enumeration, that the likelihood encoder is the Bayes
/// inverse of the auxiliary joint `Q`, and that `Q` averaged over the whole
/// codebook ensemble is the i.i.d. distribution `P(x, b) P(v|x)` on blocks.
pub fn verify_q_identities(fixture: &QFixture) -> Result<IdentityReport> {
    let joint = &fixture.joint_xb;
    joint.check_arity(2)?;
    let (nx, nb) = (joint.shape()[0], joint.shape()[1]);
    let n = fixture.n;
    let p_x = joint.marginal(0)?;
    let p_v = fixture.test_channel.output_pmf(&p_x)?;
    let nv = p_v.len();
    let (p_x_given_v, _) = fixture.test_channel.reverse(&p_x)?;
    let (p_b_given_x, _) = joint.conditional(0, 1)?;
    let words = fixture.num_m * fixture.num_mprime;
    if n == 0 || words == 0 {
        return Err(Error::InvalidParameter("fixture needs n >= 1 and at least one codeword".into()));
    }
    let ensemble = (nv as u128).checked_pow((n * words) as u32).unwrap_or(u128::MAX);
    if ensemble > MAX_ENSEMBLE {
        return Err(Error::EnumerationLimit { required: ensemble, limit: MAX_ENSEMBLE });
    }
    let xs = sequence_space(nx, n)?;
    let cells = sequence_space(nx * nb * nv, n)?;

    // (a) Bayes inversion of Q = uniform messages x codeword lookup x memoryless P(x|v)
    let cb = Codebook::with_sizes(&p_v, n, fixture.num_m, fixture.num_mprime, fixture.seed, DEFAULT_SYMBOL_BUDGET)?;
    let mut posterior_max_error = 0.0f64;
    let mut sequences_checked = 0;
    for xi in 0..xs {
        let x = SymbolSequence::from_rank(xi, nx, n);
        let q: Vec<f64> = cb
            .words()
            .map(|w| {
                w.iter().zip(x.symbols()).map(|(&v, &xt)| p_x_given_v.prob(v as usize, xt)).product::<f64>()
                    / words as f64
            })
            .collect();
        let qx: f64 = q.iter().sum();
        if qx <= 0.0 {
            continue;
        }
        let post = encoder_posterior(&cb, &p_x_given_v, &x)?;
        for (a, b) in q.iter().zip(post.probs()) {
            posterior_max_error = posterior_max_error.max((a / qx - b).abs());
        }
        sequences_checked += 1;
    }

    // (b) ensemble average of Q(x^n, b^n, v^n) over every codebook
    let letter = |x: usize, b: usize, v: usize| p_x_given_v.prob(v, x) * p_b_given_x.prob(x, b);
    let mut average = vec![0.0f64; cells];
    let ensemble = ensemble as usize;
    let mut book = vec![0usize; n * words];
    for c in 0..ensemble {
        let mut rest = c;
        for s in book.iter_mut().rev() {
            *s = rest % nv;
            rest /= nv;
        }
        let weight: f64 = book.iter().map(|&v| p_v.get(v)).product();
        if weight == 0.0 {
            continue;
        }
        for word in book.chunks(n) {
            // only cells whose v^n equals this codeword receive mass
            for xb in 0..sequence_space(nx * nb, n)? {
                let pairs = SymbolSequence::from_rank(xb, nx * nb, n);
                let mut p = weight / words as f64;
                let mut idx = 0;
                for (t, &pair) in pairs.symbols().iter().enumerate() {
                    let (x, b, v) = (pair / nb, pair % nb, word[t]);
                    p *= letter(x, b, v);
                    idx = idx * (nx * nb * nv) + (x * nb + b) * nv + v;
                }
                average[idx] += p;
            }
        }
    }
    let pbar: JointPmf<f64> = joint.extend(&fixture.test_channel, 0, "v")?;
    let mut ensemble_max_error = 0.0f64;
    for (idx, &avg) in average.iter().enumerate() {
        let seq = SymbolSequence::from_rank(idx, nx * nb * nv, n);
        let iid: f64 = seq
            .symbols()
            .iter()
            .map(|&s| {
                let (xb, v) = (s / nv, s % nv);
                pbar.get(&[xb / nb, xb % nb, v])
            })
            .product();
        ensemble_max_error = ensemble_max_error.max((avg - iid).abs());
    }
    let passed = posterior_max_error <= IDENTITY_TOL && ensemble_max_error <= IDENTITY_TOL;
    Ok(IdentityReport {
        fixture: fixture.name.clone(),
        posterior_max_error,
        sequences_checked,
        ensemble_max_error,
        codebooks_enumerated: ensemble,
        passed,
    })
}

/// The fixtures shipped with the artifact.
pub fn shipped_q_fixtures() -> Vec<QFixture> {
    let dsbs = |p: f64| compose(&Pmf::uniform(2).unwrap(), &Channel::bsc(p).unwrap()).unwrap();
    let skewed =
        compose(&Pmf::new(vec![0.7, 0.3]).unwrap(), &Channel::new(vec![vec![0.9, 0.1], vec![0.25, 0.75]]).unwrap())
            .unwrap();
    vec![
        QFixture {
            name: "point-mass-v".into(),
            joint_xb: dsbs(0.1),
            test_channel: Channel::constant(2, &Pmf::point_mass(2, 0).unwrap()).unwrap(),
            n: 2,
            num_m: 2,
            num_mprime: 2,
            seed: 1,
        },
        QFixture {
            name: "n1-two-codewords".into(),
            joint_xb: dsbs(0.1),
            test_channel: Channel::bsc(0.2).unwrap(),
            n: 1,
            num_m: 1,
            num_mprime: 2,
            seed: 2,
        },
        QFixture {
            name: "n2-sixteen-codebooks".into(),
            joint_xb: dsbs(0.1),
            test_channel: Channel::bsc(0.2).unwrap(),
            n: 2,
            num_m: 1,
            num_mprime: 2,
            seed: 3,
        },
        QFixture {
            name: "n3-skewed-four-codewords".into(),
            joint_xb: skewed,
            test_channel: Channel::new(vec![vec![0.85, 0.15], vec![0.3, 0.7]]).unwrap(),
            n: 3,
            num_m: 2,
            num_mprime: 2,
            seed: 4,
        },
        QFixture {
            name: "n2-eight-codewords".into(),
            joint_xb: dsbs(0.25),
            test_channel: Channel::bsc(0.1).unwrap(),
            n: 2,
            num_m: 2,
            num_mprime: 4,
            seed: 5,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_fixtures_pass() {
        for f in shipped_q_fixtures() {
            let r = verify_q_identities(&f).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.sequences_checked > 0);
        }
    }

    #[test]
    fn sixteen_codebook_ensemble() {
        let f = &shipped_q_fixtures()[2];
        assert_eq!(verify_q_identities(f).unwrap().codebooks_enumerated, 16);
    }

    #[test]
    fn n1_posterior_matches_hand_bayes_table() {
        // X uniform, V = X xor Bern(0.2): P(v) uniform, P(x|v) = BSC(0.2).
        // Codewords v(0) and v(1); Q(m | x) = P(x|v(m)) / sum_m' P(x|v(m')).
        let f = &shipped_q_fixtures()[1];
        let p_v = Pmf::uniform(2).unwrap();
        let cb = Codebook::with_sizes(&p_v, 1, 1, 2, f.seed, DEFAULT_SYMBOL_BUDGET).unwrap();
        let ch = Channel::bsc(0.2).unwrap();
        for x in 0..2 {
            let lik: Vec<f64> = cb.words().map(|w| if w[0] as usize == x { 0.8 } else { 0.2 }).collect();
            let total: f64 = lik.iter().sum();
            let post = encoder_posterior(&cb, &ch, &SymbolSequence::new(vec![x], 2).unwrap()).unwrap();
            for (a, b) in lik.iter().zip(post.probs()) {
                assert!((a / total - b).abs() < 1e-15);
            }
        }
        assert!(verify_q_identities(f).unwrap().passed);
    }

    #[test]
    fn oversized_ensemble_is_rejected() {
        let mut f = shipped_q_fixtures()[2].clone();
        f.n = 3;
        f.num_mprime = 8;
        assert!(matches!(verify_q_identities(&f), Err(Error::EnumerationLimit { .. })));
    }
}
