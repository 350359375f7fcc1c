use proptest::prelude::*;
use softcover::coding::{encoder_posterior, normalize_log_weights, Codebook};
use softcover::prob::{
    compose, conditional_mutual_information, entropy, iid_extension, mutual_information, total_variation,
};
use softcover::rd::{
    berger_tung_corner, berger_tung_sum_rate, blahut_arimoto_rd, wyner_ziv_evaluate, Corner, ReconstructionMap,
};
use softcover::softcover::{verify_q_identities, QFixture};
use softcover::{Channel64 as Channel, DistortionMeasure64 as DistortionMeasure, JointPmf64 as JointPmf, Pmf64 as Pmf};

fn normalized(w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    if s <= 0.0 {
        return vec![1.0 / w.len() as f64; w.len()];
    }
    w.iter().map(|x| x / s).collect()
}

/// Weights with a fair chance of exact zeros.
fn weights(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0f64..1.0], k)
}

fn pmf(k: usize) -> impl Strategy<Value = Pmf> {
    weights(k).prop_map(|w| Pmf::new(normalized(w)).unwrap())
}

fn channel(inputs: usize, outputs: usize) -> impl Strategy<Value = Channel> {
    prop::collection::vec(weights(outputs), inputs)
        .prop_map(|rows| Channel::new(rows.into_iter().map(normalized).collect()).unwrap())
}

fn joint(a: usize, b: usize) -> impl Strategy<Value = JointPmf> {
    weights(a * b).prop_map(move |w| JointPmf::new(vec![a, b], normalized(w)).unwrap())
}

fn sized_pair() -> impl Strategy<Value = (Pmf, Pmf)> {
    (1usize..7).prop_flat_map(|k| (pmf(k), pmf(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bounded_function_expectations((p, q) in sized_pair(), raw in prop::collection::vec(-5.0f64..5.0, 7)) {
        let f = &raw[..p.len()];
        let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let gap = (p.expectation(f).unwrap() - q.expectation(f).unwrap()).abs();
        prop_assert!(gap <= (hi - lo) * total_variation(&p, &q).unwrap() + 1e-12);
    }

    #[test]
    fn triangle_inequality((p, q, r) in (1usize..7).prop_flat_map(|k| (pmf(k), pmf(k), pmf(k)))) {
        let lhs = total_variation(&p, &q).unwrap();
        prop_assert!(lhs <= total_variation(&p, &r).unwrap() + total_variation(&r, &q).unwrap() + 1e-15);
        prop_assert!((0.0..=1.0).contains(&lhs));
    }

    #[test]
    fn common_channel_preserves_distance(
        (p, q, ch) in (1usize..7, 1usize..5).prop_flat_map(|(k, o)| (pmf(k), pmf(k), channel(k, o)))
    ) {
        let joint_tv = total_variation(&compose(&p, &ch).unwrap(), &compose(&q, &ch).unwrap()).unwrap();
        prop_assert!((joint_tv - total_variation(&p, &q).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn marginals_are_closer_than_joints((j1, j2) in (1usize..5, 1usize..5).prop_flat_map(|(a, b)| (joint(a, b), joint(a, b)))) {
        let tv = total_variation(&j1, &j2).unwrap();
        for axis in 0..2 {
            let m = total_variation(&j1.marginal(axis).unwrap(), &j2.marginal(axis).unwrap()).unwrap();
            prop_assert!(m <= tv + 1e-15);
        }
    }

    #[test]
    fn disagreement_bounds_distance(
        (k, nx, vx, swap) in (1usize..5, 1usize..4).prop_flat_map(|(k, nx)| (Just(k), Just(nx), joint(k, nx), channel(k * nx, k))),
        flip in 0.0f64..1.0,
    ) {
        // P(u, v, x) = P(v, x) [(1 - flip) 1{u = v} + flip * swap(u | v, x)]
        let mut probs = vec![0.0; k * k * nx];
        let mut disagreement = 0.0;
        for u in 0..k {
            for v in 0..k {
                for x in 0..nx {
                    let keep = if u == v { 1.0 - flip } else { 0.0 };
                    let p = vx.get(&[v, x]) * (keep + flip * swap.prob(v * nx + x, u));
                    probs[(u * k + v) * nx + x] = p;
                    if u != v {
                        disagreement += p;
                    }
                }
            }
        }
        let uvx = JointPmf::new(vec![k, k, nx], probs).unwrap();
        let ux = uvx.keep_axes(&[0, 2]).unwrap();
        let vx2 = uvx.keep_axes(&[1, 2]).unwrap();
        prop_assert!(total_variation(&ux, &vx2).unwrap() <= disagreement + 1e-12);
    }

    #[test]
    fn information_measures_are_consistent((j, ch) in (1usize..5, 1usize..5).prop_flat_map(|(a, b)| (joint(a, b), channel(b, 2)))) {
        let i = mutual_information(&j).unwrap();
        let ha = entropy(&j.marginal(0).unwrap());
        let hb = entropy(&j.marginal(1).unwrap());
        prop_assert!(i >= 0.0 && ha >= 0.0 && hb >= 0.0);
        prop_assert!(i <= ha.min(hb) + 1e-12);
        let three = j.extend(&ch, 1, "c").unwrap();
        prop_assert!(conditional_mutual_information(&three).unwrap() >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn iid_extension_marginals(p in (1usize..4).prop_flat_map(pmf), n in 1usize..6) {
        let ext = iid_extension(&p, n).unwrap();
        let k = p.len();
        prop_assert!((ext.probs().iter().sum::<f64>() - 1.0).abs() <= n as f64 * 1e-9);
        for t in 0..n {
            let mut marginal = vec![0.0; k];
            for (idx, &q) in ext.probs().iter().enumerate() {
                let symbol = (idx / k.pow((n - 1 - t) as u32)) % k;
                marginal[symbol] += q;
            }
            for (a, b) in marginal.iter().zip(p.probs()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn posterior_is_scale_invariant(logs in prop::collection::vec(-200.0f64..0.0, 1..40), shift in -500.0f64..500.0) {
        let base = normalize_log_weights(&logs).unwrap();
        let shifted: Vec<f64> = logs.iter().map(|l| l + shift).collect();
        let moved = normalize_log_weights(&shifted).unwrap();
        prop_assert!((base.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        for (a, b) in base.probs().iter().zip(moved.probs()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn posterior_matches_brute_force(n in 1usize..5, words in 1usize..9, seed in any::<u64>(), cross in 0.01f64..0.49) {
        let gen = Pmf::uniform(2).unwrap();
        let cb = Codebook::with_sizes(&gen, n, words, 1, seed, 1 << 20).unwrap();
        let ch = Channel::bsc(cross).unwrap();
        let x = softcover::prob::SymbolSequence::from_rank((seed as usize) % (1 << n), 2, n);
        let lik: Vec<f64> = cb.words()
            .map(|w| w.iter().zip(x.symbols()).map(|(&v, &s)| ch.prob(v as usize, s)).product())
            .collect();
        let total: f64 = lik.iter().sum();
        let post = encoder_posterior(&cb, &ch, &x).unwrap();
        for (a, b) in lik.iter().zip(post.probs()) {
            prop_assert!((a / total - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn regeneration_is_bit_exact(n in 1usize..10, r in 0.0f64..1.0, rp in 0.0f64..0.5, seed in any::<u64>()) {
        let gen = Pmf::new(vec![0.2, 0.5, 0.3]).unwrap();
        let a = Codebook::generate(&gen, n, r, rp, seed, 1 << 20).unwrap();
        let b = Codebook::generate(&gen, n, r, rp, seed, 1 << 20).unwrap();
        prop_assert!(a.words().eq(b.words()));
    }

    #[test]
    fn berger_tung_chain_rule(j in joint(2, 3), c1 in channel(2, 3), c2 in channel(3, 2)) {
        let d1 = DistortionMeasure::hamming(2).unwrap();
        let d2 = DistortionMeasure::new(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]).unwrap();
        let phi1 = ReconstructionMap::from_fn(3, 2, 2, |u1, _| u1.min(1)).unwrap();
        let phi2 = ReconstructionMap::from_fn(3, 2, 3, |u1, u2| (u1 + u2) % 3).unwrap();
        let sum = berger_tung_sum_rate(&j, &c1, &c2).unwrap();
        for corner in [Corner::C1, Corner::C2] {
            let pt = berger_tung_corner(&j, &c1, &c2, &phi1, &phi2, &d1, &d2, corner).unwrap();
            prop_assert!(pt.rates.iter().all(|&r| r >= 0.0));
            prop_assert!((pt.sum_rate() - sum).abs() <= 1e-9);
            prop_assert!(pt.distortions[0] <= d1.d_max() && pt.distortions[1] <= d2.d_max());
        }
    }

    #[test]
    fn tiny_auxiliary_identities(px in 0.05f64..0.95, b in 0.0f64..0.5, v in 0.0f64..0.5, n in 1usize..3, seed in any::<u64>()) {
        let fixture = QFixture {
            name: "random".into(),
            joint_xb: compose(&Pmf::bernoulli(px).unwrap(), &Channel::bsc(b).unwrap()).unwrap(),
            test_channel: Channel::bsc(v).unwrap(),
            n,
            num_m: 2,
            num_mprime: 2,
            seed,
        };
        let report = verify_q_identities(&fixture).unwrap();
        prop_assert!(report.passed, "{:?}", report);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn rate_distortion_is_nonincreasing_and_convex(p in 0.05f64..0.5) {
        let source = Pmf::bernoulli(p).unwrap();
        let d = DistortionMeasure::hamming(2).unwrap();
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * p / 10.0).collect();
        let rates: Vec<f64> = grid.iter().map(|&t| blahut_arimoto_rd(&source, &d, t).unwrap().rate()).collect();
        for w in rates.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9);
        }
        for w in rates.windows(3) {
            prop_assert!(w[1] <= 0.5 * (w[0] + w[2]) + 1e-6);
        }
    }

    #[test]
    fn side_information_never_hurts(px in 0.1f64..0.9, cross in 0.0f64..0.5, target in 0.01f64..0.2) {
        let joint = compose(&Pmf::bernoulli(px).unwrap(), &Channel::bsc(cross).unwrap()).unwrap();
        let d = DistortionMeasure::hamming(2).unwrap();
        let wz = softcover::rd::wyner_ziv_rate(&joint, &d, target).unwrap();
        let p2p = blahut_arimoto_rd(&joint.marginal(0).unwrap(), &d, target).unwrap();
        prop_assert!(wz.rate() <= p2p.rate() + 1e-3);
        let (rate, dist) = wyner_ziv_evaluate(&joint, &wz.achieving_channels[0], &wz.reconstructions[0], &d).unwrap();
        prop_assert!((rate - wz.rate()).abs() <= 1e-9);
        prop_assert!(dist <= target + 1e-6);
    }
}
