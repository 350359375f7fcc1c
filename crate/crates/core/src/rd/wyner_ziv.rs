//! Wyner-Ziv rate: `min I(X;V|B)` over test channels `P(v|x)` with `|V| = |X| + 1`
//! and a greedy symbolwise reconstruction `phi(v, b)`.
//!
//! The problem is nonconvex. For a fixed slope `s` the Lagrangian
//! `I(X;V|B) + s E[d]` is minimized by block-coordinate descent over the test
//! channel, the conditional `Q(v|b)` and `phi`, from many starting points.
//! The slope is bisected to bracket the target, bracket pairs are mixed
//! (rate is convex and greedy distortion concave in the test channel), and a
//! pattern search polishes the best feasible channel. The result is an upper
//! bound on the true minimum.

use rand::Rng;
use rayon::prelude::*;

use super::point::{RateDistortionPoint, SolverStatus};
use super::ReconstructionMap;
use crate::error::{Error, Result};
use crate::prob::{conditional_mutual_information, expected_distortion, Channel, DistortionMeasure, JointPmf};
use crate::rng::{derive_seed, stream};
use crate::scalar::Real;

pub const WZ_METHOD_NOTE: &str = "multistart-lagrangian+pattern-search upper bound";

#[derive(Debug, Clone)]
pub struct WynerZivOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub bisection_steps: usize,
    pub initial_slope: f64,
    /// Smallest step of the pattern search.
    pub refine_min_step: f64,
}

impl Default for WynerZivOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            seed: 0x005e_ed0f_c0de,
            max_iterations: 2000,
            bisection_steps: 48,
            initial_slope: 50.0,
            refine_min_step: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
struct Eval<T> {
    rate: T,
    distortion: T,
    phi: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Candidate<T> {
    w: Vec<T>,
    eval: Eval<T>,
}

struct Problem<'a, T> {
    nx: usize,
    nb: usize,
    nv: usize,
    ny: usize,
    /// `p(x, b)`, row-major.
    pxb: &'a [T],
    px: Vec<T>,
    pb: Vec<T>,
    d: &'a DistortionMeasure<T>,
}

impl<'a, T: Real> Problem<'a, T> {
    fn new(joint: &'a JointPmf<T>, d: &'a DistortionMeasure<T>) -> Result<Self> {
        joint.check_arity(2)?;
        let (nx, nb) = (joint.shape()[0], joint.shape()[1]);
        if d.sources() != nx {
            return Err(Error::ShapeMismatch(format!("distortion has {} source symbols, joint has {nx}", d.sources())));
        }
        Ok(Self {
            nx,
            nb,
            nv: nx + 1,
            ny: d.reconstructions(),
            pxb: joint.probs(),
            px: joint.marginal(0)?.into_vec(),
            pb: joint.marginal(1)?.into_vec(),
            d,
        })
    }

    #[inline]
    fn pxb(&self, x: usize, b: usize) -> T {
        self.pxb[x * self.nb + b]
    }

    /// Greedy `phi` cell by cell; returns the cell's best reconstruction and cost.
    fn best_y(&self, w: &[T], v: usize, b: usize) -> (usize, T) {
        let mut best = (0, T::infinity());
        for y in 0..self.ny {
            let mut cost = T::zero();
            for x in 0..self.nx {
                cost = cost + self.pxb(x, b) * w[x * self.nv + v] * self.d.d(x, y);
            }
            if cost < best.1 {
                best = (y, cost);
            }
        }
        best
    }

    fn evaluate(&self, w: &[T]) -> Eval<T> {
        let (nx, nb, nv) = (self.nx, self.nb, self.nv);
        let mut phi = vec![0; nv * nb];
        let mut distortion = T::zero();
        let mut pvb = vec![T::zero(); nv * nb];
        for v in 0..nv {
            for b in 0..nb {
                let (y, c) = self.best_y(w, v, b);
                phi[v * nb + b] = y;
                distortion = distortion + c;
                pvb[v * nb + b] = (0..nx).map(|x| self.pxb(x, b) * w[x * nv + v]).sum();
            }
        }
        let mut rate = T::zero();
        for x in 0..nx {
            for b in 0..nb {
                let p = self.pxb(x, b);
                if p <= T::zero() {
                    continue;
                }
                for v in 0..nv {
                    let wv = w[x * nv + v];
                    if wv > T::zero() {
                        rate = rate + p * wv * (wv * self.pb[b] / pvb[v * nb + b]).log2();
                    }
                }
            }
        }
        Eval { rate: rate.max(T::zero()), distortion, phi }
    }

    /// Block-coordinate descent on `I(X;V|B) + s E[d]` from `w`.
    fn descend(&self, mut w: Vec<T>, slope: T, max_iterations: usize) -> (Candidate<T>, usize, bool) {
        let (nx, nb, nv) = (self.nx, self.nb, self.nv);
        let mut eval = self.evaluate(&w);
        let mut objective = eval.rate + slope * eval.distortion;
        let mut cost = vec![T::zero(); nv];
        for it in 1..=max_iterations {
            // Q(v|b) and phi from the current channel
            let mut log_q = vec![T::zero(); nv * nb];
            for v in 0..nv {
                for b in 0..nb {
                    let pvb: T = (0..nx).map(|x| self.pxb(x, b) * w[x * nv + v]).sum();
                    log_q[v * nb + b] = if self.pb[b] > T::zero() { (pvb / self.pb[b]).log2() } else { T::zero() };
                }
            }
            let phi = &eval.phi;
            for x in 0..nx {
                if self.px[x] <= T::zero() {
                    continue;
                }
                for (v, c) in cost.iter_mut().enumerate() {
                    let mut acc = T::zero();
                    for b in 0..nb {
                        let pb_x = self.pxb(x, b) / self.px[x];
                        if pb_x > T::zero() {
                            acc = acc + pb_x * (log_q[v * nb + b] - slope * self.d.d(x, phi[v * nb + b]));
                        }
                    }
                    *c = acc;
                }
                let top = cost.iter().copied().fold(T::neg_infinity(), T::max);
                let row = &mut w[x * nv..(x + 1) * nv];
                let mut total = T::zero();
                for (r, &c) in row.iter_mut().zip(&cost) {
                    *r = if c == T::neg_infinity() { T::zero() } else { (c - top).exp2() };
                    total = total + *r;
                }
                row.iter_mut().for_each(|r| *r = *r / total);
            }
            eval = self.evaluate(&w);
            let next = eval.rate + slope * eval.distortion;
            let settled = (objective - next).abs() <= T::lit(1e-13) * objective.abs().max(T::one());
            objective = next;
            if settled {
                return (Candidate { w, eval }, it, true);
            }
        }
        (Candidate { w, eval }, max_iterations, false)
    }

    fn start(&self, restart: usize, seed: u64) -> Vec<T> {
        let (nx, nv) = (self.nx, self.nv);
        if restart == 0 {
            // softened identity on the first |X| symbols
            let spread = T::lit(0.1) / T::from_usize_lossy(nv - 1);
            return (0..nx * nv).map(|i| if i / nv == i % nv { T::lit(0.9) } else { spread }).collect();
        }
        let mut rng = stream(derive_seed(seed, "wz-restart", restart as u64));
        let mut w = Vec::with_capacity(nx * nv);
        for _ in 0..nx {
            let row: Vec<f64> = (0..nv).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let total: f64 = row.iter().sum();
            w.extend(row.into_iter().map(|e| T::lit(e / total)));
        }
        w
    }

    /// Best of all restarts at one slope; ties go to the lowest restart index.
    fn solve_slope(&self, slope: T, opts: &WynerZivOptions) -> (Candidate<T>, usize, bool) {
        let runs: Vec<(Candidate<T>, usize, bool)> = (0..opts.restarts.max(1))
            .into_par_iter()
            .map(|k| self.descend(self.start(k, opts.seed), slope, opts.max_iterations))
            .collect();
        let iterations = runs.iter().map(|r| r.1).sum();
        let all_converged = runs.iter().all(|r| r.2);
        let best = runs
            .into_iter()
            .map(|r| r.0)
            .reduce(|a, b| {
                let la = a.eval.rate + slope * a.eval.distortion;
                let lb = b.eval.rate + slope * b.eval.distortion;
                if lb < la {
                    b
                } else {
                    a
                }
            })
            .expect("at least one restart");
        (best, iterations, all_converged)
    }

    /// Pattern search on `rate` subject to `distortion <= target`.
    fn refine(&self, start: Candidate<T>, target: T, min_step: f64) -> Candidate<T> {
        let (nx, nv) = (self.nx, self.nv);
        let slack = T::lit(1e-12);
        let mut best = start;
        let mut step = 0.1;
        while step >= min_step {
            let s = T::lit(step);
            for _pass in 0..200 {
                let mut improved = false;
                for from in 0..nv {
                    for to in 0..nv {
                        if from == to {
                            continue;
                        }
                        // one row at a time, then all rows proportionally
                        for row in (0..nx).map(Some).chain(std::iter::once(None)) {
                            let mut w = best.w.clone();
                            let mut moved = false;
                            for x in 0..nx {
                                if row.is_some_and(|r| r != x) || self.px[x] <= T::zero() {
                                    continue;
                                }
                                let have = w[x * nv + from];
                                let amount = match row {
                                    Some(_) => s.min(have),
                                    None => s * have,
                                };
                                if amount > T::zero() {
                                    w[x * nv + from] = have - amount;
                                    w[x * nv + to] = w[x * nv + to] + amount;
                                    moved = true;
                                }
                            }
                            if !moved {
                                continue;
                            }
                            let eval = self.evaluate(&w);
                            if eval.distortion <= target + slack && eval.rate < best.eval.rate - T::lit(1e-15) {
                                best = Candidate { w, eval };
                                improved = true;
                            }
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            step /= 2.0;
        }
        best
    }
}

/// Greedy reconstruction `phi(v, b) = argmin_y sum_x p(x, b) P(v|x) d(x, y)`.
pub fn optimal_reconstruction<T: Real>(
    joint_xb: &JointPmf<T>,
    test_channel: &Channel<T>,
    d: &DistortionMeasure<T>,
) -> Result<ReconstructionMap> {
    joint_xb.check_arity(2)?;
    let (nx, nb) = (joint_xb.shape()[0], joint_xb.shape()[1]);
    test_channel.check_input(nx)?;
    if d.sources() != nx {
        return Err(Error::ShapeMismatch("distortion and joint disagree on |X|".into()));
    }
    let nv = test_channel.outputs();
    ReconstructionMap::from_fn(nv, nb, d.reconstructions(), |v, b| {
        let mut best = (0, T::infinity());
        for y in 0..d.reconstructions() {
            let cost: T = (0..nx).map(|x| joint_xb.get(&[x, b]) * test_channel.prob(x, v) * d.d(x, y)).sum();
            if cost < best.1 {
                best = (y, cost);
            }
        }
        best.0
    })
}

/// `(I(X;V|B), E[d(X, phi(V, B))])` for the chain `V - X - B`, computed through the probability routines.
pub fn wyner_ziv_evaluate<T: Real>(
    joint_xb: &JointPmf<T>,
    test_channel: &Channel<T>,
    phi: &ReconstructionMap,
    d: &DistortionMeasure<T>,
) -> Result<(T, T)> {
    joint_xb.check_arity(2)?;
    let (nx, nb) = (joint_xb.shape()[0], joint_xb.shape()[1]);
    let nv = test_channel.outputs();
    if phi.first_size() != nv || phi.second_size() != nb || phi.outputs() > d.reconstructions() || d.sources() != nx {
        return Err(Error::ShapeMismatch("reconstruction map, channel and distortion disagree".into()));
    }
    let xbv = joint_xb.extend(test_channel, 0, "v")?;
    let xvb = xbv.keep_axes(&[0, 2, 1])?;
    let rate = conditional_mutual_information(&xvb)?;
    let ny = d.reconstructions();
    let mut xy = vec![T::zero(); nx * ny];
    for x in 0..nx {
        for b in 0..nb {
            for v in 0..nv {
                let y = phi.apply(v, b);
                xy[x * ny + y] = xy[x * ny + y] + xbv.get(&[x, b, v]);
            }
        }
    }
    let xy = JointPmf::from_parts_unchecked(vec![nx, ny], vec!["x".into(), "y".into()], xy);
    Ok((rate, expected_distortion(&xy, d)?.min(d.d_max())))
}

pub fn wyner_ziv_rate<T: Real>(
    joint: &JointPmf<T>,
    d: &DistortionMeasure<T>,
    target_d: T,
) -> Result<RateDistortionPoint<T>> {
    wyner_ziv_rate_with(joint, d, target_d, &WynerZivOptions::default())
}

pub fn wyner_ziv_rate_with<T: Real>(
    joint: &JointPmf<T>,
    d: &DistortionMeasure<T>,
    target_d: T,
    opts: &WynerZivOptions,
) -> Result<RateDistortionPoint<T>> {
    let prob = Problem::new(joint, d)?;
    let (nx, nv) = (prob.nx, prob.nv);
    let eps = T::lit(1e-12);

    let d_min: T = (0..nx).map(|x| prob.px[x] * d.row(x).iter().copied().fold(T::infinity(), T::min)).sum();
    if !target_d.is_finite() || target_d < T::zero() || target_d < d_min - eps {
        return Err(Error::InfeasibleTarget {
            target: target_d.as_f64(),
            reason: format!("below the minimum achievable distortion {d_min}"),
        });
    }

    // V constant: reconstruction from side information alone
    let constant: Vec<T> = (0..nx * nv).map(|i| if i % nv == 0 { T::one() } else { T::zero() }).collect();
    let zero_rate = prob.evaluate(&constant);
    if target_d >= zero_rate.distortion {
        return finish(joint, d, nx, nv, constant, SolverStatus::ZeroRate, 0);
    }

    let identity: Vec<T> = (0..nx * nv).map(|i| if i / nv == i % nv { T::one() } else { T::zero() }).collect();
    let lossless = Candidate { eval: prob.evaluate(&identity), w: identity };

    let mut iterations = 0;
    let mut converged = true;
    let mut feasible: Vec<Candidate<T>> = Vec::new();
    let mut infeasible: Vec<Candidate<T>> = Vec::new();
    if lossless.eval.distortion <= target_d + eps {
        feasible.push(lossless.clone());
    }

    if target_d > d_min + eps {
        let mut run = |s: T, feasible: &mut Vec<Candidate<T>>, infeasible: &mut Vec<Candidate<T>>| -> bool {
            let (c, its, ok) = prob.solve_slope(s, opts);
            iterations += its;
            converged &= ok;
            let hit = c.eval.distortion <= target_d;
            if hit {
                feasible.push(c)
            } else {
                infeasible.push(c)
            }
            hit
        };
        let mut lo = T::zero();
        let mut hi = T::lit(opts.initial_slope);
        while !run(hi, &mut feasible, &mut infeasible) {
            lo = hi;
            hi = hi * T::lit(2.0);
            if hi > T::lit(1e9) {
                break;
            }
        }
        for _ in 0..opts.bisection_steps {
            let mid = (lo + hi) / T::lit(2.0);
            if run(mid, &mut feasible, &mut infeasible) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // mixtures of bracketing solutions stay feasible at the interpolated distortion
        let mut mixed = Vec::new();
        for a in &infeasible {
            for b in &feasible {
                let span = a.eval.distortion - b.eval.distortion;
                if span <= T::zero() {
                    continue;
                }
                let lambda = (a.eval.distortion - target_d) / span;
                let w: Vec<T> = b.w.iter().zip(&a.w).map(|(&x, &y)| lambda * x + (T::one() - lambda) * y).collect();
                let eval = prob.evaluate(&w);
                if eval.distortion <= target_d + eps {
                    mixed.push(Candidate { w, eval });
                }
            }
        }
        feasible.extend(mixed);
    }

    let best = feasible.into_iter().reduce(|a, b| if b.eval.rate < a.eval.rate { b } else { a }).unwrap_or(lossless);
    let refined = prob.refine(best, target_d, opts.refine_min_step);
    let status = if converged { SolverStatus::Converged } else { SolverStatus::IterationLimit };
    finish(joint, d, nx, nv, refined.w, status, iterations)
}

fn finish<T: Real>(
    joint: &JointPmf<T>,
    d: &DistortionMeasure<T>,
    nx: usize,
    nv: usize,
    w: Vec<T>,
    status: SolverStatus,
    iterations: usize,
) -> Result<RateDistortionPoint<T>> {
    // renormalize rows against drift from repeated mass moves
    let mut w = w;
    for row in w.chunks_mut(nv) {
        let total: T = row.iter().copied().sum();
        row.iter_mut().for_each(|r| *r = (*r / total).max(T::zero()));
    }
    let channel = Channel::from_flat_unchecked(nx, nv, w);
    let phi = optimal_reconstruction(joint, &channel, d)?;
    let (rate, distortion) = wyner_ziv_evaluate(joint, &channel, &phi, d)?;
    Ok(RateDistortionPoint {
        rates: vec![rate],
        distortions: vec![distortion],
        achieving_channels: vec![channel],
        reconstructions: vec![phi],
        status,
        iterations,
        note: Some(WZ_METHOD_NOTE.to_string()),
    })
}
