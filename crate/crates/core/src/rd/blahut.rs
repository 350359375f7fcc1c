//! Point-to-point `R(D)` by Blahut-Arimoto with an outer bisection on the slope.

use super::point::{RateDistortionPoint, SolverStatus};
use crate::error::{Error, Result};
use crate::prob::{compose, expected_distortion, mutual_information, Channel, DistortionMeasure, Pmf};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct BlahutArimotoOptions {
    /// Stop when successive rate iterates differ by less than this.
    pub rate_tol: f64,
    pub max_iterations: usize,
    /// Bisection stops once the achieved distortion is this close below the target.
    pub distortion_tol: f64,
    pub max_bisections: usize,
    /// Upper end of the initial slope bracket (bits per distortion unit), doubled until it brackets.
    pub initial_slope: f64,
}

impl Default for BlahutArimotoOptions {
    fn default() -> Self {
        Self { rate_tol: 1e-9, max_iterations: 10_000, distortion_tol: 1e-7, max_bisections: 200, initial_slope: 50.0 }
    }
}

#[derive(Debug, Clone)]
struct SlopeSolution<T> {
    /// `q(y|x)`, row-major `nx * ny`.
    channel: Vec<T>,
    distortion: T,
    iterations: usize,
    converged: bool,
}

struct Problem<'a, T> {
    p: &'a [T],
    d: &'a DistortionMeasure<T>,
    nx: usize,
    ny: usize,
    row_min: Vec<T>,
}

impl<'a, T: Real> Problem<'a, T> {
    fn new(p: &'a Pmf<T>, d: &'a DistortionMeasure<T>) -> Self {
        let (nx, ny) = (d.sources(), d.reconstructions());
        let row_min = (0..nx).map(|x| d.row(x).iter().copied().fold(T::infinity(), T::min)).collect();
        Self { p: p.probs(), d, nx, ny, row_min }
    }

    fn measure(&self, q: &[T]) -> (T, T) {
        let mut r = vec![T::zero(); self.ny];
        for x in 0..self.nx {
            for y in 0..self.ny {
                r[y] = r[y] + self.p[x] * q[x * self.ny + y];
            }
        }
        let mut rate = T::zero();
        let mut dist = T::zero();
        for x in 0..self.nx {
            if self.p[x] <= T::zero() {
                continue;
            }
            for y in 0..self.ny {
                let w = q[x * self.ny + y];
                if w > T::zero() {
                    rate = rate + self.p[x] * w * (w / r[y]).log2();
                    dist = dist + self.p[x] * w * self.d.d(x, y);
                }
            }
        }
        (rate.max(T::zero()), dist)
    }

    /// Alternating minimization at a fixed slope; `None` is the infinite-slope limit,
    /// where each row may only use its minimum-distortion reconstructions.
    fn solve(&self, slope: Option<T>, opts: &BlahutArimotoOptions) -> SlopeSolution<T> {
        let (nx, ny) = (self.nx, self.ny);
        let mut r = vec![T::one() / T::from_usize_lossy(ny); ny];
        let mut q = vec![T::zero(); nx * ny];
        let mut prev = T::infinity();
        let mut out = None;
        for it in 1..=opts.max_iterations {
            for x in 0..nx {
                let row = &mut q[x * ny..(x + 1) * ny];
                let mut total = T::zero();
                for y in 0..ny {
                    let excess = self.d.d(x, y) - self.row_min[x];
                    let w = match slope {
                        Some(s) => r[y] * (-s * excess).exp2(),
                        None if excess == T::zero() => r[y],
                        None => T::zero(),
                    };
                    row[y] = w;
                    total = total + w;
                }
                if total > T::zero() {
                    row.iter_mut().for_each(|w| *w = *w / total);
                } else {
                    // every admissible reconstruction has died out of r; fall back to the row minimizers
                    let argmins: Vec<usize> = (0..ny).filter(|&y| self.d.d(x, y) == self.row_min[x]).collect();
                    let share = T::one() / T::from_usize_lossy(argmins.len());
                    row.iter_mut().for_each(|w| *w = T::zero());
                    argmins.iter().for_each(|&y| row[y] = share);
                }
            }
            for y in 0..ny {
                r[y] = (0..nx).map(|x| self.p[x] * q[x * ny + y]).sum();
            }
            let (rate, distortion) = self.measure(&q);
            let converged = (rate - prev).abs().as_f64() < opts.rate_tol;
            if converged || it == opts.max_iterations {
                out = Some(SlopeSolution { channel: q.clone(), distortion, iterations: it, converged });
                break;
            }
            prev = rate;
        }
        out.expect("at least one iteration")
    }
}

/// `R(target_d)` for a memoryless source under `d`.
pub fn blahut_arimoto_rd<T: Real>(
    source: &Pmf<T>,
    d: &DistortionMeasure<T>,
    target_d: T,
) -> Result<RateDistortionPoint<T>> {
    blahut_arimoto_rd_with(source, d, target_d, &BlahutArimotoOptions::default())
}

pub fn blahut_arimoto_rd_with<T: Real>(
    source: &Pmf<T>,
    d: &DistortionMeasure<T>,
    target_d: T,
    opts: &BlahutArimotoOptions,
) -> Result<RateDistortionPoint<T>> {
    if d.sources() != source.len() {
        return Err(Error::ShapeMismatch(format!(
            "distortion has {} source symbols, source pmf has {}",
            d.sources(),
            source.len()
        )));
    }
    let prob = Problem::new(source, d);
    let (nx, ny) = (prob.nx, prob.ny);
    let d_min: T = (0..nx).map(|x| source.get(x) * prob.row_min[x]).sum();
    let eps = T::lit(1e-12);
    if !target_d.is_finite() || target_d < T::zero() || target_d < d_min - eps {
        return Err(Error::InfeasibleTarget {
            target: target_d.as_f64(),
            reason: format!("below the minimum achievable distortion {}", d_min),
        });
    }

    // zero-rate: best constant reconstruction
    let (y_best, d_zero) = (0..ny)
        .map(|y| (y, (0..nx).map(|x| source.get(x) * d.d(x, y)).sum::<T>()))
        .fold((0, T::infinity()), |acc, (y, v)| if v < acc.1 { (y, v) } else { acc });
    if target_d >= d_zero {
        let ch = Channel::deterministic(ny, &vec![y_best; nx])?;
        return finish(source, d, ch, SolverStatus::ZeroRate, 0);
    }

    if target_d <= d_min + eps {
        let sol = prob.solve(None, opts);
        return finish_solution(source, d, sol);
    }

    let mut total_iterations = 0;
    let mut solve = |s: T| {
        let sol = prob.solve(Some(s), opts);
        total_iterations += sol.iterations;
        sol
    };

    let mut lo = (T::zero(), None::<SlopeSolution<T>>);
    let mut hi_slope = T::lit(opts.initial_slope);
    let mut hi = solve(hi_slope);
    while hi.distortion > target_d {
        lo = (hi_slope, Some(hi));
        hi_slope = hi_slope * T::lit(2.0);
        if hi_slope > T::lit(1e12) {
            return Err(Error::InfeasibleTarget {
                target: target_d.as_f64(),
                reason: "slope bracket did not close".into(),
            });
        }
        hi = solve(hi_slope);
    }
    let tol = T::lit(opts.distortion_tol);
    for _ in 0..opts.max_bisections {
        if target_d - hi.distortion <= tol {
            break;
        }
        let mid = (lo.0 + hi_slope) / T::lit(2.0);
        if mid <= lo.0 || mid >= hi_slope {
            break;
        }
        let sol = solve(mid);
        if sol.distortion > target_d {
            lo = (mid, Some(sol));
        } else {
            hi_slope = mid;
            hi = sol;
        }
    }

    // a flat stretch of R(D) leaves a gap in D(slope); close it by mixing the bracketing channels
    let mut channel = hi.channel.clone();
    if target_d - hi.distortion > tol {
        if let Some(low) = &lo.1 {
            let lambda = (low.distortion - target_d) / (low.distortion - hi.distortion);
            channel =
                hi.channel.iter().zip(&low.channel).map(|(&h, &l)| lambda * h + (T::one() - lambda) * l).collect();
        }
    }
    let status = if hi.converged { SolverStatus::Converged } else { SolverStatus::IterationLimit };
    finish(source, d, Channel::from_flat_unchecked(nx, ny, channel), status, total_iterations)
}

fn finish_solution<T: Real>(
    source: &Pmf<T>,
    d: &DistortionMeasure<T>,
    sol: SlopeSolution<T>,
) -> Result<RateDistortionPoint<T>> {
    let status = if sol.converged { SolverStatus::Converged } else { SolverStatus::IterationLimit };
    let ch = Channel::from_flat_unchecked(d.sources(), d.reconstructions(), sol.channel);
    finish(source, d, ch, status, sol.iterations)
}

/// Re-evaluates the achieving channel through the generic probability routines.
fn finish<T: Real>(
    source: &Pmf<T>,
    d: &DistortionMeasure<T>,
    ch: Channel<T>,
    status: SolverStatus,
    iterations: usize,
) -> Result<RateDistortionPoint<T>> {
    let joint = compose(source, &ch)?;
    let rate = mutual_information(&joint)?;
    let distortion = expected_distortion(&joint, d)?.min(d.d_max());
    Ok(RateDistortionPoint {
        rates: vec![rate],
        distortions: vec![distortion],
        achieving_channels: vec![ch],
        reconstructions: Vec::new(),
        status,
        iterations,
        note: None,
    })
}
