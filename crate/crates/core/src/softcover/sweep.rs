use rayon::prelude::*;
use serde::Serialize;

use super::induced::tv_to_iid;
use crate::coding::{Codebook, DEFAULT_SYMBOL_BUDGET};
use crate::error::{Error, Result};
use crate::prob::{compose, mutual_information, Channel, JointPmf, Pmf};
use crate::rng::{hash_words, tag_hash};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoftcoverCell {
    pub rate: f64,
    pub n: usize,
    pub codebook_size: usize,
    /// Exact TV of each codebook, in generation order.
    pub tvs: Vec<f64>,
    pub mean_tv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoftcoverReport {
    /// `"x"` for the plain sweep, `"xb"` for the Wyner-Ziv pair-output variant.
    pub variant: &'static str,
    pub mutual_information: f64,
    pub codebooks_per_cell: usize,
    pub seed: u64,
    /// Cells in `rates x ns` order, rates outermost.
    pub cells: Vec<SoftcoverCell>,
}

impl SoftcoverReport {
    pub fn cell(&self, rate: f64, n: usize) -> Option<&SoftcoverCell> {
        self.cells.iter().find(|c| c.rate == rate && c.n == n)
    }
}

fn codebook_seed(seed: u64, variant: &str, rate: f64, n: usize, k: usize) -> u64 {
    hash_words(seed, &[tag_hash(variant), rate.to_bits(), n as u64, k as u64])
}

#[allow(clippy::too_many_arguments)]
fn sweep<T: Real>(
    variant: &'static str,
    gen: &Pmf<T>,
    ch: &Channel<T>,
    target: &Pmf<T>,
    info: f64,
    rates: &[f64],
    ns: &[usize],
    codebooks_per_cell: usize,
    seed: u64,
) -> Result<SoftcoverReport> {
    if codebooks_per_cell == 0 {
        return Err(Error::InvalidParameter("codebooks_per_cell must be at least 1".into()));
    }
    if rates.is_empty() || ns.is_empty() {
        return Err(Error::InvalidParameter("rates and blocklengths must be nonempty".into()));
    }
    let cells: Vec<(f64, usize)> = rates.iter().flat_map(|&r| ns.iter().map(move |&n| (r, n))).collect();
    for &(r, n) in &cells {
        if !r.is_finite() || r < 0.0 || n == 0 {
            return Err(Error::InvalidParameter(format!("cell (rate {r}, n {n}) is invalid")));
        }
    }
    let jobs: Vec<(usize, usize)> =
        (0..cells.len()).flat_map(|c| (0..codebooks_per_cell).map(move |k| (c, k))).collect();
    let tvs = jobs
        .par_iter()
        .map(|&(c, k)| {
            let (rate, n) = cells[c];
            let cb =
                Codebook::generate(gen, n, rate, 0.0, codebook_seed(seed, variant, rate, n, k), DEFAULT_SYMBOL_BUDGET)?;
            Ok((cb.len(), tv_to_iid(&cb, ch, target)?.as_f64()))
        })
        .collect::<Result<Vec<_>>>()?;
    let cells = cells
        .iter()
        .zip(tvs.chunks(codebooks_per_cell))
        .map(|(&(rate, n), chunk)| {
            let tvs: Vec<f64> = chunk.iter().map(|&(_, tv)| tv).collect();
            SoftcoverCell {
                rate,
                n,
                codebook_size: chunk[0].0,
                mean_tv: tvs.iter().sum::<f64>() / tvs.len() as f64,
                tvs,
            }
        })
        .collect();
    Ok(SoftcoverReport { variant, mutual_information: info, codebooks_per_cell, seed, cells })
}

/// Exact soft-covering sweep for a joint over `(X, Y)`: codebooks from `P(y)`,
/// channel `P(x|y)`, TV measured against the i.i.d. `P(x)` product.
pub fn softcover_sweep<T: Real>(
    joint_xy: &JointPmf<T>,
    rates: &[f64],
    ns: &[usize],
    codebooks_per_cell: usize,
    seed: u64,
) -> Result<SoftcoverReport> {
    joint_xy.check_arity(2)?;
    let p_x = joint_xy.marginal(0)?;
    let p_y = joint_xy.marginal(1)?;
    let (p_x_given_y, _) = joint_xy.conditional(1, 0)?;
    let info = mutual_information(joint_xy)?.as_f64();
    sweep("x", &p_y, &p_x_given_y, &p_x, info, rates, ns, codebooks_per_cell, seed)
}

/// Pair-output variant: codebooks from `P(v)`, channel `P(x, b | v)` through
/// `V - X - B`, TV measured against the i.i.d. `P(x, b)` product.
pub fn softcover_sweep_wz<T: Real>(
    joint_xb: &JointPmf<T>,
    test_channel: &Channel<T>,
    rates: &[f64],
    ns: &[usize],
    codebooks_per_cell: usize,
    seed: u64,
) -> Result<SoftcoverReport> {
    joint_xb.check_arity(2)?;
    let (nx, nb) = (joint_xb.shape()[0], joint_xb.shape()[1]);
    let p_x = joint_xb.marginal(0)?;
    let p_v = test_channel.output_pmf(&p_x)?;
    let (p_x_given_v, _) = test_channel.reverse(&p_x)?;
    let (p_b_given_x, _) = joint_xb.conditional(0, 1)?;
    let p_xb_given_v = Channel::from_fn(p_v.len(), nx * nb, |v, xb| {
        let (x, b) = (xb / nb, xb % nb);
        p_x_given_v.prob(v, x) * p_b_given_x.prob(x, b)
    })?;
    let info = mutual_information(&compose(&p_v, &p_xb_given_v)?)?.as_f64();
    sweep("xb", &p_v, &p_xb_given_v, &joint_xb.flatten(), info, rates, ns, codebooks_per_cell, seed)
}
