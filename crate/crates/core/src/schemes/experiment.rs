use rayon::prelude::*;
use serde::Serialize;

use super::bt::{BtScheme, BT_TAG};
use super::p2p::{p2p_trial, P2pConfig, P2P_TAG};
use super::trial::{MonteCarlo, TrialResult};
use super::wz::{WzScheme, WZ_TAG};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A prepared experiment.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Scheme<T = f64> {
    P2p(P2pConfig<T>),
    Wz(WzScheme<T>),
    Bt(BtScheme<T>),
}

impl<T: Real> Scheme<T> {
    pub fn tag(&self) -> &'static str {
        match self {
            Scheme::P2p(_) => P2P_TAG,
            Scheme::Wz(_) => WZ_TAG,
            Scheme::Bt(_) => BT_TAG,
        }
    }

    pub fn monte_carlo(&self) -> &MonteCarlo {
        match self {
            Scheme::P2p(c) => &c.monte_carlo,
            Scheme::Wz(s) => &s.config.monte_carlo,
            Scheme::Bt(s) => &s.config.monte_carlo,
        }
    }

    pub fn warnings(&self) -> Result<Vec<String>> {
        match self {
            Scheme::P2p(c) => c.warnings(),
            Scheme::Wz(s) => Ok(s.warnings()),
            Scheme::Bt(s) => Ok(s.warnings()),
        }
    }

    fn run_trials(&self) -> Result<Vec<TrialResult>> {
        let mc = *self.monte_carlo();
        let blocks: Vec<usize> = (0..mc.blocks()).collect();
        match self {
            Scheme::P2p(cfg) => {
                cfg.validate()?;
                let books = blocks.iter().map(|&b| cfg.codebook(b)).collect::<Result<Vec<_>>>()?;
                (0..mc.trials).into_par_iter().map(|i| p2p_trial(cfg, &books[mc.block_of(i)], i)).collect()
            }
            Scheme::Wz(s) => {
                let books = blocks.iter().map(|&b| s.codebook(b)).collect::<Result<Vec<_>>>()?;
                (0..mc.trials).into_par_iter().map(|i| s.trial(&books[mc.block_of(i)], i)).collect()
            }
            Scheme::Bt(s) => {
                let books = blocks.iter().map(|&b| s.codebooks(b)).collect::<Result<Vec<_>>>()?;
                (0..mc.trials)
                    .into_par_iter()
                    .map(|i| {
                        let (cb1, cb2) = &books[mc.block_of(i)];
                        s.trial(cb1, cb2, i)
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub scheme: &'static str,
    pub trials: usize,
    pub master_seed: u64,
    pub codebooks_used: usize,
    pub mean_distortions: Vec<f64>,
    /// Sample standard deviation over `sqrt(trials)`; zero for a single trial.
    pub std_errors: Vec<f64>,
    /// Fraction of trials whose virtual message was decoded wrongly, when the scheme has one.
    pub virtual_error_rate: Option<f64>,
    pub all_zero_likelihood_trials: usize,
    pub decode_degenerate_trials: usize,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub results: Vec<TrialResult>,
}

impl ExperimentSummary {
    /// Summary statistics of an ordered list of trial results.
    pub fn from_results(
        scheme: &'static str,
        master_seed: u64,
        codebooks_used: usize,
        warnings: Vec<String>,
        results: Vec<TrialResult>,
    ) -> Self {
        let trials = results.len();
        let k = results.first().map_or(0, |r| r.distortions.len());
        let mut mean_distortions = vec![0.0; k];
        let mut std_errors = vec![0.0; k];
        for j in 0..k {
            let mean = results.iter().map(|r| r.distortions[j]).sum::<f64>() / trials as f64;
            mean_distortions[j] = mean;
            if trials > 1 {
                let ss: f64 = results.iter().map(|r| (r.distortions[j] - mean).powi(2)).sum();
                std_errors[j] = (ss / (trials - 1) as f64 / trials as f64).sqrt();
            }
        }
        let decoded: Vec<bool> = results.iter().filter_map(|r| r.virtual_decode_ok).collect();
        let virtual_error_rate =
            (!decoded.is_empty()).then(|| decoded.iter().filter(|ok| !**ok).count() as f64 / decoded.len() as f64);
        Self {
            scheme,
            trials,
            master_seed,
            codebooks_used,
            mean_distortions,
            std_errors,
            virtual_error_rate,
            all_zero_likelihood_trials: results.iter().filter(|r| r.flags.all_zero_likelihood).count(),
            decode_degenerate_trials: results.iter().filter(|r| r.flags.decode_degenerate).count(),
            warnings,
            results,
        }
    }
}

/// Runs every trial of `scheme`; `parallelism` of `None` uses the ambient rayon pool.
///
/// Results do not depend on the degree of parallelism.
pub fn run_experiment<T: Real>(scheme: &Scheme<T>, parallelism: Option<usize>) -> Result<ExperimentSummary> {
    let mc = *scheme.monte_carlo();
    mc.validate()?;
    let warnings = scheme.warnings()?;
    let results = match parallelism {
        None => scheme.run_trials()?,
        Some(0) => return Err(Error::InvalidParameter("parallelism must be at least 1".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| scheme.run_trials())?,
    };
    Ok(ExperimentSummary::from_results(scheme.tag(), mc.master_seed, mc.blocks(), warnings, results))
}
