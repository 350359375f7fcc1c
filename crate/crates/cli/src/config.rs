//! JSON experiment configurations and their conversion into library objects.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use softcover::prob::{Channel, DistortionMeasure, JointPmf, Pmf};
use softcover::rd::{optimal_bt_reconstruction, optimal_reconstruction, ReconstructionMap};
use softcover::schemes::{BtConfig, BtScheme, MonteCarlo, P2pConfig, WzConfig, WzScheme};
use softcover::softcover::QFixture;

use crate::CliError;

fn default_codebooks() -> usize {
    10
}

fn default_problem() -> String {
    "problem".to_string()
}

/// A distortion table, or `"hamming"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistortionSpec {
    Named(String),
    Table(Vec<Vec<f64>>),
}

impl Default for DistortionSpec {
    fn default() -> Self {
        DistortionSpec::Named("hamming".into())
    }
}

impl DistortionSpec {
    pub fn build(&self, sources: usize, reconstructions: usize) -> Result<DistortionMeasure, CliError> {
        let d = match self {
            DistortionSpec::Named(name) if name == "hamming" => {
                let rows = (0..sources)
                    .map(|x| (0..reconstructions).map(|y| if x == y { 0.0 } else { 1.0 }).collect())
                    .collect();
                DistortionMeasure::new(rows).map_err(CliError::config)?
            }
            DistortionSpec::Named(name) => {
                return Err(CliError::Config(format!("unknown distortion measure {name:?}")))
            }
            DistortionSpec::Table(rows) => DistortionMeasure::new(rows.clone()).map_err(CliError::config)?,
        };
        if d.sources() != sources || d.reconstructions() != reconstructions {
            return Err(CliError::Config(format!(
                "distortion table is {}x{}, expected {sources}x{reconstructions}",
                d.sources(),
                d.reconstructions()
            )));
        }
        Ok(d)
    }

    /// Like [`build`](Self::build) but with the reconstruction alphabet taken from the table.
    pub fn build_square_default(&self, sources: usize) -> Result<DistortionMeasure, CliError> {
        match self {
            DistortionSpec::Table(rows) => {
                let ny = rows.first().map_or(0, Vec::len);
                self.build(sources, ny)
            }
            DistortionSpec::Named(_) => self.build(sources, sources),
        }
    }
}

/// A reconstruction table, `"greedy"`, `"first"` or `"second"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhiSpec {
    Named(String),
    Table(Vec<Vec<usize>>),
}

impl Default for PhiSpec {
    fn default() -> Self {
        PhiSpec::Named("greedy".into())
    }
}

impl PhiSpec {
    fn build(
        &self,
        first: usize,
        second: usize,
        outputs: usize,
        greedy: impl FnOnce() -> softcover::Result<ReconstructionMap>,
    ) -> Result<ReconstructionMap, CliError> {
        let phi = match self {
            PhiSpec::Named(n) if n == "greedy" => greedy(),
            PhiSpec::Named(n) if n == "first" => ReconstructionMap::first_projection(first, second),
            PhiSpec::Named(n) if n == "second" => ReconstructionMap::second_projection(first, second),
            PhiSpec::Named(n) => return Err(CliError::Config(format!("unknown reconstruction map {n:?}"))),
            PhiSpec::Table(rows) => ReconstructionMap::new(rows.clone(), outputs),
        }
        .map_err(CliError::config)?;
        if phi.first_size() != first || phi.second_size() != second || phi.outputs() > outputs {
            return Err(CliError::Config(format!(
                "reconstruction map is {}x{} with {} outputs, expected {first}x{second} with at most {outputs}",
                phi.first_size(),
                phi.second_size(),
                phi.outputs()
            )));
        }
        Ok(phi)
    }
}

/// Wyner-Ziv rates, explicit or as margins around the information quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WzRates {
    Explicit(WzExplicitRates),
    Margins(Margins),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WzExplicitRates {
    pub r: f64,
    pub rprime: f64,
}

/// `cover_margin` is added above the covering bound; `binning_margin` is
/// subtracted from the binning bound (a negative value deliberately violates it).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Margins {
    pub cover_margin: f64,
    pub binning_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BtRates {
    Explicit(BtExplicitRates),
    Margins(Margins),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BtExplicitRates {
    pub r1: f64,
    pub r2: f64,
    pub r2_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct P2pSpec {
    pub source: Pmf,
    /// Forward test channel `P(y|x)`.
    pub test_channel: Channel,
    #[serde(default)]
    pub distortion: DistortionSpec,
    pub n: usize,
    pub rate: f64,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_codebooks")]
    pub codebooks_per_experiment: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WzSpec {
    pub joint_xb: JointPmf,
    /// `P(v|x)`.
    pub test_channel: Channel,
    #[serde(default)]
    pub phi: PhiSpec,
    #[serde(default)]
    pub distortion: DistortionSpec,
    pub n: usize,
    pub rates: WzRates,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_codebooks")]
    pub codebooks_per_experiment: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BtSpec {
    pub joint_x1x2: JointPmf,
    pub ch1: Channel,
    pub ch2: Channel,
    #[serde(default)]
    pub phi1: PhiSpec,
    #[serde(default)]
    pub phi2: PhiSpec,
    #[serde(default)]
    pub d1: DistortionSpec,
    #[serde(default)]
    pub d2: DistortionSpec,
    pub n: usize,
    pub rates: BtRates,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_codebooks")]
    pub codebooks_per_experiment: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairOutputSpec {
    pub joint_xb: JointPmf,
    pub test_channel: Channel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoftcoverSpec {
    /// Joint over `(X, Y)`; codewords are drawn from the `Y` marginal.
    pub joint_xy: JointPmf,
    pub rates: Vec<f64>,
    pub ns: Vec<usize>,
    pub codebooks_per_cell: usize,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_output: Option<PairOutputSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RdSpec {
    #[serde(default = "default_problem")]
    pub problem: String,
    pub source: Pmf,
    #[serde(default)]
    pub distortion: DistortionSpec,
    pub targets: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WzRateSpec {
    #[serde(default = "default_problem")]
    pub problem: String,
    pub joint_xb: JointPmf,
    #[serde(default)]
    pub distortion: DistortionSpec,
    pub targets: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    /// Restart seed; the solver default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CornerSpec {
    C1,
    C2,
}

fn default_corners() -> Vec<CornerSpec> {
    vec![CornerSpec::C1, CornerSpec::C2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BtCornerSpec {
    #[serde(default = "default_problem")]
    pub problem: String,
    pub joint_x1x2: JointPmf,
    pub ch1: Channel,
    pub ch2: Channel,
    #[serde(default)]
    pub phi1: PhiSpec,
    #[serde(default)]
    pub phi2: PhiSpec,
    #[serde(default)]
    pub d1: DistortionSpec,
    #[serde(default)]
    pub d2: DistortionSpec,
    #[serde(default = "default_corners")]
    pub corners: Vec<CornerSpec>,
    /// Weights `lambda` for `lambda * C1 + (1 - lambda) * C2`.
    #[serde(default)]
    pub time_share: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureSpec {
    pub name: String,
    pub joint_xb: JointPmf,
    pub test_channel: Channel,
    pub n: usize,
    pub num_m: usize,
    pub num_mprime: usize,
    pub seed: u64,
}

impl From<&FixtureSpec> for QFixture {
    fn from(f: &FixtureSpec) -> Self {
        QFixture {
            name: f.name.clone(),
            joint_xb: f.joint_xb.clone(),
            test_channel: f.test_channel.clone(),
            n: f.n,
            num_m: f.num_m,
            num_mprime: f.num_mprime,
            seed: f.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitiesSpec {
    pub fixtures: Vec<FixtureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// Any experiment, tagged by `"scheme"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    P2p(P2pSpec),
    Wz(WzSpec),
    Bt(BtSpec),
    Softcover(SoftcoverSpec),
    Rd(RdSpec),
    WzRate(WzRateSpec),
    BtCorner(BtCornerSpec),
    VerifyIdentities(IdentitiesSpec),
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn scheme(&self) -> &'static str {
        match self {
            ExperimentConfig::P2p(_) => "p2p",
            ExperimentConfig::Wz(_) => "wz",
            ExperimentConfig::Bt(_) => "bt",
            ExperimentConfig::Softcover(_) => "softcover",
            ExperimentConfig::Rd(_) => "rd",
            ExperimentConfig::WzRate(_) => "wz-rate",
            ExperimentConfig::BtCorner(_) => "bt-corner",
            ExperimentConfig::VerifyIdentities(_) => "verify-identities",
        }
    }

    pub fn out(&self) -> Option<&Path> {
        match self {
            ExperimentConfig::P2p(s) => s.out.as_deref(),
            ExperimentConfig::Wz(s) => s.out.as_deref(),
            ExperimentConfig::Bt(s) => s.out.as_deref(),
            ExperimentConfig::Softcover(s) => s.out.as_deref(),
            ExperimentConfig::Rd(s) => s.out.as_deref(),
            ExperimentConfig::WzRate(s) => s.out.as_deref(),
            ExperimentConfig::BtCorner(s) => s.out.as_deref(),
            ExperimentConfig::VerifyIdentities(s) => s.out.as_deref(),
        }
    }

    /// Applies command-line overrides; returns notes for overrides that do not apply.
    pub fn apply_overrides(&mut self, seed: Option<u64>, trials: Option<usize>, n: Option<usize>) -> Vec<String> {
        let mut ignored = Vec::new();
        match self {
            ExperimentConfig::P2p(s) => {
                s.master_seed = seed.unwrap_or(s.master_seed);
                s.trials = trials.unwrap_or(s.trials);
                s.n = n.unwrap_or(s.n);
            }
            ExperimentConfig::Wz(s) => {
                s.master_seed = seed.unwrap_or(s.master_seed);
                s.trials = trials.unwrap_or(s.trials);
                s.n = n.unwrap_or(s.n);
            }
            ExperimentConfig::Bt(s) => {
                s.master_seed = seed.unwrap_or(s.master_seed);
                s.trials = trials.unwrap_or(s.trials);
                s.n = n.unwrap_or(s.n);
            }
            ExperimentConfig::Softcover(s) => {
                s.master_seed = seed.unwrap_or(s.master_seed);
                if let Some(n) = n {
                    s.ns = vec![n];
                }
                if trials.is_some() {
                    ignored.push("--trials has no effect on softcover sweeps".to_string());
                }
            }
            ExperimentConfig::WzRate(s) => {
                s.seed = seed.or(s.seed);
                if trials.is_some() || n.is_some() {
                    ignored.push("--trials and --n have no effect on wz-rate".to_string());
                }
            }
            _ => {
                if seed.is_some() || trials.is_some() || n.is_some() {
                    ignored.push(format!("--seed, --trials and --n have no effect on {}", self.scheme()));
                }
            }
        }
        ignored
    }
}

fn monte_carlo(trials: usize, master_seed: u64, codebooks_per_experiment: usize) -> MonteCarlo {
    MonteCarlo { trials, master_seed, codebooks_per_experiment }
}

impl P2pSpec {
    pub fn build(&self) -> Result<P2pConfig, CliError> {
        let nx = self.source.len();
        if self.test_channel.inputs() != nx {
            return Err(CliError::Config(format!(
                "test channel has {} inputs, source has {nx} symbols",
                self.test_channel.inputs()
            )));
        }
        let d = self.distortion.build(nx, self.test_channel.outputs())?;
        let cfg = P2pConfig::from_test_channel(
            self.source.clone(),
            &self.test_channel,
            d,
            self.n,
            self.rate,
            monte_carlo(self.trials, self.master_seed, self.codebooks_per_experiment),
        )
        .map_err(CliError::config)?;
        cfg.validate().map_err(CliError::config)?;
        Ok(cfg)
    }
}

impl WzSpec {
    pub fn build(&self) -> Result<WzScheme, CliError> {
        let nx = self.joint_xb.shape()[0];
        if self.joint_xb.arity() != 2 {
            return Err(CliError::Config("joint_xb must have two axes".into()));
        }
        let nb = self.joint_xb.shape()[1];
        let d = self.distortion.build_square_default(nx)?;
        let nv = self.test_channel.outputs();
        let phi = self
            .phi
            .build(nv, nb, d.reconstructions(), || optimal_reconstruction(&self.joint_xb, &self.test_channel, &d))?;
        let mut cfg = WzConfig {
            joint_xb: self.joint_xb.clone(),
            test_channel: self.test_channel.clone(),
            phi,
            d,
            n: self.n,
            rate_r: 0.0,
            rate_rprime: 0.0,
            monte_carlo: monte_carlo(self.trials, self.master_seed, self.codebooks_per_experiment),
        };
        let (r, rp) = match &self.rates {
            WzRates::Explicit(e) => (e.r, e.rprime),
            WzRates::Margins(m) => {
                let probe = WzScheme::new(WzConfig { n: 1, ..cfg.clone() }).map_err(CliError::config)?;
                probe.info.margin_rates(m.cover_margin, m.binning_margin)
            }
        };
        cfg.rate_r = r;
        cfg.rate_rprime = rp;
        WzScheme::new(cfg).map_err(CliError::config)
    }
}

impl BtSpec {
    pub fn build(&self) -> Result<BtScheme, CliError> {
        if self.joint_x1x2.arity() != 2 {
            return Err(CliError::Config("joint_x1x2 must have two axes".into()));
        }
        let (nx1, nx2) = (self.joint_x1x2.shape()[0], self.joint_x1x2.shape()[1]);
        let d1 = self.d1.build_square_default(nx1)?;
        let d2 = self.d2.build_square_default(nx2)?;
        let (nu1, nu2) = (self.ch1.outputs(), self.ch2.outputs());
        let phi1 = self.phi1.build(nu1, nu2, d1.reconstructions(), || {
            optimal_bt_reconstruction(&self.joint_x1x2, &self.ch1, &self.ch2, &d1, 1)
        })?;
        let phi2 = self.phi2.build(nu1, nu2, d2.reconstructions(), || {
            optimal_bt_reconstruction(&self.joint_x1x2, &self.ch1, &self.ch2, &d2, 2)
        })?;
        let mut cfg = BtConfig {
            joint_x1x2: self.joint_x1x2.clone(),
            ch1: self.ch1.clone(),
            ch2: self.ch2.clone(),
            phi1,
            phi2,
            d1,
            d2,
            n: self.n,
            rate1: 0.0,
            rate2: 0.0,
            rate2_prime: 0.0,
            monte_carlo: monte_carlo(self.trials, self.master_seed, self.codebooks_per_experiment),
        };
        let (r1, r2, r2p) = match &self.rates {
            BtRates::Explicit(e) => (e.r1, e.r2, e.r2_prime),
            BtRates::Margins(m) => {
                let probe = BtScheme::new(BtConfig { n: 1, ..cfg.clone() }).map_err(CliError::config)?;
                probe.info.margin_rates(m.cover_margin, m.binning_margin)
            }
        };
        (cfg.rate1, cfg.rate2, cfg.rate2_prime) = (r1, r2, r2p);
        BtScheme::new(cfg).map_err(CliError::config)
    }
}

impl BtCornerSpec {
    pub fn build(
        &self,
    ) -> Result<(DistortionMeasure, DistortionMeasure, ReconstructionMap, ReconstructionMap), CliError> {
        if self.joint_x1x2.arity() != 2 {
            return Err(CliError::Config("joint_x1x2 must have two axes".into()));
        }
        let (nx1, nx2) = (self.joint_x1x2.shape()[0], self.joint_x1x2.shape()[1]);
        let d1 = self.d1.build_square_default(nx1)?;
        let d2 = self.d2.build_square_default(nx2)?;
        let (nu1, nu2) = (self.ch1.outputs(), self.ch2.outputs());
        let phi1 = self.phi1.build(nu1, nu2, d1.reconstructions(), || {
            optimal_bt_reconstruction(&self.joint_x1x2, &self.ch1, &self.ch2, &d1, 1)
        })?;
        let phi2 = self.phi2.build(nu1, nu2, d2.reconstructions(), || {
            optimal_bt_reconstruction(&self.joint_x1x2, &self.ch1, &self.ch2, &d2, 2)
        })?;
        Ok((d1, d2, phi1, phi2))
    }
}
