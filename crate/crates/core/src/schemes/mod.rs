//! End-to-end Monte Carlo pipelines: point-to-point, Wyner-Ziv, and
//! Berger-Tung corner-point coding with likelihood encoders.

mod bt;
mod experiment;
mod p2p;
mod trial;
mod wz;

pub use bt::{run_bt_trial, BtConfig, BtInformation, BtScheme, BT_TAG};
pub use experiment::{run_experiment, ExperimentSummary, Scheme};
pub use p2p::{p2p_trial_with_codebook, run_p2p_trial, P2pConfig, P2P_TAG};
pub use trial::{MonteCarlo, TrialFlags, TrialResult};
pub use wz::{run_wz_trial, WzConfig, WzInformation, WzScheme, WZ_TAG};
