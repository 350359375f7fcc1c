//! Theoretical rate-distortion quantities: point-to-point `R(D)`, the
//! Wyner-Ziv function, and Berger-Tung corner points.

mod berger_tung;
mod blahut;
mod point;
mod reconstruction;
mod wyner_ziv;

pub use berger_tung::{berger_tung_corner, berger_tung_sum_rate, long_chain_joint, optimal_bt_reconstruction, Corner};
pub use blahut::{blahut_arimoto_rd, blahut_arimoto_rd_with, BlahutArimotoOptions};
pub use point::{time_share, RateDistortionPoint, SolverStatus};
pub use reconstruction::ReconstructionMap;
pub use wyner_ziv::{
    optimal_reconstruction, wyner_ziv_evaluate, wyner_ziv_rate, wyner_ziv_rate_with, WynerZivOptions, WZ_METHOD_NOTE,
};
