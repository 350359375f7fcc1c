//! Exact small-blocklength checks of soft covering and of the auxiliary
//! distribution identities behind the likelihood encoder.

mod identities;
mod induced;
mod sweep;

pub use identities::{shipped_q_fixtures, verify_q_identities, IdentityReport, QFixture, IDENTITY_TOL};
pub use induced::{induced_sequence_dist, tv_to_iid, MAX_ENUMERATED_CODEWORDS};
pub use sweep::{softcover_sweep, softcover_sweep_wz, SoftcoverCell, SoftcoverReport};
