//! Group-Fourier purity profiles for quantum resource theories: two-qubit
//! and multipartite entanglement, fermionic Gaussianity, spin coherence and
//! Clifford stabilizerness.

pub mod cg;
pub mod clifford_group;
pub mod closed_forms;
pub mod error;
pub mod factory;
pub mod free_ops;
pub mod haar_mc;
pub mod irrep;
pub mod maxent;
pub mod numeric;
pub mod pauli;
pub mod purity;
pub mod state;

pub use closed_forms::{closed_form_profile, closed_form_value, ClosedFamily};
pub use error::{GfdError, Result};
pub use factory::{make_state, Family, StateParams, StateSpec};
pub use haar_mc::{estimate_haar_mean, HaarReport, McEstimate};
pub use irrep::{irrep_basis, irrep_table, CliffordIrrep, IrrepClass, IrrepLabel, QrtKind};
pub use maxent::{verify_compression, CompressionReport};
pub use pauli::PauliString;
pub use purity::{aggregate_profile, cumulative_profile, profile, Aggregation, ProfileEntry, PurityProfile};
pub use state::{PureState, System};
