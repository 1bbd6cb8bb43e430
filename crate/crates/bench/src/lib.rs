//! Fixtures shared by the criterion benchmarks.

use gfd_core::{make_state, Family, PureState, QrtKind, StateSpec};

/// Seeded Haar state on the Hilbert space of `qrt`.
pub fn haar_state(qrt: &QrtKind, seed: u64) -> PureState {
    let spec = match qrt.system() {
        gfd_core::System::Qubits { n } => StateSpec::qubits(Family::Haar, n),
        gfd_core::System::Spin { twice_s } => StateSpec::spin(Family::Haar, twice_s as f64 / 2.0),
    };
    make_state(&spec.with_seed(seed)).expect("bench state within caps")
}

/// (name, theory) pairs for the brute-force profile benchmark.
pub fn brute_targets() -> Vec<(&'static str, QrtKind)> {
    vec![
        ("multipartite_n6", QrtKind::Multipartite { n: 6 }),
        ("fermionic_n8", QrtKind::Fermionic { n: 8 }),
        ("spin_s4", QrtKind::Spin { twice_s: 8 }),
        ("clifford_n2", QrtKind::Clifford { n: 2 }),
    ]
}
