//! Brute-force GFD purities: per-irrep sums of squared basis expectations,
//! profile assembly, aggregation and cumulative views.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GfdError, Result};
use crate::irrep::{
    irrep_basis, irrep_table, BasisOperator, CliffordIrrep, IrrepClass, IrrepLabel, OperatorBasis, QrtKind,
    CLIFFORD_BASIS_CAP, PAULI_BASIS_CAP, SPIN_BASIS_TWICE_CAP,
};
use crate::numeric::{kahan_sum, KahanSum};
use crate::pauli::{majorana_decompose, pauli_expectation_table, PauliString};
use crate::state::PureState;

/// Round-off allowance below which negative purities are clipped to zero.
pub const CLIP_TOL: f64 = 1e-12;
/// Allowed deviation of a brute-force profile total from 1.
pub const TOTAL_TOL: f64 = 1e-9;

/// Two-copy projector caps.
pub const PROJECTOR_QUBIT_CAP: u32 = 3;
pub const PROJECTOR_SPIN_TWICE_CAP: u32 = 8;
pub const PROJECTOR_CLIFFORD_CAP: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    PerIrrep,
    ByHammingWeight,
    FermionicMirror,
    None,
}

impl Aggregation {
    pub fn name(&self) -> &'static str {
        match self {
            Aggregation::PerIrrep => "per_irrep",
            Aggregation::ByHammingWeight => "by_hamming_weight",
            Aggregation::FermionicMirror => "fermionic_mirror",
            Aggregation::None => "none",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        [Aggregation::PerIrrep, Aggregation::ByHammingWeight, Aggregation::FermionicMirror, Aggregation::None]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| GfdError::Parameter(format!("unknown aggregation {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub class: IrrepClass,
    pub purity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurityProfile {
    pub qrt: QrtKind,
    pub aggregation: Aggregation,
    pub entries: Vec<ProfileEntry>,
    pub total: f64,
}

impl PurityProfile {
    /// Builds a profile, clipping round-off negatives and summing the total.
    pub fn from_entries(qrt: QrtKind, aggregation: Aggregation, mut entries: Vec<ProfileEntry>) -> Result<Self> {
        for e in entries.iter_mut() {
            if e.purity < 0.0 {
                if e.purity < -CLIP_TOL {
                    return Err(GfdError::Internal(format!(
                        "negative purity {} in class {}",
                        e.purity, e.class.label
                    )));
                }
                e.purity = 0.0;
            }
        }
        let total = kahan_sum(entries.iter().map(|e| e.purity));
        Ok(Self { qrt, aggregation, entries, total })
    }

    pub fn get(&self, label: &IrrepLabel) -> Option<f64> {
        self.entries.iter().find(|e| &e.class.label == label).map(|e| e.purity)
    }

    pub fn purities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.purity).collect()
    }

    /// Entries in cumulative order (dimension ascending, then label text)
    /// with the running sum after each.
    pub fn cumulative_rows(&self) -> Vec<(ProfileEntry, f64)> {
        let mut sorted = self.entries.clone();
        sorted.sort_by(|a, b| {
            a.class
                .dimension
                .cmp(&b.class.dimension)
                .then_with(|| a.class.label.to_string().cmp(&b.class.label.to_string()))
        });
        let mut acc = KahanSum::new();
        sorted
            .into_iter()
            .map(|e| {
                acc.add(e.purity);
                (e, acc.value())
            })
            .collect()
    }
}

/// Expectation source: direct O(d) evaluation or a precomputed table.
struct Expectations<'a> {
    state: &'a PureState,
    table: Option<Vec<f64>>,
}

impl<'a> Expectations<'a> {
    fn direct(state: &'a PureState) -> Self {
        Self { state, table: None }
    }

    fn tabulated(state: &'a PureState) -> Result<Self> {
        Ok(Self { state, table: Some(pauli_expectation_table(state)?) })
    }

    fn pauli(&self, p: &PauliString) -> f64 {
        let sign = if p.phase_exp() == 2 { -1.0 } else { 1.0 };
        match &self.table {
            Some(t) => {
                let n = p.num_qubits();
                sign * t[((p.x_mask() as usize) << n) | p.z_mask() as usize]
            }
            None => p.expectation_complex(self.state.amplitudes()).re,
        }
    }

    /// Tr[ρ B] for one-copy operators, Tr[ρ⊗ρ B] for two-copy ones.
    fn of(&self, op: &BasisOperator) -> f64 {
        match op {
            BasisOperator::Pauli { pauli, scale } => scale * self.pauli(pauli),
            BasisOperator::PauliPairs { terms } => {
                kahan_sum(terms.iter().map(|(c, p, q)| c * self.pauli(p) * self.pauli(q)))
            }
            BasisOperator::Dense(m) => {
                let v = DVector::from_column_slice(self.state.amplitudes());
                (v.adjoint() * m * &v)[(0, 0)].re
            }
        }
    }
}

fn check_basis_state(state: &PureState, basis: &OperatorBasis) -> Result<()> {
    if state.system() != basis.qrt.system() {
        return Err(GfdError::Size(format!(
            "state on {:?} paired with a {} basis on {:?}",
            state.system(),
            basis.qrt.name(),
            basis.qrt.system()
        )));
    }
    Ok(())
}

fn sum_squares(exp: &Expectations<'_>, basis: &OperatorBasis) -> f64 {
    let values: Vec<f64> = basis.elements.par_iter().map(|op| exp.of(op)).collect();
    kahan_sum(values.iter().map(|v| v * v))
}

/// Σ_μ Tr[ρ B_μ]^2 over the basis (two copies for the Clifford classes).
pub fn irrep_purity(state: &PureState, basis: &OperatorBasis) -> Result<f64> {
    check_basis_state(state, basis)?;
    Ok(sum_squares(&Expectations::direct(state), basis))
}

fn check_system(state: &PureState, qrt: &QrtKind) -> Result<()> {
    if state.system() != qrt.system() {
        return Err(GfdError::Size(format!(
            "state on {:?} does not match the {} Hilbert space",
            state.system(),
            qrt.name()
        )));
    }
    Ok(())
}

/// Symplectic (x, z) -> Majorana weight, without phase bookkeeping.
fn majorana_weight(n: u32, x: u64, z: u64) -> u32 {
    let p = PauliString::new(n, x, z, 0).expect("masks within n");
    majorana_decompose(&p).weight()
}

/// Full brute-force profile, one entry per irrep.
pub fn profile(state: &PureState, qrt: &QrtKind) -> Result<PurityProfile> {
    qrt.validate()?;
    check_system(state, qrt)?;
    let classes = irrep_table(qrt)?;
    let entries: Vec<ProfileEntry> = match *qrt {
        QrtKind::Bipartite2q | QrtKind::Multipartite { .. } | QrtKind::Fermionic { .. } => {
            let n = state.qubits()?;
            if n > PAULI_BASIS_CAP {
                return Err(GfdError::capacity(
                    "brute-force profile qubit count (use closed forms beyond)",
                    PAULI_BASIS_CAP as u64,
                    n as u64,
                ));
            }
            let d = 1usize << n;
            let table = pauli_expectation_table(state)?;
            let fermionic = matches!(qrt, QrtKind::Fermionic { .. });
            let buckets = if fermionic { 2 * n as usize + 1 } else { d };
            let mut acc = vec![KahanSum::new(); buckets];
            let inv_d = 1.0 / d as f64;
            for x in 0..d {
                for z in 0..d {
                    let e = table[x * d + z];
                    let key = if fermionic {
                        majorana_weight(n, x as u64, z as u64) as usize
                    } else {
                        x | z
                    };
                    acc[key].add(e * e * inv_d);
                }
            }
            classes
                .into_iter()
                .map(|class| {
                    let idx = match class.label {
                        IrrepLabel::Support { pattern, .. } => pattern as usize,
                        IrrepLabel::Majorana { alpha } => alpha as usize,
                        _ => unreachable!("per-irrep Pauli table"),
                    };
                    ProfileEntry { class, purity: acc[idx].value() }
                })
                .collect()
        }
        QrtKind::Spin { twice_s } => {
            if twice_s > SPIN_BASIS_TWICE_CAP {
                return Err(GfdError::capacity(
                    "brute-force spin 2s (use closed forms beyond)",
                    SPIN_BASIS_TWICE_CAP as u64,
                    twice_s as u64,
                ));
            }
            let exp = Expectations::direct(state);
            classes
                .into_iter()
                .map(|class| Ok(ProfileEntry { class, purity: sum_squares(&exp, &*irrep_basis(qrt, &class.label)?) }))
                .collect::<Result<_>>()?
        }
        QrtKind::Clifford { n } => {
            if n > CLIFFORD_BASIS_CAP {
                return Err(GfdError::capacity(
                    "brute-force Clifford qubit count (use closed forms beyond)",
                    CLIFFORD_BASIS_CAP as u64,
                    n as u64,
                ));
            }
            let exp = Expectations::tabulated(state)?;
            let mut named = Vec::new();
            let mut residual_class = None;
            for class in classes {
                if class.label == (IrrepLabel::Clifford { irrep: CliffordIrrep::Residual }) {
                    residual_class = Some(class);
                    continue;
                }
                let purity = sum_squares(&exp, &*irrep_basis(qrt, &class.label)?);
                named.push(ProfileEntry { class, purity });
            }
            let residual = 1.0 - kahan_sum(named.iter().map(|e| e.purity));
            named.push(ProfileEntry { class: residual_class.expect("residual listed"), purity: residual });
            named
        }
    };
    let p = PurityProfile::from_entries(*qrt, Aggregation::PerIrrep, entries)?;
    if (p.total - 1.0).abs() > TOTAL_TOL {
        return Err(GfdError::Internal(format!("profile total {} deviates from 1", p.total)));
    }
    Ok(p)
}

/// Purity of one class (irrep or aggregation class) by brute force.
pub fn class_purity(state: &PureState, qrt: &QrtKind, label: &IrrepLabel) -> Result<f64> {
    check_system(state, qrt)?;
    if let (QrtKind::Clifford { .. }, IrrepLabel::Clifford { irrep: CliffordIrrep::Residual }) = (qrt, label) {
        return profile(state, qrt)?.get(label).ok_or_else(|| GfdError::Internal("missing residual".into()));
    }
    let basis = irrep_basis(qrt, label)?;
    irrep_purity(state, &basis)
}

fn weight_of(label: &IrrepLabel) -> Option<u32> {
    match *label {
        IrrepLabel::Support { pattern, .. } => Some(pattern.count_ones()),
        IrrepLabel::Weight { k } => Some(k),
        _ => None,
    }
}

/// Re-buckets a profile; totals are carried over unchanged.
pub fn aggregate_profile(p: &PurityProfile, scheme: Aggregation) -> Result<PurityProfile> {
    let incompatible = || {
        GfdError::Parameter(format!(
            "aggregation {} does not apply to a {} profile aggregated as {}",
            scheme.name(),
            p.qrt.name(),
            p.aggregation.name()
        ))
    };
    let mut grouped: BTreeMap<u32, (IrrepClass, KahanSum)> = BTreeMap::new();
    match scheme {
        Aggregation::None => return Ok(p.clone()),
        Aggregation::PerIrrep => {
            if p.aggregation == Aggregation::PerIrrep {
                return Ok(p.clone());
            }
            return Err(incompatible());
        }
        Aggregation::ByHammingWeight => {
            if !matches!(p.qrt, QrtKind::Bipartite2q | QrtKind::Multipartite { .. }) {
                return Err(incompatible());
            }
            for e in &p.entries {
                let k = weight_of(&e.class.label).ok_or_else(incompatible)?;
                let slot = grouped.entry(k).or_insert((
                    IrrepClass { label: IrrepLabel::Weight { k }, dimension: e.class.dimension, count: 0 },
                    KahanSum::new(),
                ));
                slot.0.count += e.class.count;
                slot.1.add(e.purity);
            }
        }
        Aggregation::FermionicMirror => {
            let QrtKind::Fermionic { n } = p.qrt else {
                return Err(incompatible());
            };
            for e in &p.entries {
                let alpha = match e.class.label {
                    IrrepLabel::Majorana { alpha } => alpha.min(2 * n - alpha),
                    IrrepLabel::Mirror { alpha, .. } => alpha,
                    _ => return Err(incompatible()),
                };
                let slot = grouped.entry(alpha).or_insert((
                    IrrepClass { label: IrrepLabel::Mirror { alpha, n }, dimension: e.class.dimension, count: 0 },
                    KahanSum::new(),
                ));
                slot.0.count += e.class.count;
                slot.1.add(e.purity);
            }
        }
    }
    let entries = grouped
        .into_values()
        .map(|(class, acc)| ProfileEntry { class, purity: acc.value() })
        .collect();
    Ok(PurityProfile { qrt: p.qrt, aggregation: scheme, entries, total: p.total })
}

/// Cumulative purity at each distinct irrep dimension Λ, ascending.
pub fn cumulative_profile(p: &PurityProfile) -> Vec<(u128, f64)> {
    let mut out: Vec<(u128, f64)> = Vec::new();
    for (e, cum) in p.cumulative_rows() {
        match out.last_mut() {
            Some((dim, val)) if *dim == e.class.dimension => *val = cum,
            _ => out.push((e.class.dimension, cum)),
        }
    }
    out
}

fn kron_vec(a: &DVector<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
    a.kronecker(b)
}

/// Pairs the two-copy projector Π = Σ_μ B_μ⊗B_μ with ρ⊗ρ (or with
/// (ρ⊗ρ)⊗(ρ⊗ρ) for the Clifford classes) on an explicit dense space.
pub fn purity_via_trivial_projector(state: &PureState, qrt: &QrtKind, label: &IrrepLabel) -> Result<f64> {
    check_system(state, qrt)?;
    match *qrt {
        QrtKind::Bipartite2q | QrtKind::Multipartite { .. } | QrtKind::Fermionic { .. } => {
            let n = state.qubits()?;
            if n > PROJECTOR_QUBIT_CAP {
                return Err(GfdError::capacity("two-copy projector qubit count", PROJECTOR_QUBIT_CAP as u64, n as u64));
            }
        }
        QrtKind::Spin { twice_s } => {
            if twice_s > PROJECTOR_SPIN_TWICE_CAP {
                return Err(GfdError::capacity("two-copy projector 2s", PROJECTOR_SPIN_TWICE_CAP as u64, twice_s as u64));
            }
        }
        QrtKind::Clifford { n } => {
            if n > PROJECTOR_CLIFFORD_CAP {
                return Err(GfdError::capacity(
                    "four-copy Clifford projector qubit count",
                    PROJECTOR_CLIFFORD_CAP as u64,
                    n as u64,
                ));
            }
            if *label == (IrrepLabel::Clifford { irrep: CliffordIrrep::Residual }) {
                let mut acc = KahanSum::new();
                for irrep in CliffordIrrep::ALL.iter().filter(|&&c| c != CliffordIrrep::Residual) {
                    acc.add(purity_via_trivial_projector(state, qrt, &IrrepLabel::Clifford { irrep: *irrep })?);
                }
                return Ok(1.0 - acc.value());
            }
        }
    }
    let basis = irrep_basis(qrt, label)?;
    let psi = DVector::from_column_slice(state.amplitudes());
    let copies = if matches!(qrt, QrtKind::Clifford { .. }) { 2 } else { 1 };
    let mut single = psi.clone();
    for _ in 1..copies {
        single = kron_vec(&single, &psi);
    }
    let doubled = kron_vec(&single, &single);
    let k = single.len();
    let mut pi = nalgebra::DMatrix::<Complex64>::zeros(k * k, k * k);
    for op in &basis.elements {
        let b = op.to_dense();
        pi += b.kronecker(&b);
    }
    Ok((doubled.adjoint() * pi * &doubled)[(0, 0)].re)
}

/// Stabilizer purity W = d^{-2} Σ_P Tr[ρP]^4 over all d^2 Pauli strings.
/// Equals P_id + P_zero + P_one + P_two of the two-copy Clifford profile.
pub fn stabilizer_purity(state: &PureState) -> Result<f64> {
    let n = state.qubits()?;
    if n > PAULI_BASIS_CAP {
        return Err(GfdError::capacity("stabilizer purity qubit count", PAULI_BASIS_CAP as u64, n as u64));
    }
    let table = pauli_expectation_table(state)?;
    let d = (1u64 << n) as f64;
    Ok(kahan_sum(table.iter().map(|e| e.powi(4))) / (d * d))
}

/// W recovered from a Clifford profile.
pub fn witness_from_clifford_profile(p: &PurityProfile) -> Result<f64> {
    if !matches!(p.qrt, QrtKind::Clifford { .. }) {
        return Err(GfdError::Parameter("witness needs a Clifford profile".into()));
    }
    let mut acc = KahanSum::new();
    for irrep in [CliffordIrrep::Id, CliffordIrrep::Zero, CliffordIrrep::One, CliffordIrrep::Two] {
        acc.add(
            p.get(&IrrepLabel::Clifford { irrep })
                .ok_or_else(|| GfdError::Parameter(format!("profile lacks class {}", irrep.name())))?,
        );
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{make_state, Family, StateSpec};

    fn state(spec: StateSpec) -> PureState {
        make_state(&spec).unwrap()
    }

    fn sup(bits: &[u8]) -> IrrepLabel {
        IrrepLabel::support(bits)
    }

    #[test]
    fn bipartite_examples() {
        let bell = state(StateSpec::new(Family::Bell));
        let q = QrtKind::Bipartite2q;
        let p = profile(&bell, &q).unwrap();
        assert!((p.get(&sup(&[1, 1])).unwrap() - 0.75).abs() < 1e-15);
        let b = irrep_basis(&q, &sup(&[1, 1])).unwrap();
        assert!((irrep_purity(&bell, &b).unwrap() - 0.75).abs() < 1e-15);
        let zero = state(StateSpec::qubits(Family::Product, 2));
        let b10 = irrep_basis(&q, &sup(&[1, 0])).unwrap();
        assert!((irrep_purity(&zero, &b10).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ghz3_by_weight() {
        let ghz = state(StateSpec::qubits(Family::Ghz, 3));
        let p = profile(&ghz, &QrtKind::Multipartite { n: 3 }).unwrap();
        let agg = aggregate_profile(&p, Aggregation::ByHammingWeight).unwrap();
        let want = [0.125, 0.0, 0.375, 0.5];
        for (e, w) in agg.entries.iter().zip(want) {
            assert!((e.purity - w).abs() < 1e-14);
        }
        assert_eq!(agg.entries[2].class.count, 3);
        assert_eq!(agg.entries[2].class.dimension, 9);
    }

    #[test]
    fn fermionic_vacuum_profile() {
        let vac = state(StateSpec::qubits(Family::Product, 4));
        let p = profile(&vac, &QrtKind::Fermionic { n: 4 }).unwrap();
        let want = [1.0, 0.0, 4.0, 0.0, 6.0, 0.0, 4.0, 0.0, 1.0];
        for (e, w) in p.entries.iter().zip(want) {
            assert!((e.purity - w / 16.0).abs() < 1e-14);
        }
        let m = aggregate_profile(&p, Aggregation::FermionicMirror).unwrap();
        let a2 = m.get(&IrrepLabel::Mirror { alpha: 2, n: 4 }).unwrap();
        assert!((a2 - 8.0 / 16.0).abs() < 1e-14);
        assert_eq!(m.entries.len(), 5);
    }

    #[test]
    fn spin_half_top_state() {
        let s = state(StateSpec::spin(Family::SpinBasis, 0.5).with_m(0.5));
        let p = profile(&s, &QrtKind::Spin { twice_s: 1 }).unwrap();
        assert!((p.purities()[0] - 0.5).abs() < 1e-14);
        assert!((p.purities()[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn aggregation_rules() {
        let bell = state(StateSpec::new(Family::Bell));
        let p = profile(&bell, &QrtKind::Bipartite2q).unwrap();
        assert_eq!(aggregate_profile(&p, Aggregation::None).unwrap(), p);
        assert_eq!(aggregate_profile(&p, Aggregation::PerIrrep).unwrap(), p);
        assert!(aggregate_profile(&p, Aggregation::FermionicMirror).is_err());
        let w = aggregate_profile(&p, Aggregation::ByHammingWeight).unwrap();
        assert!(aggregate_profile(&w, Aggregation::PerIrrep).is_err());
        assert_eq!(w.total, p.total);
    }

    #[test]
    fn weight_one_is_sum_of_marginal_classes() {
        let psi = state(StateSpec::qubits(Family::Haar, 2).with_seed(8));
        let p = profile(&psi, &QrtKind::Bipartite2q).unwrap();
        let w = aggregate_profile(&p, Aggregation::ByHammingWeight).unwrap();
        let a = p.get(&sup(&[1, 0])).unwrap() + p.get(&sup(&[0, 1])).unwrap();
        assert!((w.get(&IrrepLabel::Weight { k: 1 }).unwrap() - a).abs() < 1e-15);
    }

    #[test]
    fn cumulative_views() {
        let bell = state(StateSpec::new(Family::Bell));
        let c = cumulative_profile(&profile(&bell, &QrtKind::Bipartite2q).unwrap());
        let want = [(1u128, 0.25), (3, 0.25), (9, 1.0)];
        for ((d, v), (wd, wv)) in c.iter().zip(want) {
            assert_eq!(*d, wd);
            assert!((v - wv).abs() < 1e-14);
        }
        let prod = state(StateSpec::qubits(Family::Product, 2));
        let c = cumulative_profile(&profile(&prod, &QrtKind::Bipartite2q).unwrap());
        assert!((c[1].1 - 0.75).abs() < 1e-14);
        assert!((c[2].1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn projector_path_examples() {
        let bell = state(StateSpec::new(Family::Bell));
        let v = purity_via_trivial_projector(&bell, &QrtKind::Bipartite2q, &sup(&[1, 1])).unwrap();
        assert!((v - 0.75).abs() < 1e-12);
        let up = state(StateSpec::spin(Family::SpinBasis, 0.5).with_m(0.5));
        let v = purity_via_trivial_projector(&up, &QrtKind::Spin { twice_s: 1 }, &IrrepLabel::Spin { alpha: 1 }).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let psi = state(StateSpec::qubits(Family::Haar, 3).with_seed(4));
        let v = purity_via_trivial_projector(&psi, &QrtKind::Multipartite { n: 3 }, &sup(&[0, 0, 0])).unwrap();
        assert!((v - 0.125).abs() < 1e-12);
        assert!(matches!(
            purity_via_trivial_projector(&psi, &QrtKind::Clifford { n: 3 }, &IrrepLabel::Clifford { irrep: CliffordIrrep::One }),
            Err(GfdError::Capacity { .. })
        ));
    }

    #[test]
    fn clifford_profile_is_normalized_and_matches_witness() {
        for n in 1..=3 {
            let psi = state(StateSpec::qubits(Family::Haar, n).with_seed(n as u64));
            let p = profile(&psi, &QrtKind::Clifford { n }).unwrap();
            assert!((p.total - 1.0).abs() < 1e-12);
            let w = stabilizer_purity(&psi).unwrap();
            assert!((witness_from_clifford_profile(&p).unwrap() - w).abs() < 1e-12);
        }
    }

    #[test]
    fn size_mismatch_is_reported() {
        let bell = state(StateSpec::new(Family::Bell));
        assert!(matches!(profile(&bell, &QrtKind::Multipartite { n: 3 }), Err(GfdError::Size(_))));
        let b = irrep_basis(&QrtKind::Multipartite { n: 3 }, &IrrepLabel::Weight { k: 1 }).unwrap();
        assert!(matches!(irrep_purity(&bell, &b), Err(GfdError::Size(_))));
    }
}
