//! Reconstruction of free states from their smallest-irrep data: Bloch
//! marginals for product states, Majorana correlation matrices for
//! fermionic Gaussian states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GfdError, Result};
use crate::factory::{seeded_rng, GAUSSIAN_QUBIT_CAP};
use crate::free_ops::pairs;
use crate::irrep::{QrtKind, PAULI_BASIS_CAP};
use crate::numeric::kahan_sum;
use crate::pauli::{Pauli1, PauliString};
use crate::state::{PureState, System};

/// Default certificate tolerance on Bloch norms and singular values.
pub const DEFAULT_TOL: f64 = 1e-8;
const GAUSSIAN_RESIDUAL_TOL: f64 = 1e-12;
const GAUSSIAN_MAX_ITER: usize = 20_000;
const START_STREAM: u64 = 0x6d61_7865_6e74;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochVectors {
    pub triples: Vec<[f64; 3]>,
}

impl BlochVectors {
    pub fn norms(&self) -> Vec<f64> {
        self.triples.iter().map(|t| (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt()).collect()
    }
}

fn qubit_count(state: &PureState, what: &str) -> Result<u32> {
    match state.system() {
        System::Qubits { n } => Ok(n),
        System::Spin { .. } => Err(GfdError::SystemType(format!("{what} needs a qubit state"))),
    }
}

/// Per-qubit (⟨X⟩, ⟨Y⟩, ⟨Z⟩).
pub fn bloch_vectors(state: &PureState) -> Result<BlochVectors> {
    let n = qubit_count(state, "bloch_vectors")?;
    let amps = state.amplitudes();
    let triples = (0..n)
        .map(|q| {
            let mut t = [0.0; 3];
            for (slot, p) in t.iter_mut().zip([Pauli1::X, Pauli1::Y, Pauli1::Z]) {
                let ps = PauliString::single(n, q, p).expect("q < n");
                *slot = ps.expectation_complex(amps).re;
            }
            t
        })
        .collect();
    Ok(BlochVectors { triples })
}

/// `⊗_q |b_q⟩` with `|b_q⟩` the +1 eigenvector of `b_q · σ`; the largest
/// amplitude is made real and positive.
pub fn reconstruct_product(b: &BlochVectors, tol: f64) -> Result<PureState> {
    let n = b.triples.len() as u32;
    if n == 0 {
        return Err(GfdError::Parameter("empty Bloch vector list".into()));
    }
    let mut factors = Vec::with_capacity(n as usize);
    for (q, (t, r)) in b.triples.iter().zip(b.norms()).enumerate() {
        if r < 1.0 - tol {
            return Err(GfdError::NotCompressible(format!(
                "qubit {q} Bloch norm {r:.3e} < 1: marginal is mixed, state is not a product state"
            )));
        }
        if r > 1.0 + tol {
            return Err(GfdError::Parameter(format!("qubit {q} Bloch norm {r} exceeds 1")));
        }
        let z = (t[2] / r).clamp(-1.0, 1.0);
        let theta = z.acos();
        let phi = t[1].atan2(t[0]);
        factors.push([
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ]);
    }
    let d = 1usize << n;
    let mut amps = vec![Complex64::new(1.0, 0.0); d];
    for (idx, a) in amps.iter_mut().enumerate() {
        for (q, f) in factors.iter().enumerate() {
            *a *= f[(idx >> q) & 1];
        }
    }
    let (imax, _) = amps
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, a)| if a.norm() > best.1 { (i, a.norm()) } else { best });
    let phase = amps[imax].conj() / amps[imax].norm();
    amps.iter_mut().for_each(|a| *a *= phase);
    PureState::from_unnormalized(amps, System::Qubits { n })
}

/// Real antisymmetric `C_ij = -i Tr[ρ c_i c_j]` over `2n` Majorana modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub entries: DMatrix<f64>,
}

impl CorrelationMatrix {
    pub fn modes(&self) -> usize {
        self.entries.nrows()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.entries.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    pub fn max_abs_diff(&self, other: &CorrelationMatrix) -> Result<f64> {
        if self.modes() != other.modes() {
            return Err(GfdError::Size(format!("{} vs {} modes", self.modes(), other.modes())));
        }
        Ok((&self.entries - &other.entries).amax())
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        (&self.entries + self.entries.transpose()).amax()
    }

    /// Σ_{i<j} C_ij^2 / 2^n: the Majorana-weight-2 purity.
    pub fn weight_two_purity(&self) -> f64 {
        let m = self.modes();
        let n = (m / 2) as i32;
        let s = kahan_sum((0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).map(|(i, j)| self.entries[(i, j)].powi(2)));
        s / 2f64.powi(n)
    }
}

pub fn correlation_matrix(state: &PureState) -> Result<CorrelationMatrix> {
    let n = qubit_count(state, "correlation_matrix")?;
    if n > GAUSSIAN_QUBIT_CAP {
        return Err(GfdError::capacity("correlation matrix qubit count", GAUSSIAN_QUBIT_CAP as u64, n as u64));
    }
    let m = 2 * n as usize;
    let amps = state.amplitudes();
    let mut c = DMatrix::<f64>::zeros(m, m);
    let mut k = 0;
    let ps = pairs(n);
    for i in 0..m {
        for j in i + 1..m {
            let v = (Complex64::new(0.0, -1.0) * ps[k].expectation_complex(amps)).re;
            c[(i, j)] = v;
            c[(j, i)] = -v;
            k += 1;
        }
    }
    Ok(CorrelationMatrix { entries: c })
}

/// Top eigenvector of `H_C = Σ_{i<j} C_ij (-i c_i c_j)`. For a pure Gaussian
/// state with correlation matrix `C` this eigenvector is the state itself
/// (eigenvalue n, gap 2), so it is a second, independent preparation.
pub fn gaussian_from_correlation(c: &CorrelationMatrix) -> Result<PureState> {
    let m = c.modes();
    if m == 0 || !m.is_multiple_of(2) {
        return Err(GfdError::Size(format!("{m} Majorana modes")));
    }
    let n = (m / 2) as u32;
    if n > GAUSSIAN_QUBIT_CAP {
        return Err(GfdError::capacity("Gaussian reconstruction qubit count", GAUSSIAN_QUBIT_CAP as u64, n as u64));
    }
    let ps = pairs(n);
    let mut terms = Vec::new();
    let mut k = 0;
    for i in 0..m {
        for j in i + 1..m {
            // -i c_i c_j is Hermitian; fold the -i into the phase.
            let p = ps[k];
            let herm = p.with_phase((p.phase_exp() + 3) % 4);
            if c.entries[(i, j)] != 0.0 {
                terms.push((c.entries[(i, j)], herm));
            }
            k += 1;
        }
    }
    let shift: f64 = c.singular_values().iter().sum::<f64>() / 2.0;
    let d = 1usize << n;
    let zero = Complex64::new(0.0, 0.0);
    let mut rng = seeded_rng(0, START_STREAM);
    let mut v: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    normalize(&mut v);
    let mut hv = vec![zero; d];
    let mut scratch = vec![zero; d];
    let apply_h = |src: &[Complex64], dst: &mut Vec<Complex64>, scratch: &mut Vec<Complex64>| {
        dst.iter_mut().for_each(|a| *a = zero);
        for (coef, p) in &terms {
            p.apply_into(src, scratch);
            for (a, b) in dst.iter_mut().zip(scratch.iter()) {
                *a += b * *coef;
            }
        }
    };
    for _ in 0..GAUSSIAN_MAX_ITER {
        apply_h(&v, &mut hv, &mut scratch);
        let lambda: f64 = v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum();
        let residual: f64 = v
            .iter()
            .zip(&hv)
            .map(|(a, b)| (b - a * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual < GAUSSIAN_RESIDUAL_TOL {
            break;
        }
        for (a, b) in v.iter_mut().zip(&hv) {
            *a = *b + *a * shift;
        }
        normalize(&mut v);
    }
    let (imax, _) = v
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, a)| if a.norm() > best.1 { (i, a.norm()) } else { best });
    let phase = v[imax].conj() / v[imax].norm();
    v.iter_mut().for_each(|a| *a *= phase);
    PureState::from_unnormalized(v, System::Qubits { n })
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressionReport {
    pub certified: bool,
    /// Fidelity of the product reconstruction with the input.
    pub fidelity: Option<f64>,
    /// Max-norm distance between the input's correlation matrix and that of
    /// the independently prepared Gaussian state.
    pub correlation_distance: Option<f64>,
    /// |⟨φ|ψ⟩| between input and the Gaussian preparation.
    pub overlap: Option<f64>,
    pub bloch_norms: Option<Vec<f64>>,
    pub singular_values: Option<Vec<f64>>,
}

pub fn verify_compression(state: &PureState, qrt: &QrtKind) -> Result<CompressionReport> {
    verify_compression_with_tol(state, qrt, DEFAULT_TOL)
}

pub fn verify_compression_with_tol(state: &PureState, qrt: &QrtKind, tol: f64) -> Result<CompressionReport> {
    if state.system() != qrt.system() {
        return Err(GfdError::Size(format!(
            "state on {:?} does not match the {} Hilbert space",
            state.system(),
            qrt.name()
        )));
    }
    match qrt {
        QrtKind::Bipartite2q | QrtKind::Multipartite { .. } => {
            let n = qubit_count(state, "verify_compression")?;
            if n > PAULI_BASIS_CAP {
                return Err(GfdError::capacity("compression check qubit count", PAULI_BASIS_CAP as u64, n as u64));
            }
            let b = bloch_vectors(state)?;
            let norms = b.norms();
            let (certified, fidelity) = match reconstruct_product(&b, tol) {
                Ok(rec) => (true, Some(rec.fidelity(state)?)),
                Err(GfdError::NotCompressible(_)) => (false, None),
                Err(e) => return Err(e),
            };
            Ok(CompressionReport {
                certified,
                fidelity,
                correlation_distance: None,
                overlap: None,
                bloch_norms: Some(norms),
                singular_values: None,
            })
        }
        QrtKind::Fermionic { .. } => {
            let c = correlation_matrix(state)?;
            let sv = c.singular_values();
            let certified = sv.iter().all(|s| *s >= 1.0 - tol);
            let phi = gaussian_from_correlation(&c)?;
            let distance = c.max_abs_diff(&correlation_matrix(&phi)?)?;
            let overlap = phi.inner(state)?.norm();
            Ok(CompressionReport {
                certified,
                fidelity: None,
                correlation_distance: Some(distance),
                overlap: Some(overlap),
                bloch_norms: None,
                singular_values: Some(sv),
            })
        }
        _ => Err(GfdError::SystemType(format!("no compression check for the {} QRT", qrt.name()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{make_state, Family, StateSpec};

    #[test]
    fn bloch_examples() {
        let zero = make_state(&StateSpec::qubits(Family::Product, 1)).unwrap();
        assert_eq!(bloch_vectors(&zero).unwrap().triples, vec![[0.0, 0.0, 1.0]]);
        let bell = make_state(&StateSpec::new(Family::Bell)).unwrap();
        for t in bloch_vectors(&bell).unwrap().triples {
            assert!(t.iter().all(|v| v.abs() < 1e-15));
        }
        let spin = make_state(&StateSpec::spin(Family::SpinGhz, 1.0)).unwrap();
        assert!(matches!(bloch_vectors(&spin), Err(GfdError::SystemType(_))));
    }

    #[test]
    fn product_reconstruction() {
        let b = BlochVectors { triples: vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]] };
        let s = reconstruct_product(&b, DEFAULT_TOL).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = [h, 0.0, h, 0.0];
        for (a, w) in s.amplitudes().iter().zip(want) {
            assert!((a - Complex64::new(w, 0.0)).norm() < 1e-15);
        }
        let bell = make_state(&StateSpec::new(Family::Bell)).unwrap();
        let bb = bloch_vectors(&bell).unwrap();
        assert!(matches!(reconstruct_product(&bb, DEFAULT_TOL), Err(GfdError::NotCompressible(_))));
    }

    #[test]
    fn vacuum_correlation_blocks() {
        let vac = make_state(&StateSpec::qubits(Family::Product, 3)).unwrap();
        let c = correlation_matrix(&vac).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let want = match (i % 2, j) {
                    (0, j) if j == i + 1 => 1.0,
                    (1, j) if j + 1 == i => -1.0,
                    _ => 0.0,
                };
                assert!((c.entries[(i, j)] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gaussian_preparation_matches() {
        let psi = make_state(&StateSpec::qubits(Family::GaussianRandom, 4).with_seed(2)).unwrap();
        let r = verify_compression(&psi, &QrtKind::Fermionic { n: 4 }).unwrap();
        assert!(r.certified);
        assert!((r.overlap.unwrap() - 1.0).abs() < 1e-8);
        assert!(r.correlation_distance.unwrap() < 1e-10);
        let ghz = make_state(&StateSpec::qubits(Family::Ghz, 4)).unwrap();
        let r = verify_compression(&ghz, &QrtKind::Fermionic { n: 4 }).unwrap();
        assert!(!r.certified);
    }
}
