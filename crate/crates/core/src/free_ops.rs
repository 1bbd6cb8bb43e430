//! Random free unitaries for each resource theory.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::clifford_group::random_clifford;
use crate::error::{GfdError, Result};
use crate::factory::{random_couplings, seeded_rng, GAUSSIAN_QUBIT_CAP};
use crate::irrep::QrtKind;
use crate::pauli::{majorana, PauliString};
use crate::state::{PureState, System};

/// Haar-random 2x2 unitary (SU(2)).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> [[Complex64; 2]; 2] {
    let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = Complex64::new(v[0], v[1]) / norm;
    let b = Complex64::new(v[2], v[3]) / norm;
    [[a, -b.conj()], [b, a.conj()]]
}

/// Applies a 2x2 matrix to qubit `q`.
pub fn apply_single_qubit(amps: &mut [Complex64], q: u32, u: &[[Complex64; 2]; 2]) {
    let bit = 1usize << q;
    for b in 0..amps.len() {
        if b & bit == 0 {
            let (a0, a1) = (amps[b], amps[b | bit]);
            amps[b] = u[0][0] * a0 + u[0][1] * a1;
            amps[b | bit] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
}

/// `J_z`, `J_+` in the `m = s - i` ordering.
pub fn spin_matrices(twice_s: u32) -> (DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>) {
    let d = twice_s as usize + 1;
    let s = twice_s as f64 / 2.0;
    let mut jz = DMatrix::zeros(d, d);
    let mut jp = DMatrix::zeros(d, d);
    for i in 0..d {
        let m = s - i as f64;
        jz[(i, i)] = Complex64::new(m, 0.0);
        if i > 0 {
            // J+|m> = sqrt(s(s+1) - m(m+1)) |m+1>, and m+1 sits at row i-1.
            jp[(i - 1, i)] = Complex64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    (jx, jy, jz)
}

/// Haar-random SU(2) element in the spin-s representation, built from
/// Euler angles `exp(-iαJz) exp(-iβJy) exp(-iγJz)`.
pub fn random_spin_rotation<R: Rng + ?Sized>(twice_s: u32, rng: &mut R) -> DMatrix<Complex64> {
    let (_, jy, jz) = spin_matrices(twice_s);
    let alpha = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    let beta = (1.0 - 2.0 * rng.random::<f64>()).acos();
    let gamma = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    let rz = |angle: f64| DMatrix::from_diagonal(&jz.diagonal().map(|m| Complex64::from_polar(1.0, -angle * m.re)));
    let ry = (jy * Complex64::new(0.0, -beta)).exp();
    rz(alpha) * ry * rz(gamma)
}

/// `c_i c_j` for i < j, row-major over the upper triangle.
pub(crate) fn pairs(n: u32) -> Vec<PauliString> {
    let m = 2 * n;
    let mut out = Vec::with_capacity((m * (m - 1) / 2) as usize);
    for i in 0..m {
        for j in i + 1..m {
            let ci = majorana(n, i).expect("i < 2n");
            let cj = majorana(n, j).expect("j < 2n");
            out.push(ci.compose(&cj).expect("same size"));
        }
    }
    out
}

/// `exp(Σ_{i<j} h_ij c_i c_j) |ψ>` by scaled Taylor expansion of the action.
///
/// The generator's operator norm is half the nuclear norm of the
/// antisymmetric coupling matrix, which fixes the number of scaling steps.
pub fn apply_gaussian_unitary(state: &PureState, h: &[f64]) -> Result<PureState> {
    let n = state.qubits()?;
    if n > GAUSSIAN_QUBIT_CAP {
        return Err(GfdError::capacity("Gaussian unitary qubit count", GAUSSIAN_QUBIT_CAP as u64, n as u64));
    }
    let m = 2 * n as usize;
    if h.len() != m * (m - 1) / 2 {
        return Err(GfdError::Size(format!("{} couplings for {m} Majorana modes", h.len())));
    }
    let mut hm = DMatrix::<f64>::zeros(m, m);
    let mut k = 0;
    for i in 0..m {
        for j in i + 1..m {
            hm[(i, j)] = h[k];
            hm[(j, i)] = -h[k];
            k += 1;
        }
    }
    let norm_bound = hm.singular_values().sum() / 2.0;
    let steps = norm_bound.ceil().max(1.0) as usize;
    let terms: Vec<(f64, PauliString)> = h.iter().copied().zip(pairs(n)).filter(|(c, _)| *c != 0.0).collect();
    let scale = 1.0 / steps as f64;

    let d = state.dim();
    let zero = Complex64::new(0.0, 0.0);
    let mut v: Vec<Complex64> = state.amplitudes().to_vec();
    let mut scratch = vec![zero; d];
    let apply_generator = |src: &[Complex64], dst: &mut Vec<Complex64>, scratch: &mut Vec<Complex64>| {
        dst.iter_mut().for_each(|a| *a = zero);
        for (c, p) in &terms {
            p.apply_into(src, scratch);
            for (a, b) in dst.iter_mut().zip(scratch.iter()) {
                *a += b * (c * scale);
            }
        }
    };
    let mut term = vec![zero; d];
    let mut next = vec![zero; d];
    for _ in 0..steps {
        term.copy_from_slice(&v);
        let mut acc = v.clone();
        for order in 1..60 {
            apply_generator(&term, &mut next, &mut scratch);
            let inv = 1.0 / order as f64;
            for (t, nx) in term.iter_mut().zip(&next) {
                *t = nx * inv;
            }
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
            let tn: f64 = term.iter().map(|t| t.norm_sqr()).sum();
            if tn < 1e-34 {
                break;
            }
        }
        v = acc;
    }
    PureState::from_unnormalized(v, state.system())
}

fn check_system(state: &PureState, qrt: &QrtKind) -> Result<()> {
    if state.system() != qrt.system() {
        return Err(GfdError::Size(format!(
            "state on {:?} does not match the {} Hilbert space {:?}",
            state.system(),
            qrt.name(),
            qrt.system()
        )));
    }
    Ok(())
}

/// Applies one uniformly random free unitary of the QRT.
pub fn apply_random_free_unitary(state: &PureState, qrt: &QrtKind, seed: u64) -> Result<PureState> {
    check_system(state, qrt)?;
    let mut rng = seeded_rng(seed, 0);
    match *qrt {
        QrtKind::Bipartite2q | QrtKind::Multipartite { .. } => {
            let mut amps = state.amplitudes().to_vec();
            for q in 0..state.qubits()? {
                let u = random_su2(&mut rng);
                apply_single_qubit(&mut amps, q, &u);
            }
            PureState::from_unnormalized(amps, state.system())
        }
        QrtKind::Fermionic { n } => {
            let h = random_couplings(n, &mut rng);
            apply_gaussian_unitary(state, &h)
        }
        QrtKind::Spin { twice_s } => {
            let u = random_spin_rotation(twice_s, &mut rng);
            apply_dense(&u, state)
        }
        QrtKind::Clifford { n } => {
            let u = random_clifford(n, &mut rng)?.to_unitary()?;
            apply_dense(&u, state)
        }
    }
}

pub(crate) fn apply_dense(u: &DMatrix<Complex64>, state: &PureState) -> Result<PureState> {
    let v = u * DVector::from_column_slice(state.amplitudes());
    PureState::from_unnormalized(v.as_slice().to_vec(), state.system())
}

/// Convenience for building a spin coherent state on a random axis.
pub fn random_spin_coherent(twice_s: u32, seed: u64) -> Result<PureState> {
    let top = PureState::basis(System::Spin { twice_s }, 0)?;
    apply_random_free_unitary(&top, &QrtKind::Spin { twice_s }, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{make_state, Family, StateSpec};
    use crate::pauli::expectation;

    fn dense_gaussian(n: u32, h: &[f64]) -> DMatrix<Complex64> {
        let d = 1usize << n;
        let mut g = DMatrix::<Complex64>::zeros(d, d);
        for (c, p) in h.iter().zip(pairs(n)) {
            g += p.to_matrix() * Complex64::new(*c, 0.0);
        }
        g.exp()
    }

    #[test]
    fn gaussian_action_matches_dense_exponential() {
        for n in 2..=4u32 {
            let mut rng = seeded_rng(n as u64, 3);
            let h = random_couplings(n, &mut rng);
            let psi = make_state(&StateSpec::qubits(Family::Haar, n).with_seed(5)).unwrap();
            let fast = apply_gaussian_unitary(&psi, &h).unwrap();
            let dense = apply_dense(&dense_gaussian(n, &h), &psi).unwrap();
            assert!((fast.fidelity(&dense).unwrap() - 1.0).abs() < 1e-12);
            for (a, b) in fast.amplitudes().iter().zip(dense.amplitudes()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_couplings_are_identity() {
        let psi = make_state(&StateSpec::qubits(Family::Haar, 3).with_seed(1)).unwrap();
        let out = apply_gaussian_unitary(&psi, &[0.0; 15]).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn spin_rotation_is_unitary_and_matches_su2() {
        let mut rng = seeded_rng(4, 0);
        for ts in 0..=6 {
            let u = random_spin_rotation(ts, &mut rng);
            let id = DMatrix::<Complex64>::identity(ts as usize + 1, ts as usize + 1);
            assert!((u.adjoint() * &u - id).norm() < 1e-10);
        }
        let (jx, jy, jz) = spin_matrices(1);
        let half = Complex64::new(0.5, 0.0);
        assert!((jz[(0, 0)] - half).norm() < 1e-15);
        assert!((jx[(0, 1)] - half).norm() < 1e-15);
        assert!((jy[(0, 1)] - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        // [Jx, Jy] = i Jz
        let (jx, jy, jz) = spin_matrices(4);
        let comm = &jx * &jy - &jy * &jx;
        assert!((comm - jz * Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn free_unitaries_preserve_norm_and_parity() {
        let psi = make_state(&StateSpec::qubits(Family::HaarEvenParity, 4).with_seed(2)).unwrap();
        let z4 = PauliString::from_label("ZZZZ").unwrap();
        for seed in 0..5 {
            let out = apply_random_free_unitary(&psi, &QrtKind::Fermionic { n: 4 }, seed).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-12);
            assert!((expectation(&out, &z4).unwrap() - 1.0).abs() < 1e-10);
        }
        assert!(apply_random_free_unitary(&psi, &QrtKind::Multipartite { n: 3 }, 0).is_err());
    }

    #[test]
    fn product_stays_product() {
        let zero = make_state(&StateSpec::qubits(Family::Product, 2)).unwrap();
        let out = apply_random_free_unitary(&zero, &QrtKind::Bipartite2q, 9).unwrap();
        let a = out.amplitudes();
        // Product iff the 2x2 amplitude matrix has zero determinant.
        assert!((a[0] * a[3] - a[1] * a[2]).norm() < 1e-12);
    }
}
