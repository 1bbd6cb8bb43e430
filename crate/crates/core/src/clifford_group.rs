//! Uniform random Clifford elements (Bravyi-Maslov canonical form) and their
//! dense unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{GfdError, Result};
use crate::pauli::PauliString;

/// Largest qubit count for which the dense unitary is materialized.
pub const CLIFFORD_UNITARY_CAP: u32 = 10;

type BitMatrix = Vec<Vec<bool>>;

/// Images of `X_0..X_{n-1}` (destabilizers) followed by images of
/// `Z_0..Z_{n-1}` (stabilizers) under conjugation `P -> U P U†`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    n: u32,
    rows: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn num_qubits(&self) -> u32 {
        self.n
    }

    pub fn destabilizer(&self, q: u32) -> &PauliString {
        &self.rows[q as usize]
    }

    pub fn stabilizer(&self, q: u32) -> &PauliString {
        &self.rows[(self.n + q) as usize]
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    /// Rows obey the canonical commutation relations of X_i, Z_i.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n as usize;
        (0..2 * n).all(|a| {
            (0..2 * n).all(|b| {
                let expect_anti = a != b && a % n == b % n;
                self.rows[a].commutes_with(&self.rows[b]) != expect_anti
            })
        }) && self.rows.iter().all(|r| r.is_hermitian())
    }

    /// `U P U†`.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        if p.num_qubits() != self.n {
            return Err(GfdError::Size(format!("{}-qubit Pauli through a {}-qubit Clifford", p.num_qubits(), self.n)));
        }
        let (x, z) = (p.x_mask(), p.z_mask());
        // P = i^(phase + |x&z|) X^x Z^z
        let lead = (p.phase_exp() as u32 + (x & z).count_ones()) % 4;
        let mut acc = PauliString::identity(self.n)?.with_phase(lead as u8);
        for q in 0..self.n {
            if (x >> q) & 1 == 1 {
                acc = acc.compose(self.destabilizer(q))?;
            }
        }
        for q in 0..self.n {
            if (z >> q) & 1 == 1 {
                acc = acc.compose(self.stabilizer(q))?;
            }
        }
        Ok(acc)
    }

    /// Dense unitary with `U X_i U† = D_i`, `U Z_i U† = S_i`, up to a global phase.
    pub fn to_unitary(&self) -> Result<DMatrix<Complex64>> {
        if self.n > CLIFFORD_UNITARY_CAP {
            return Err(GfdError::capacity("Clifford unitary qubit count", CLIFFORD_UNITARY_CAP as u64, self.n as u64));
        }
        let d = 1usize << self.n;
        let zero = Complex64::new(0.0, 0.0);
        let mut scratch = vec![zero; d];
        let project = |v: &mut Vec<Complex64>, scratch: &mut Vec<Complex64>| {
            for q in 0..self.n {
                self.stabilizer(q).apply_into(v, scratch);
                for (a, b) in v.iter_mut().zip(scratch.iter()) {
                    *a = (*a + b) * 0.5;
                }
            }
        };
        // U|0> is the joint +1 eigenvector of the stabilizers; some basis
        // vector has overlap at least 1/d with it.
        let mut phi0 = Vec::new();
        for b in 0..d {
            let mut v = vec![zero; d];
            v[b] = Complex64::new(1.0, 0.0);
            project(&mut v, &mut scratch);
            let norm2: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            if norm2 >= 1.0 / d as f64 - 1e-12 {
                let norm = norm2.sqrt();
                phi0 = v.into_iter().map(|a| a / norm).collect();
                break;
            }
        }
        if phi0.is_empty() {
            return Err(GfdError::Internal("stabilizer group has no joint eigenvector".into()));
        }
        let mut columns: Vec<Vec<Complex64>> = vec![phi0];
        for x in 1..d {
            let hi = usize::BITS - 1 - x.leading_zeros();
            let prev = &columns[x ^ (1 << hi)];
            let mut col = vec![zero; d];
            self.destabilizer(hi).apply_into(prev, &mut col);
            columns.push(col);
        }
        Ok(DMatrix::from_fn(d, d, |r, col| columns[col][r]))
    }
}

fn sample_qmallows<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<bool>, Vec<usize>) {
    let mut had = vec![false; n];
    let mut perm = vec![0; n];
    let mut inds: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let m = n - i;
        let eps = 4f64.powi(-(m as i32));
        let r: f64 = rng.random();
        let index = -((r + (1.0 - r) * eps).log2().ceil()) as usize;
        had[i] = index < m;
        let k = if index < m { index } else { 2 * m - index - 1 };
        perm[i] = inds.remove(k);
    }
    (had, perm)
}

fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        m[i][i] = rng.random();
    }
    for i in 0..n {
        for j in 0..i {
            let b = rng.random();
            m[i][j] = b;
            m[j][i] = b;
        }
    }
    m
}

fn random_unit_lower<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        m[i][i] = true;
        for j in 0..i {
            m[i][j] = rng.random();
        }
    }
    m
}

fn matmul(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r)
        .map(|i| (0..c).map(|j| (0..k).fold(false, |acc, t| acc ^ (a[i][t] & b[t][j]))).collect())
        .collect()
}

fn inverse_unit_lower(l: &BitMatrix) -> BitMatrix {
    let n = l.len();
    let mut x = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = i == j;
            for k in 0..i {
                v ^= l[i][k] & x[k][j];
            }
            x[i][j] = v;
        }
    }
    x
}

fn transpose(m: &BitMatrix) -> BitMatrix {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect()
}

fn block(delta: &BitMatrix, gamma: &BitMatrix) -> BitMatrix {
    let n = delta.len();
    let prod = matmul(gamma, delta);
    let inv_t = transpose(&inverse_unit_lower(delta));
    let mut out = vec![vec![false; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = delta[i][j];
            out[n + i][j] = prod[i][j];
            out[n + i][n + j] = inv_t[i][j];
        }
    }
    out
}

/// Uniformly random n-qubit Clifford, as a tableau.
pub fn random_clifford<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<CliffordTableau> {
    if n == 0 || n > 64 {
        return Err(GfdError::Parameter(format!("Clifford qubit count {n} outside 1..=64")));
    }
    let nu = n as usize;
    let (had, perm) = sample_qmallows(nu, rng);
    let gamma1 = random_symmetric(nu, rng);
    let gamma2 = random_symmetric(nu, rng);
    let delta1 = random_unit_lower(nu, rng);
    let delta2 = random_unit_lower(nu, rng);
    let table1 = block(&delta1, &gamma1);
    let table2 = block(&delta2, &gamma2);

    let mut table: BitMatrix = Vec::with_capacity(2 * nu);
    for &p in &perm {
        table.push(table2[p].clone());
    }
    for &p in &perm {
        table.push(table2[nu + p].clone());
    }
    for (i, &h) in had.iter().enumerate() {
        if h {
            table.swap(i, i + nu);
        }
    }
    let symp = matmul(&table1, &table);

    let mut rows = Vec::with_capacity(2 * nu);
    for row in &symp {
        let mut x = 0u64;
        let mut z = 0u64;
        for q in 0..nu {
            x |= (row[q] as u64) << q;
            z |= (row[nu + q] as u64) << q;
        }
        let sign: bool = rng.random();
        rows.push(PauliString::new(n, x, z, if sign { 2 } else { 0 })?);
    }
    let t = CliffordTableau { n, rows };
    debug_assert!(t.is_symplectic());
    Ok(t)
}
