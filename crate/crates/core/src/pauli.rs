//! Pauli strings in symplectic form and the Jordan-Wigner Majorana ladder.
//!
//! A `PauliString` is `i^phase * ⊗_k σ(x_k, z_k)` with σ(1,0)=X, σ(0,1)=Z and
//! σ(1,1)=Y=iXZ. Bit `k` of each mask refers to qubit `k`, which is also bit
//! `k` of a computational-basis index.

use std::fmt;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GfdError, Result};
use crate::state::PureState;

pub const MAX_QUBITS: u32 = 64;

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

pub(crate) fn i_pow(k: u32) -> Complex64 {
    I_POW[(k & 3) as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli1 {
    I,
    X,
    Y,
    Z,
}

impl Pauli1 {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli1::I => (false, false),
            Pauli1::X => (true, false),
            Pauli1::Y => (true, true),
            Pauli1::Z => (false, true),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    n: u32,
    x: u64,
    z: u64,
    phase: u8,
}

fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn new(n: u32, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(GfdError::Parameter(format!("qubit count {n} outside 1..=64")));
        }
        if (x | z) & !mask(n) != 0 {
            return Err(GfdError::Parameter(format!("masks exceed {n} qubits")));
        }
        Ok(Self { n, x, z, phase: phase & 3 })
    }

    pub fn identity(n: u32) -> Result<Self> {
        Self::new(n, 0, 0, 0)
    }

    pub fn single(n: u32, qubit: u32, p: Pauli1) -> Result<Self> {
        if qubit >= n {
            return Err(GfdError::Range(format!("qubit {qubit} >= {n}")));
        }
        let (x, z) = p.bits();
        Self::new(n, (x as u64) << qubit, (z as u64) << qubit, 0)
    }

    /// Parses labels such as `"XIZ"`, `"-iYY"`; character `k` acts on qubit `k`.
    pub fn from_label(label: &str) -> Result<Self> {
        let (phase, body) = if let Some(r) = label.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = label.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = label.strip_prefix('i') {
            (1, r)
        } else if let Some(r) = label.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = label.strip_prefix('+') {
            (0, r)
        } else {
            (0, label)
        };
        let n = body.chars().count() as u32;
        let (mut x, mut z) = (0u64, 0u64);
        for (k, ch) in body.chars().enumerate() {
            let p = match ch {
                'I' => Pauli1::I,
                'X' => Pauli1::X,
                'Y' => Pauli1::Y,
                'Z' => Pauli1::Z,
                other => return Err(GfdError::Parameter(format!("bad Pauli character {other:?}"))),
            };
            let (bx, bz) = p.bits();
            x |= (bx as u64) << k;
            z |= (bz as u64) << k;
        }
        Self::new(n, x, z, phase)
    }

    pub fn num_qubits(&self) -> u32 {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(self, phase: u8) -> Self {
        Self { phase: phase & 3, ..self }
    }

    pub fn site(&self, qubit: u32) -> Pauli1 {
        match ((self.x >> qubit) & 1, (self.z >> qubit) & 1) {
            (0, 0) => Pauli1::I,
            (1, 0) => Pauli1::X,
            (1, 1) => Pauli1::Y,
            _ => Pauli1::Z,
        }
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (other.x & self.z).count_ones()).is_multiple_of(2)
    }

    /// Symplectic vector `x | z << 64`.
    pub fn symplectic(&self) -> u128 {
        self.x as u128 | ((self.z as u128) << 64)
    }

    /// Product `self * other` with exact phase.
    pub fn compose(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(GfdError::Size(format!(
                "composing {}-qubit and {}-qubit Pauli strings",
                self.n, other.n
            )));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &PauliString) -> PauliString {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let p = self.phase as i64
            + other.phase as i64
            + (self.x & self.z).count_ones() as i64
            + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64;
        PauliString { n: self.n, x, z, phase: p.rem_euclid(4) as u8 }
    }

    /// Writes `P|psi>` into `out`.
    pub fn apply_into(&self, amps: &[Complex64], out: &mut [Complex64]) {
        let base = i_pow(self.phase as u32 + (self.x & self.z).count_ones());
        for (b, a) in amps.iter().enumerate() {
            let sign = if (self.z & b as u64).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            out[b ^ self.x as usize] = base * sign * a;
        }
    }

    pub fn apply(&self, state: &PureState) -> Result<Vec<Complex64>> {
        self.check_state(state)?;
        let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
        self.apply_into(state.amplitudes(), &mut out);
        Ok(out)
    }

    /// <psi|P|psi> as a complex number, no Hermiticity requirement.
    pub(crate) fn expectation_complex(&self, amps: &[Complex64]) -> Complex64 {
        let base = i_pow(self.phase as u32 + (self.x & self.z).count_ones());
        let x = self.x as usize;
        let mut re = crate::numeric::KahanSum::new();
        let mut im = crate::numeric::KahanSum::new();
        for (b, a) in amps.iter().enumerate() {
            let t = amps[b ^ x].conj() * a;
            let t = if (self.z & b as u64).count_ones().is_multiple_of(2) { t } else { -t };
            re.add(t.re);
            im.add(t.im);
        }
        base * Complex64::new(re.value(), im.value())
    }

    fn check_state(&self, state: &PureState) -> Result<()> {
        let n = state.qubits()?;
        if n != self.n {
            return Err(GfdError::Size(format!("{}-qubit Pauli on a {n}-qubit state", self.n)));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let d = 1usize << self.n;
        let base = i_pow(self.phase as u32 + (self.x & self.z).count_ones());
        let mut m = DMatrix::zeros(d, d);
        for b in 0..d {
            let sign = if (self.z & b as u64).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            m[(b ^ self.x as usize, b)] = base * sign;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for k in 0..self.n {
            let c = match self.site(k) {
                Pauli1::I => 'I',
                Pauli1::X => 'X',
                Pauli1::Y => 'Y',
                Pauli1::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// <psi|P|psi> for a Hermitian Pauli string, in O(d).
pub fn expectation(state: &PureState, p: &PauliString) -> Result<f64> {
    if !p.is_hermitian() {
        return Err(GfdError::Contract(format!("{p} is not Hermitian")));
    }
    p.check_state(state)?;
    Ok(p.expectation_complex(state.amplitudes()).re)
}

/// Expectations of every phase-free Pauli string, indexed `x << n | z`.
///
/// Uses one Walsh-Hadamard transform per X pattern, O(d^2 log d) overall.
pub fn pauli_expectation_table(state: &PureState) -> Result<Vec<f64>> {
    let n = state.qubits()?;
    let d = state.dim();
    let amps = state.amplitudes();
    let mut table = vec![0.0; d * d];
    table.par_chunks_mut(d).enumerate().for_each(|(x, row)| {
        let mut f: Vec<Complex64> = (0..d).map(|b| amps[b ^ x].conj() * amps[b]).collect();
        walsh_hadamard(&mut f);
        for (z, slot) in row.iter_mut().enumerate() {
            let k = ((x & z) as u64).count_ones();
            *slot = (i_pow(k) * f[z]).re;
        }
    });
    debug_assert_eq!(table.len(), 1usize << (2 * n));
    Ok(table)
}

fn walsh_hadamard(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Majorana operator `c_j` (0-based, `j < 2n`) under Jordan-Wigner:
/// `c_{2q} = Z_0..Z_{q-1} X_q`, `c_{2q+1} = Z_0..Z_{q-1} Y_q`.
pub fn majorana(n: u32, j: u32) -> Result<PauliString> {
    if j >= 2 * n {
        return Err(GfdError::Range(format!("Majorana index {j} >= 2n = {}", 2 * n)));
    }
    let q = j / 2;
    let x = 1u64 << q;
    let below = mask(q);
    let z = if j.is_multiple_of(2) { below } else { below | x };
    PauliString::new(n, x, z, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MajoranaMonomial {
    n: u32,
    indicator: u128,
    phase: u8,
}

impl MajoranaMonomial {
    pub fn new(n: u32, indicator: u128, phase: u8) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(GfdError::Parameter(format!("qubit count {n} outside 1..=64")));
        }
        if n < 64 && indicator >> (2 * n) != 0 {
            return Err(GfdError::Parameter(format!("indicator exceeds 2n = {} modes", 2 * n)));
        }
        Ok(Self { n, indicator, phase: phase & 3 })
    }

    pub fn num_qubits(&self) -> u32 {
        self.n
    }

    pub fn indicator(&self) -> u128 {
        self.indicator
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn weight(&self) -> u32 {
        self.indicator.count_ones()
    }

    pub fn indices(&self) -> Vec<u32> {
        (0..2 * self.n).filter(|j| (self.indicator >> j) & 1 == 1).collect()
    }

    /// `i^phase * c_{i1} c_{i2} ... c_{ik}` with ascending indices.
    pub fn to_pauli(&self) -> PauliString {
        let mut acc = PauliString { n: self.n, x: 0, z: 0, phase: 0 };
        for j in self.indices() {
            let c = majorana(self.n, j).expect("index below 2n");
            acc = acc.compose_unchecked(&c);
        }
        let phase = acc.phase + self.phase;
        acc.with_phase(phase)
    }
}

/// Writes `p` as a phase times an ordered Majorana monomial.
///
/// The Jordan-Wigner vectors form a triangular system over GF(2): qubit `q`
/// carries X-type weight `a_q ^ b_q` (a = even mode, b = odd mode) and Z-type
/// weight `b_q ^ parity(x above q)`; back-substitution from the top qubit
/// recovers the indicator. The phase is then fixed by explicit composition.
pub fn majorana_decompose(p: &PauliString) -> MajoranaMonomial {
    let n = p.n;
    let mut indicator: u128 = 0;
    let mut above = 0u32;
    for q in (0..n).rev() {
        let xq = ((p.x >> q) & 1) as u32;
        let zq = ((p.z >> q) & 1) as u32;
        let b = zq ^ (above & 1);
        let a = xq ^ b;
        indicator |= (a as u128) << (2 * q);
        indicator |= (b as u128) << (2 * q + 1);
        above ^= xq;
    }
    let bare = MajoranaMonomial { n, indicator, phase: 0 }.to_pauli();
    debug_assert_eq!((bare.x, bare.z), (p.x, p.z));
    let phase = (p.phase as i32 - bare.phase as i32).rem_euclid(4) as u8;
    MajoranaMonomial { n, indicator, phase }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SupportSelector {
    /// Bit `k` set means a non-identity factor on qubit `k`.
    Pattern(u64),
    MajoranaWeight(u32),
}

/// Hermitian (phase-free) Pauli strings spanning one support class, in a
/// fixed order. The Hilbert-Schmidt factor `2^{-n/2}` is applied by the
/// basis that consumes them.
pub fn enumerate_support_class(n: u32, selector: SupportSelector) -> Result<Vec<PauliString>> {
    if n == 0 || n > MAX_QUBITS {
        return Err(GfdError::Parameter(format!("qubit count {n} outside 1..=64")));
    }
    match selector {
        SupportSelector::Pattern(pattern) => {
            if pattern & !mask(n) != 0 {
                return Err(GfdError::Range(format!("support pattern exceeds {n} qubits")));
            }
            let sites: Vec<u32> = (0..n).filter(|k| (pattern >> k) & 1 == 1).collect();
            let count = 3u128.checked_pow(sites.len() as u32).unwrap_or(u128::MAX);
            check_enum_cap(count)?;
            let mut out = Vec::with_capacity(count as usize);
            for code in 0..count as u64 {
                let (mut x, mut z, mut c) = (0u64, 0u64, code);
                for &k in &sites {
                    let (bx, bz) = [Pauli1::X, Pauli1::Y, Pauli1::Z][(c % 3) as usize].bits();
                    c /= 3;
                    x |= (bx as u64) << k;
                    z |= (bz as u64) << k;
                }
                out.push(PauliString { n, x, z, phase: 0 });
            }
            Ok(out)
        }
        SupportSelector::MajoranaWeight(alpha) => {
            if alpha > 2 * n {
                return Err(GfdError::Range(format!("Majorana weight {alpha} > 2n = {}", 2 * n)));
            }
            let count = crate::numeric::binomial_u128(2 * n as u64, alpha as u64).unwrap_or(u128::MAX);
            check_enum_cap(count)?;
            let modes: Vec<PauliString> = (0..2 * n).map(|j| majorana(n, j).expect("j < 2n")).collect();
            Ok((0..2 * n as usize)
                .combinations(alpha as usize)
                .map(|subset| {
                    let mut acc = PauliString { n, x: 0, z: 0, phase: 0 };
                    for j in subset {
                        acc = acc.compose_unchecked(&modes[j]);
                    }
                    acc.with_phase(0)
                })
                .collect())
        }
    }
}

const ENUM_CAP: u128 = 1 << 26;

fn check_enum_cap(count: u128) -> Result<()> {
    if count > ENUM_CAP {
        return Err(GfdError::capacity(
            "Pauli class enumeration size",
            ENUM_CAP as u64,
            count.min(u64::MAX as u128) as u64,
        ));
    }
    Ok(())
}
