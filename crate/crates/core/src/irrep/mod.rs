//! Irrep catalogs and orthonormal operator bases for each resource theory.

mod clifford;
mod spin;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GfdError, Result};
use crate::numeric::binomial_u128;
use crate::pauli::{enumerate_support_class, PauliString, SupportSelector};
use crate::state::System;

pub use clifford::{clifford_dimensions, clifford_nullspace_dimension};
pub use spin::spin_tensor_operator;

/// Largest qubit count for Pauli-class bases and brute-force profiles.
pub const PAULI_BASIS_CAP: u32 = 10;
/// Largest 2s for spin bases.
pub const SPIN_BASIS_TWICE_CAP: u32 = 24;
/// Largest qubit count for Clifford bases on two copies.
pub const CLIFFORD_BASIS_CAP: u32 = 3;
/// Largest qubit count for listing every support pattern individually.
pub const SUPPORT_LISTING_CAP: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QrtKind {
    Bipartite2q,
    Multipartite { n: u32 },
    Fermionic { n: u32 },
    Spin { twice_s: u32 },
    Clifford { n: u32 },
}

impl QrtKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            QrtKind::Multipartite { n } | QrtKind::Fermionic { n } | QrtKind::Clifford { n } if n == 0 || n > 64 => {
                Err(GfdError::Parameter(format!("qubit count {n} outside 1..=64")))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            QrtKind::Bipartite2q => "bipartite2q",
            QrtKind::Multipartite { .. } => "multipartite",
            QrtKind::Fermionic { .. } => "fermionic",
            QrtKind::Spin { .. } => "spin",
            QrtKind::Clifford { .. } => "clifford",
        }
    }

    pub fn system(&self) -> System {
        match *self {
            QrtKind::Bipartite2q => System::Qubits { n: 2 },
            QrtKind::Multipartite { n } | QrtKind::Fermionic { n } | QrtKind::Clifford { n } => System::Qubits { n },
            QrtKind::Spin { twice_s } => System::Spin { twice_s },
        }
    }

    pub fn qubits(&self) -> Option<u32> {
        match self.system() {
            System::Qubits { n } => Some(n),
            System::Spin { .. } => None,
        }
    }

    /// Hilbert-space dimension `d` (may exceed usize for metadata-only use).
    pub fn hilbert_dim(&self) -> u128 {
        match self.system() {
            System::Qubits { n } => 1u128 << n.min(127),
            System::Spin { twice_s } => twice_s as u128 + 1,
        }
    }

    /// Dimension of the decomposed operator space: d^2, or d^4 for the
    /// two-copy Clifford decomposition. `None` when it overflows.
    pub fn operator_space_dim(&self) -> Option<u128> {
        let d = self.hilbert_dim();
        let d2 = d.checked_mul(d)?;
        match self {
            QrtKind::Clifford { .. } => d2.checked_mul(d2),
            _ => Some(d2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CliffordIrrep {
    Id,
    R,
    L,
    Zero,
    One,
    Two,
    Residual,
}

impl CliffordIrrep {
    pub const ALL: [CliffordIrrep; 7] = [
        CliffordIrrep::Id,
        CliffordIrrep::R,
        CliffordIrrep::L,
        CliffordIrrep::Zero,
        CliffordIrrep::One,
        CliffordIrrep::Two,
        CliffordIrrep::Residual,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CliffordIrrep::Id => "id",
            CliffordIrrep::R => "r",
            CliffordIrrep::L => "l",
            CliffordIrrep::Zero => "zero",
            CliffordIrrep::One => "one",
            CliffordIrrep::Two => "two",
            CliffordIrrep::Residual => "residual",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        CliffordIrrep::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| GfdError::Parameter(format!("unknown Clifford class {s:?}")))
    }
}

/// Irrep (or aggregation class) label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum IrrepLabel {
    /// Support pattern over `n` qubits; bit `k` is qubit `k`.
    Support { n: u32, pattern: u64 },
    /// All support patterns of Hamming weight `k`.
    Weight { k: u32 },
    /// Products of `alpha` distinct Majoranas.
    Majorana { alpha: u32 },
    /// Majorana weights `alpha` and `2n - alpha` together (`alpha <= n`).
    Mirror { alpha: u32, n: u32 },
    /// Spin-`alpha` irrep of operator space.
    Spin { alpha: u32 },
    Clifford { irrep: CliffordIrrep },
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IrrepLabel::Support { n, pattern } => {
                write!(f, "(")?;
                for k in 0..n {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", (pattern >> k) & 1)?;
                }
                write!(f, ")")
            }
            IrrepLabel::Weight { k } => write!(f, "w={k}"),
            IrrepLabel::Majorana { alpha } => write!(f, "a={alpha}"),
            IrrepLabel::Mirror { alpha, n } => {
                if alpha == n {
                    write!(f, "a={alpha}")
                } else {
                    write!(f, "a={alpha}+{}", 2 * n - alpha)
                }
            }
            IrrepLabel::Spin { alpha } => write!(f, "s'={alpha}"),
            IrrepLabel::Clifford { irrep } => write!(f, "{}", irrep.name()),
        }
    }
}

impl IrrepLabel {
    /// Builds a support label from per-qubit flags (qubit 0 first).
    pub fn support(bits: &[u8]) -> IrrepLabel {
        let pattern = bits.iter().enumerate().fold(0u64, |acc, (k, &b)| acc | ((b as u64 & 1) << k));
        IrrepLabel::Support { n: bits.len() as u32, pattern }
    }

    /// Parses a label string in the context of a QRT (inverse of `Display`).
    pub fn parse(qrt: &QrtKind, s: &str) -> Result<IrrepLabel> {
        let bad = || GfdError::Parameter(format!("cannot parse class label {s:?} for {}", qrt.name()));
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let bits: Vec<u8> = inner
                .split(',')
                .map(|t| match t.trim() {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    _ => Err(bad()),
                })
                .collect::<Result<_>>()?;
            return Ok(IrrepLabel::support(&bits));
        }
        if let Some(k) = s.strip_prefix("w=") {
            return Ok(IrrepLabel::Weight { k: num(k)? });
        }
        if let Some(a) = s.strip_prefix("s'=") {
            return Ok(IrrepLabel::Spin { alpha: num(a)? });
        }
        if let Some(a) = s.strip_prefix("a=") {
            if let Some((lo, _)) = a.split_once('+') {
                let n = qrt.qubits().ok_or_else(bad)?;
                return Ok(IrrepLabel::Mirror { alpha: num(lo)?, n });
            }
            return Ok(IrrepLabel::Majorana { alpha: num(a)? });
        }
        CliffordIrrep::from_name(s).map(|irrep| IrrepLabel::Clifford { irrep }).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IrrepClass {
    pub label: IrrepLabel,
    /// Dimension of each irrep in the class.
    pub dimension: u128,
    /// Number of equal-dimension irreps aggregated in the class.
    pub count: u128,
}

impl IrrepClass {
    pub fn total_dimension(&self) -> u128 {
        self.dimension * self.count
    }
}

/// One Hermitian, Hilbert-Schmidt-normalized basis operator.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisOperator {
    /// `scale * P` on one copy.
    Pauli { pauli: PauliString, scale: f64 },
    /// `Σ c P⊗Q` on two copies.
    PauliPairs { terms: Vec<(f64, PauliString, PauliString)> },
    Dense(DMatrix<Complex64>),
}

impl BasisOperator {
    pub fn copies(&self) -> usize {
        match self {
            BasisOperator::PauliPairs { .. } => 2,
            _ => 1,
        }
    }

    /// Dense matrix on the copy space (copy 1 is the high tensor factor).
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match self {
            BasisOperator::Pauli { pauli, scale } => pauli.to_matrix() * Complex64::new(*scale, 0.0),
            BasisOperator::PauliPairs { terms } => {
                let d = 1usize << terms[0].1.num_qubits();
                let mut m = DMatrix::zeros(d * d, d * d);
                for (c, p, q) in terms {
                    m += p.to_matrix().kronecker(&q.to_matrix()) * Complex64::new(*c, 0.0);
                }
                m
            }
            BasisOperator::Dense(m) => m.clone(),
        }
    }
}

/// Hilbert-Schmidt inner product `Tr[a† b]`.
pub fn hs_inner(a: &BasisOperator, b: &BasisOperator) -> Result<Complex64> {
    use BasisOperator::*;
    let pauli_tr = |p: &PauliString, q: &PauliString| -> Complex64 {
        // Tr[p† q] for Pauli strings.
        if p.x_mask() != q.x_mask() || p.z_mask() != q.z_mask() {
            return Complex64::new(0.0, 0.0);
        }
        let d = (p.num_qubits() as f64).exp2();
        crate::pauli::i_pow((q.phase_exp() as u32 + 4 - p.phase_exp() as u32) % 4) * d
    };
    match (a, b) {
        (Pauli { pauli: p, scale: s }, Pauli { pauli: q, scale: t }) => Ok(pauli_tr(p, q) * (s * t)),
        (PauliPairs { terms: ta }, PauliPairs { terms: tb }) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c1, p1, q1) in ta {
                for (c2, p2, q2) in tb {
                    acc += pauli_tr(p1, p2) * pauli_tr(q1, q2) * (c1 * c2);
                }
            }
            Ok(acc)
        }
        _ => {
            let (ma, mb) = (a.to_dense(), b.to_dense());
            if ma.shape() != mb.shape() {
                return Err(GfdError::Size("operators act on different spaces".into()));
            }
            Ok((ma.adjoint() * mb).trace())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    pub qrt: QrtKind,
    pub label: IrrepLabel,
    pub elements: Vec<BasisOperator>,
}

impl OperatorBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Gram matrix of HS inner products.
    pub fn gram(&self) -> Result<DMatrix<Complex64>> {
        let k = self.elements.len();
        let mut g = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = hs_inner(&self.elements[i], &self.elements[j])?;
            }
        }
        Ok(g)
    }
}

fn support_count_cap(n: u32) -> Result<()> {
    if n > SUPPORT_LISTING_CAP {
        return Err(GfdError::capacity("per-pattern irrep listing qubit count", SUPPORT_LISTING_CAP as u64, n as u64));
    }
    Ok(())
}

/// Complete per-irrep class list. Multipartite listings enumerate all
/// `2^n` support patterns and are capped; use [`class_table`] with an
/// aggregation for larger sizes.
pub fn irrep_table(qrt: &QrtKind) -> Result<Vec<IrrepClass>> {
    qrt.validate()?;
    let one = |label, dimension| IrrepClass { label, dimension, count: 1 };
    Ok(match *qrt {
        QrtKind::Bipartite2q | QrtKind::Multipartite { .. } => {
            let n = qrt.qubits().expect("qubit QRT");
            support_count_cap(n)?;
            (0..1u64 << n)
                .map(|p| one(IrrepLabel::Support { n, pattern: p }, 3u128.pow(p.count_ones())))
                .collect()
        }
        QrtKind::Fermionic { n } => (0..=2 * n)
            .map(|a| one(IrrepLabel::Majorana { alpha: a }, binomial_u128(2 * n as u64, a as u64).expect("n <= 64")))
            .collect(),
        QrtKind::Spin { twice_s } => (0..=twice_s).map(|a| one(IrrepLabel::Spin { alpha: a }, 2 * a as u128 + 1)).collect(),
        QrtKind::Clifford { n } => {
            let dims = clifford_dimensions(n)?;
            CliffordIrrep::ALL
                .iter()
                .zip(dims)
                .map(|(&irrep, dim)| one(IrrepLabel::Clifford { irrep }, dim))
                .collect()
        }
    })
}

/// Aggregation classes by Hamming weight (multipartite) or mirror pairs
/// (fermionic); available for any size up to 64 qubits.
pub fn weight_classes(n: u32) -> Vec<IrrepClass> {
    (0..=n)
        .map(|k| IrrepClass {
            label: IrrepLabel::Weight { k },
            dimension: 3u128.checked_pow(k).unwrap_or(u128::MAX),
            count: binomial_u128(n as u64, k as u64).expect("n <= 64"),
        })
        .collect()
}

pub fn mirror_classes(n: u32) -> Vec<IrrepClass> {
    (0..=n)
        .map(|a| IrrepClass {
            label: IrrepLabel::Mirror { alpha: a, n },
            dimension: binomial_u128(2 * n as u64, a as u64).expect("n <= 64"),
            count: if a == n { 1 } else { 2 },
        })
        .collect()
}

/// Σ count × dimension over a class list.
pub fn checksum(classes: &[IrrepClass]) -> Option<u128> {
    classes.iter().try_fold(0u128, |acc, c| acc.checked_add(c.dimension.checked_mul(c.count)?))
}

/// Basis caches for the bases that are expensive to build.
type BasisCache = RwLock<HashMap<(QrtKind, IrrepLabel), Arc<OperatorBasis>>>;

fn cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn hs_scale(n: u32) -> f64 {
    (-(n as f64) / 2.0).exp2()
}

fn pauli_basis(qrt: QrtKind, label: IrrepLabel, n: u32, selectors: Vec<SupportSelector>) -> Result<OperatorBasis> {
    if n > PAULI_BASIS_CAP {
        return Err(GfdError::capacity("Pauli basis qubit count", PAULI_BASIS_CAP as u64, n as u64));
    }
    let scale = hs_scale(n);
    let mut elements = Vec::new();
    for sel in selectors {
        for pauli in enumerate_support_class(n, sel)? {
            elements.push(BasisOperator::Pauli { pauli, scale });
        }
    }
    Ok(OperatorBasis { qrt, label, elements })
}

/// Orthonormal Hermitian basis of one irrep (or the union over an
/// aggregation class).
pub fn irrep_basis(qrt: &QrtKind, label: &IrrepLabel) -> Result<Arc<OperatorBasis>> {
    qrt.validate()?;
    let key = (*qrt, *label);
    if let Some(b) = cache().read().expect("basis cache poisoned").get(&key) {
        return Ok(b.clone());
    }
    let mismatch = || GfdError::Parameter(format!("class {label} does not belong to {}", qrt.name()));
    let basis = match (*qrt, *label) {
        (QrtKind::Bipartite2q | QrtKind::Multipartite { .. }, IrrepLabel::Support { n, pattern }) => {
            if Some(n) != qrt.qubits() {
                return Err(mismatch());
            }
            pauli_basis(*qrt, *label, n, vec![SupportSelector::Pattern(pattern)])?
        }
        (QrtKind::Bipartite2q | QrtKind::Multipartite { .. }, IrrepLabel::Weight { k }) => {
            let n = qrt.qubits().expect("qubit QRT");
            if k > n {
                return Err(GfdError::Range(format!("weight {k} > n = {n}")));
            }
            if n > PAULI_BASIS_CAP {
                return Err(GfdError::capacity("Pauli basis qubit count", PAULI_BASIS_CAP as u64, n as u64));
            }
            let sels = (0..1u64 << n)
                .filter(|p| p.count_ones() == k)
                .map(SupportSelector::Pattern)
                .collect();
            pauli_basis(*qrt, *label, n, sels)?
        }
        (QrtKind::Fermionic { n }, IrrepLabel::Majorana { alpha }) => {
            pauli_basis(*qrt, *label, n, vec![SupportSelector::MajoranaWeight(alpha)])?
        }
        (QrtKind::Fermionic { n }, IrrepLabel::Mirror { alpha, n: ln }) => {
            if ln != n || alpha > n {
                return Err(mismatch());
            }
            let mut sels = vec![SupportSelector::MajoranaWeight(alpha)];
            if alpha != n {
                sels.push(SupportSelector::MajoranaWeight(2 * n - alpha));
            }
            pauli_basis(*qrt, *label, n, sels)?
        }
        (QrtKind::Spin { twice_s }, IrrepLabel::Spin { alpha }) => {
            let b = spin::spin_basis(*qrt, twice_s, alpha)?;
            let b = Arc::new(b);
            cache().write().expect("basis cache poisoned").insert(key, b.clone());
            return Ok(b);
        }
        (QrtKind::Clifford { n }, IrrepLabel::Clifford { irrep }) => {
            let b = Arc::new(clifford::clifford_basis(*qrt, n, irrep)?);
            cache().write().expect("basis cache poisoned").insert(key, b.clone());
            return Ok(b);
        }
        _ => return Err(mismatch()),
    };
    Ok(Arc::new(basis))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_orthonormal(b: &OperatorBasis) {
        let g = b.gram().unwrap();
        let id = DMatrix::<Complex64>::identity(b.len(), b.len());
        assert!((g - id).norm() < 1e-10, "basis {} not orthonormal", b.label);
    }

    #[test]
    fn multipartite_table() {
        let t = irrep_table(&QrtKind::Multipartite { n: 2 }).unwrap();
        let mut dims: Vec<u128> = t.iter().map(|c| c.dimension).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 3, 3, 9]);
        assert_eq!(checksum(&t), Some(16));
        assert!(matches!(irrep_table(&QrtKind::Multipartite { n: 30 }), Err(GfdError::Capacity { .. })));
        assert_eq!(checksum(&weight_classes(30)), Some(1u128 << 60));
        assert_eq!(checksum(&weight_classes(64)), None);
    }

    #[test]
    fn spin_and_fermionic_tables() {
        let t = irrep_table(&QrtKind::Spin { twice_s: 2 }).unwrap();
        assert_eq!(t.iter().map(|c| c.dimension).collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(checksum(&t), Some(9));
        for n in 1..=40 {
            let f = irrep_table(&QrtKind::Fermionic { n }).unwrap();
            assert_eq!(checksum(&f), Some(1u128 << (2 * n)));
            assert_eq!(checksum(&mirror_classes(n)), Some(1u128 << (2 * n)));
        }
    }

    #[test]
    fn clifford_table() {
        for n in 1..=6 {
            let t = irrep_table(&QrtKind::Clifford { n }).unwrap();
            let d = 1u128 << n;
            assert_eq!(checksum(&t), Some(d.pow(4)));
            let one = t.iter().find(|c| c.label == IrrepLabel::Clifford { irrep: CliffordIrrep::One }).unwrap();
            assert_eq!(one.dimension, d * (d + 1) / 2 - 1);
        }
    }

    #[test]
    fn label_display_and_parse() {
        let q = QrtKind::Multipartite { n: 3 };
        let l = IrrepLabel::support(&[1, 0, 1]);
        assert_eq!(l.to_string(), "(1,0,1)");
        assert_eq!(IrrepLabel::parse(&q, "(1,0,1)").unwrap(), l);
        let f = QrtKind::Fermionic { n: 4 };
        for lab in [IrrepLabel::Mirror { alpha: 2, n: 4 }, IrrepLabel::Mirror { alpha: 4, n: 4 }, IrrepLabel::Majorana { alpha: 3 }] {
            let back = IrrepLabel::parse(&f, &lab.to_string()).unwrap();
            if let (IrrepLabel::Mirror { alpha: 4, .. }, IrrepLabel::Majorana { alpha: 4 }) = (lab, back) {
                continue;
            }
            assert_eq!(back, lab);
        }
        assert_eq!(IrrepLabel::parse(&QrtKind::Clifford { n: 1 }, "one").unwrap().to_string(), "one");
        assert!(IrrepLabel::parse(&q, "bogus").is_err());
    }

    #[test]
    fn qrt_json_shape() {
        let js = serde_json::to_string(&QrtKind::Spin { twice_s: 3 }).unwrap();
        assert_eq!(js, r#"{"kind":"spin","twice_s":3}"#);
        let back: QrtKind = serde_json::from_str(r#"{"kind":"bipartite2q"}"#).unwrap();
        assert_eq!(back, QrtKind::Bipartite2q);
    }

    #[test]
    fn pauli_bases_are_orthonormal() {
        let b = irrep_basis(&QrtKind::Fermionic { n: 2 }, &IrrepLabel::Majorana { alpha: 2 }).unwrap();
        assert_eq!(b.len(), 6);
        assert_orthonormal(&b);
        let b = irrep_basis(&QrtKind::Multipartite { n: 3 }, &IrrepLabel::Weight { k: 2 }).unwrap();
        assert_eq!(b.len(), 27);
        assert_orthonormal(&b);
        let b = irrep_basis(&QrtKind::Fermionic { n: 3 }, &IrrepLabel::Mirror { alpha: 1, n: 3 }).unwrap();
        assert_eq!(b.len(), 12);
    }

    #[test]
    fn spin_bases_are_orthonormal() {
        for ts in 0..=8 {
            for a in 0..=ts {
                let b = irrep_basis(&QrtKind::Spin { twice_s: ts }, &IrrepLabel::Spin { alpha: a }).unwrap();
                assert_eq!(b.len(), 2 * a as usize + 1);
                assert_orthonormal(&b);
                for e in &b.elements {
                    let m = e.to_dense();
                    assert!((&m - m.adjoint()).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn clifford_bases() {
        for n in 1..=2 {
            let q = QrtKind::Clifford { n };
            let dims = clifford_dimensions(n).unwrap();
            for (irrep, dim) in CliffordIrrep::ALL.iter().zip(dims) {
                if *irrep == CliffordIrrep::Residual {
                    assert!(irrep_basis(&q, &IrrepLabel::Clifford { irrep: *irrep }).is_err());
                    continue;
                }
                let b = irrep_basis(&q, &IrrepLabel::Clifford { irrep: *irrep }).unwrap();
                assert_eq!(b.len() as u128, dim, "{}", irrep.name());
                assert_orthonormal(&b);
            }
        }
        let b = irrep_basis(&QrtKind::Clifford { n: 1 }, &IrrepLabel::Clifford { irrep: CliffordIrrep::One }).unwrap();
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn mismatched_labels_are_rejected() {
        assert!(irrep_basis(&QrtKind::Spin { twice_s: 2 }, &IrrepLabel::Majorana { alpha: 1 }).is_err());
        assert!(irrep_basis(&QrtKind::Multipartite { n: 3 }, &IrrepLabel::support(&[1, 0])).is_err());
        assert!(matches!(
            irrep_basis(&QrtKind::Clifford { n: 4 }, &IrrepLabel::Clifford { irrep: CliffordIrrep::One }),
            Err(GfdError::Capacity { .. })
        ));
        assert!(matches!(
            irrep_basis(&QrtKind::Spin { twice_s: 30 }, &IrrepLabel::Spin { alpha: 1 }),
            Err(GfdError::Capacity { .. })
        ));
    }
}
