use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{BasisOperator, CliffordIrrep, IrrepLabel, OperatorBasis, QrtKind, CLIFFORD_BASIS_CAP};
use crate::error::{GfdError, Result};
use crate::numeric::{gram_schmidt, rational, rational_nullspace};
use crate::pauli::PauliString;

/// Dimensions of the named two-copy irreps in `CliffordIrrep::ALL` order;
/// the residual is `d^4` minus the others.
pub fn clifford_dimensions(n: u32) -> Result<[u128; 7]> {
    if n == 0 || n > 31 {
        return Err(GfdError::Range(format!("Clifford dimensions need 1 <= n <= 31, got {n}")));
    }
    let d = 1u128 << n;
    let d2 = d * d;
    let id = 1;
    let r = d2 - 1;
    let zero = 1;
    let one = d * (d + 1) / 2 - 1;
    let two = d * (d - 1) / 2 - 1;
    let named = id + 2 * r + zero + one + two;
    Ok([id, r, r, zero, one, two, d2 * d2 - named])
}

fn non_identity_paulis(n: u32) -> Vec<PauliString> {
    let d = 1u64 << n;
    (0..d * d)
        .skip(1)
        .map(|code| PauliString::new(n, code / d, code % d, 0).expect("masks within n"))
        .collect()
}

/// Constraint rows over λ_σ: Σ λ = 0 and, for every τ,
/// Σ_{σ anticommuting with τ} λ_σ + sign·(d/2) λ_τ = 0.
fn constraint_rows(paulis: &[PauliString], sign: i64) -> Vec<Vec<BigRational>> {
    let d = 1i64 << paulis[0].num_qubits();
    let mut rows = vec![vec![rational(1); paulis.len()]];
    for (t, tau) in paulis.iter().enumerate() {
        let mut row: Vec<BigRational> = paulis
            .iter()
            .map(|s| if s.commutes_with(tau) { BigRational::zero() } else { rational(1) })
            .collect();
        row[t] += rational(sign * d / 2);
        rows.push(row);
    }
    rows
}

fn lambda_nullspace(n: u32, irrep: CliffordIrrep) -> Result<(Vec<PauliString>, Vec<Vec<BigRational>>)> {
    let sign = match irrep {
        CliffordIrrep::One => 1,
        CliffordIrrep::Two => -1,
        other => return Err(GfdError::Parameter(format!("class {} has no constraint system", other.name()))),
    };
    let paulis = non_identity_paulis(n);
    let rows = constraint_rows(&paulis, sign);
    let ns = rational_nullspace(&rows, paulis.len());
    Ok((paulis, ns))
}

/// Exact nullspace dimension of the λ constraint system for `one`/`two`.
pub fn clifford_nullspace_dimension(n: u32, irrep: CliffordIrrep) -> Result<usize> {
    if n == 0 || n > CLIFFORD_BASIS_CAP {
        return Err(GfdError::capacity("Clifford basis qubit count", CLIFFORD_BASIS_CAP as u64, n as u64));
    }
    Ok(lambda_nullspace(n, irrep)?.1.len())
}

pub(super) fn clifford_basis(qrt: QrtKind, n: u32, irrep: CliffordIrrep) -> Result<OperatorBasis> {
    if n == 0 || n > CLIFFORD_BASIS_CAP {
        return Err(GfdError::capacity("Clifford basis qubit count", CLIFFORD_BASIS_CAP as u64, n as u64));
    }
    let d = (1u64 << n) as f64;
    let id = PauliString::identity(n)?;
    let label = IrrepLabel::Clifford { irrep };
    let pair = |c: f64, p: PauliString, q: PauliString| BasisOperator::PauliPairs { terms: vec![(c, p, q)] };
    let elements = match irrep {
        CliffordIrrep::Id => vec![pair(1.0 / d, id, id)],
        CliffordIrrep::R => non_identity_paulis(n).into_iter().map(|s| pair(1.0 / d, id, s)).collect(),
        CliffordIrrep::L => non_identity_paulis(n).into_iter().map(|s| pair(1.0 / d, s, id)).collect(),
        CliffordIrrep::Zero => {
            let paulis = non_identity_paulis(n);
            let c = 1.0 / (d * ((paulis.len()) as f64).sqrt());
            vec![BasisOperator::PauliPairs { terms: paulis.into_iter().map(|s| (c, s, s)).collect() }]
        }
        CliffordIrrep::One | CliffordIrrep::Two => {
            let (paulis, ns) = lambda_nullspace(n, irrep)?;
            let dims = clifford_dimensions(n)?;
            let want = if irrep == CliffordIrrep::One { dims[4] } else { dims[5] };
            if ns.len() as u128 != want {
                return Err(GfdError::Internal(format!(
                    "class {} nullspace has dimension {}, expected {want}",
                    irrep.name(),
                    ns.len()
                )));
            }
            let float: Vec<Vec<f64>> = ns
                .iter()
                .map(|v| v.iter().map(|r| r.to_f64().expect("small rationals")).collect())
                .collect();
            let ortho = gram_schmidt(&float, 1e-12);
            if ortho.len() != ns.len() {
                return Err(GfdError::Internal(format!(
                    "class {} lost rank during orthonormalization",
                    irrep.name()
                )));
            }
            // σ⊗σ/d is HS-normalized on two copies, so λ keeps its norm.
            ortho
                .into_iter()
                .map(|lambda| BasisOperator::PauliPairs {
                    terms: lambda
                        .iter()
                        .zip(&paulis)
                        .filter(|(l, _)| **l != 0.0)
                        .map(|(l, s)| (l / d, *s, *s))
                        .collect(),
                })
                .collect()
        }
        CliffordIrrep::Residual => {
            return Err(GfdError::Parameter(
                "the residual class has no explicit basis; its purity is 1 minus the named classes".into(),
            ))
        }
    };
    Ok(OperatorBasis { qrt, label, elements })
}
