use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{BasisOperator, IrrepLabel, OperatorBasis, QrtKind, SPIN_BASIS_TWICE_CAP};
use crate::cg::{cg, SpinLabel};
use crate::error::{GfdError, Result};

/// Spherical tensor operator `L_{α,m'} = Σ_m (-1)^{s-μ} c^{s,s,α}_{m,-μ,m'} |m><μ|`
/// with `μ = m - m'`, on the `2s+1` dimensional space (row `i` is `m = s - i`).
pub fn spin_tensor_operator(twice_s: u32, alpha: u32, twice_mp: i32) -> Result<DMatrix<Complex64>> {
    if alpha > twice_s {
        return Err(GfdError::Range(format!("spin irrep {alpha} > 2s = {twice_s}")));
    }
    SpinLabel::new(2 * alpha, twice_mp)?;
    let ts = twice_s as i32;
    let d = twice_s as usize + 1;
    let mut m = DMatrix::zeros(d, d);
    for row in 0..d {
        let tm = ts - 2 * row as i32;
        let tmu = tm - twice_mp;
        if tmu.abs() > ts {
            continue;
        }
        let col = ((ts - tmu) / 2) as usize;
        let c = cg(
            SpinLabel::new(twice_s, tm)?,
            SpinLabel::new(twice_s, -tmu)?,
            SpinLabel::new(2 * alpha, twice_mp)?,
        );
        let sign = if ((ts - tmu) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        m[(row, col)] = Complex64::new(sign * c, 0.0);
    }
    Ok(m)
}

pub(super) fn spin_basis(qrt: QrtKind, twice_s: u32, alpha: u32) -> Result<OperatorBasis> {
    if twice_s > SPIN_BASIS_TWICE_CAP {
        return Err(GfdError::capacity("spin basis 2s", SPIN_BASIS_TWICE_CAP as u64, twice_s as u64));
    }
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut elements = vec![BasisOperator::Dense(spin_tensor_operator(twice_s, alpha, 0)?)];
    for mp in 1..=alpha as i32 {
        let l = spin_tensor_operator(twice_s, alpha, 2 * mp)?;
        let ld = l.adjoint();
        elements.push(BasisOperator::Dense((&l + &ld) * Complex64::new(r2, 0.0)));
        elements.push(BasisOperator::Dense((&l - &ld) * Complex64::new(0.0, r2)));
    }
    Ok(OperatorBasis { qrt, label: IrrepLabel::Spin { alpha }, elements })
}
