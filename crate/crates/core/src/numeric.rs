//! Small numeric helpers shared by the engine and the closed forms.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Compensated sum in iteration order.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Exact binomial when it fits in 128 bits.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) / (i + 1) stays integral; split by gcd to delay overflow.
        let num = n as u128 - i;
        let den = i + 1;
        let g = gcd(acc, den);
        let (a, d) = (acc / g, den / g);
        let num = num / d;
        acc = a.checked_mul(num)?;
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Binomial coefficient as f64: exact integer path when it fits, log-space otherwise.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    match binomial_u128(n, k) {
        Some(v) => v as f64,
        None => ln_binomial(n, k).exp(),
    }
}

const LN_FACT_TABLE: usize = 4096;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACT_TABLE);
        let mut acc = KahanSum::new();
        t.push(0.0);
        for k in 1..LN_FACT_TABLE {
            acc.add((k as f64).ln());
            t.push(acc.value());
        }
        t
    })
}

pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < LN_FACT_TABLE {
        return ln_fact_table()[n as usize];
    }
    // Stirling series; error far below f64 resolution at this size.
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + inv / 12.0
        - inv * inv2 / 360.0
        + inv * inv2 * inv2 / 1260.0
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub fn factorial_big(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn big_ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Scale by bit lengths when the direct conversion overflows.
    let num = r.numer();
    let den = r.denom();
    let shift_n = num.bits().saturating_sub(1000) as i64;
    let shift_d = den.bits().saturating_sub(1000) as i64;
    let n = (num.abs() >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
    let sign = if num.is_negative() { -1.0 } else { 1.0 };
    sign * (n / d) * 2f64.powi((shift_n - shift_d) as i32)
}

/// Rational nullspace basis by reduced row echelon form. Each returned vector
/// has a unit entry at its free column.
pub fn rational_nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    if !m[r][j].is_zero() {
                        let delta = &f * &m[r][j];
                        m[i][j] -= delta;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    kahan_sum(a.iter().zip(b).map(|(x, y)| x * y))
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors whose
/// residual norm falls below `tol` are dropped as dependent.
pub fn gram_schmidt(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        let orig = dot(&w, &w).sqrt();
        if orig == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &out {
                let c = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let norm = dot(&w, &w).sqrt();
        if norm <= tol * orig.max(1.0) {
            continue;
        }
        for wi in w.iter_mut() {
            *wi /= norm;
        }
        out.push(w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_agree_across_paths() {
        assert_eq!(binomial_u128(128, 64), Some(23_951_146_041_928_082_866_135_587_776_380_551_750));
        for n in 0..70u64 {
            for k in 0..=n {
                let exact = binomial_big(n, k).to_f64().unwrap();
                assert_eq!(binomial(n, k), exact);
                let rel = (ln_binomial(n, k).exp() - exact).abs() / exact;
                assert!(rel < 1e-11, "n={n} k={k} rel={rel}");
            }
        }
    }

    #[test]
    fn ln_factorial_continues_past_table() {
        let a = ln_factorial(LN_FACT_TABLE as u64 - 1) + (LN_FACT_TABLE as f64).ln();
        let b = ln_factorial(LN_FACT_TABLE as u64);
        assert!((a - b).abs() < 1e-9 * b);
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut v = vec![1.0];
        v.extend(std::iter::repeat_n(1e-16, 10_000));
        let s = kahan_sum(v);
        assert!((s - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn nullspace_of_simple_system() {
        // x + y + z = 0
        let rows = vec![vec![rational(1), rational(1), rational(1)]];
        let ns = rational_nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s: BigRational = v.iter().cloned().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn gram_schmidt_drops_dependent() {
        let vs = vec![vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0], vec![0.0, 1.0, 1.0]];
        let q = gram_schmidt(&vs, 1e-12);
        assert_eq!(q.len(), 2);
        assert!(dot(&q[0], &q[1]).abs() < 1e-15);
    }

    #[test]
    fn huge_ratio_converts() {
        let r = BigRational::new(factorial_big(400).into(), factorial_big(399).into());
        assert!((big_ratio_to_f64(&r) - 400.0).abs() < 1e-9);
    }
}
