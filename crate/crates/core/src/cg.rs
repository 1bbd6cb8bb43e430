//! SU(2) Clebsch-Gordan coefficients in the Condon-Shortley convention.
//!
//! All angular momenta are carried doubled (`twice_j`, `twice_m`) so that
//! half-integer spins stay in integer arithmetic.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GfdError, Result};
use crate::numeric::{big_ratio_to_f64, factorial_big, ln_factorial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinLabel {
    twice_j: u32,
    twice_m: i32,
}

impl SpinLabel {
    pub fn new(twice_j: u32, twice_m: i32) -> Result<Self> {
        if twice_m.unsigned_abs() > twice_j || (twice_j as i64 - twice_m as i64) % 2 != 0 {
            return Err(GfdError::Parameter(format!(
                "invalid spin label j={}/2, m={}/2",
                twice_j, twice_m
            )));
        }
        Ok(Self { twice_j, twice_m })
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    pub fn twice_m(&self) -> i32 {
        self.twice_m
    }
}

const FACT_CACHE: usize = 512;

fn fact(n: i64) -> BigInt {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(FACT_CACHE);
        let mut acc = BigInt::from(1);
        t.push(acc.clone());
        for k in 1..FACT_CACHE {
            acc *= k;
            t.push(acc.clone());
        }
        t
    });
    match table.get(n as usize) {
        Some(v) => v.clone(),
        None => factorial_big(n as u64).into(),
    }
}

/// Exact square of the coefficient together with its sign.
pub fn cg_squared_signed(j1: SpinLabel, j2: SpinLabel, jm: SpinLabel) -> (BigRational, i8) {
    let (tj1, tm1) = (j1.twice_j as i64, j1.twice_m as i64);
    let (tj2, tm2) = (j2.twice_j as i64, j2.twice_m as i64);
    let (tj, tm) = (jm.twice_j as i64, jm.twice_m as i64);
    if tm != tm1 + tm2 || tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return (BigRational::zero(), 0);
    }
    // Every combination below is an integer once the parity check above passes.
    let h = |v: i64| v / 2;
    let a = h(tj + tj1 - tj2);
    let b = h(tj - tj1 + tj2);
    let c = h(tj1 + tj2 - tj);
    let top = h(tj1 + tj2 + tj) + 1;
    let jp = h(tj + tm);
    let jmn = h(tj - tm);
    let (j1m, j1p) = (h(tj1 - tm1), h(tj1 + tm1));
    let (j2m, j2p) = (h(tj2 - tm2), h(tj2 + tm2));
    let e1 = h(tj - tj2 + tm1);
    let e2 = h(tj - tj1 - tm2);

    let kmin = 0.max(-e1).max(-e2);
    let kmax = c.min(j1m).min(j2p);
    // Common denominator divisible by every term's factorial product.
    let lcm = fact(kmax) * fact(c) * fact(j1m) * fact(j2p) * fact(e1 + kmax) * fact(e2 + kmax);
    let mut numer = BigInt::zero();
    for k in kmin..=kmax {
        let den = fact(k) * fact(c - k) * fact(j1m - k) * fact(j2p - k) * fact(e1 + k) * fact(e2 + k);
        let term = &lcm / den;
        if k % 2 == 0 {
            numer += term;
        } else {
            numer -= term;
        }
    }
    if numer.is_zero() {
        return (BigRational::zero(), 0);
    }
    let sum = BigRational::new(numer, lcm);
    let sign = if sum.is_negative() { -1 } else { 1 };
    let pre = BigRational::new(
        BigInt::from(tj + 1) * fact(a) * fact(b) * fact(c) * fact(jp) * fact(jmn) * fact(j1m) * fact(j1p) * fact(j2m) * fact(j2p),
        fact(top),
    );
    (pre * &sum * &sum, sign)
}

/// `<j1 m1; j2 m2 | J M>` via the Racah formula: exact rational arithmetic and
/// a single final square root. Selection-rule violations give exactly 0.
pub fn cg(j1: SpinLabel, j2: SpinLabel, jm: SpinLabel) -> f64 {
    let (sq, sign) = cg_squared_signed(j1, j2, jm);
    if sign == 0 {
        return 0.0;
    }
    sign as f64 * big_ratio_to_f64(&sq).sqrt()
}

/// Convenience form on doubled quantum numbers.
pub fn cg_twice(tj1: u32, tm1: i32, tj2: u32, tm2: i32, tj: u32, tm: i32) -> Result<f64> {
    Ok(cg(
        SpinLabel::new(tj1, tm1)?,
        SpinLabel::new(tj2, tm2)?,
        SpinLabel::new(tj, tm)?,
    ))
}

/// Closed form for `c^{s,s,α}_{s,-s,0}`:
/// `(2s)! sqrt((2α+1) / ((2s-α)! (2s+α+1)!))`, evaluated in log space.
pub fn cg_highest_weight_identity(twice_s: u32, alpha: u32) -> Result<f64> {
    if alpha > twice_s {
        return Err(GfdError::Range(format!("alpha {alpha} > 2s = {twice_s}")));
    }
    let ts = twice_s as u64;
    let a = alpha as u64;
    let ln = ln_factorial(ts) + 0.5 * ((2 * a + 1) as f64).ln()
        - 0.5 * (ln_factorial(ts - a) + ln_factorial(ts + a + 1));
    Ok(ln.exp())
}
