//! Analytic purity formulas, usable far beyond the brute-force caps.
//!
//! | QRT           | families                                        | classes            |
//! |---------------|-------------------------------------------------|--------------------|
//! | bipartite2q   | product, bell, theta(θ), haar mean              | support patterns   |
//! | multipartite  | product, ghz, w, haar mean, ame                 | Hamming weight k   |
//! | fermionic     | gaussian, ghz (even n), extent(γ), haar even mean (approximate and exact) | Majorana weight α |
//! | spin          | basis m, ghz, haar mean                         | spin s' = α        |
//! | clifford      | stabilizer, magic, haar mean                    | id, r, l, zero, one, two, residual |
//!
//! Multipartite values are the weight-k aggregates `P_k`; GHZ, W and product
//! states are permutation symmetric (product states in the sense that every
//! support pattern carries `1/2^n`), so the per-irrep value is `P_k / C(n,k)`.
//!
//! The AME formula presumes an absolutely maximally entangled state exists at
//! the requested size; it is only anchored at n = 2.
//!
//! Clifford `one` is the literal purity of the `L_1` block,
//! `W - 2/(d(d+1))`, where `W = d^-2 Σ_P Tr[ρP]^4` is the stabilizer purity
//! returned by [`cf_clifford_witness`].

use serde::{Deserialize, Serialize};

use crate::cg::{cg_highest_weight_identity, cg_twice};
use crate::error::{GfdError, Result};
use crate::factory::{twice_from_half_integer, Family, StateSpec};
use crate::irrep::{
    irrep_table, mirror_classes, weight_classes, CliffordIrrep, IrrepLabel, QrtKind, SUPPORT_LISTING_CAP,
};
use crate::numeric::{binomial, KahanSum};
use crate::purity::{Aggregation, ProfileEntry, PurityProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BipartiteFamily {
    Product,
    Bell,
    Theta { theta: f64 },
    HaarMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MultipartiteFamily {
    Product,
    Ghz,
    W,
    HaarMean,
    Ame,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FermionicFamily {
    Gaussian,
    Ghz,
    Extent { gamma: f64 },
    /// Even-sector Haar mean with the small corrections dropped.
    HaarEvenMean,
    /// Exact even-sector Haar mean.
    HaarEvenExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpinFamily {
    BasisM { twice_m: i32 },
    Ghz,
    HaarMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CliffordFamily {
    Stabilizer,
    Magic,
    HaarMean,
}

/// A closed-form family tied to its resource theory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "qrt", rename_all = "snake_case")]
pub enum ClosedFamily {
    Bipartite(BipartiteFamily),
    Multipartite(MultipartiteFamily),
    Fermionic(FermionicFamily),
    Spin(SpinFamily),
    Clifford(CliffordFamily),
}

impl ClosedFamily {
    /// True for Haar means whose formula drops small corrections.
    pub fn is_approximate(&self) -> bool {
        matches!(self, ClosedFamily::Fermionic(FermionicFamily::HaarEvenMean))
    }

    pub fn is_haar_mean(&self) -> bool {
        matches!(
            self,
            ClosedFamily::Bipartite(BipartiteFamily::HaarMean)
                | ClosedFamily::Multipartite(MultipartiteFamily::HaarMean)
                | ClosedFamily::Fermionic(FermionicFamily::HaarEvenMean | FermionicFamily::HaarEvenExact)
                | ClosedFamily::Spin(SpinFamily::HaarMean)
                | ClosedFamily::Clifford(CliffordFamily::HaarMean)
        )
    }

    fn qrt_name(&self) -> &'static str {
        match self {
            ClosedFamily::Bipartite(_) => "bipartite2q",
            ClosedFamily::Multipartite(_) => "multipartite",
            ClosedFamily::Fermionic(_) => "fermionic",
            ClosedFamily::Spin(_) => "spin",
            ClosedFamily::Clifford(_) => "clifford",
        }
    }
}

/// One closed-form evaluation request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormQuery {
    pub qrt: QrtKind,
    pub family: ClosedFamily,
    pub class: IrrepLabel,
}

impl ClosedFormQuery {
    pub fn evaluate(&self) -> Result<f64> {
        closed_form_value(&self.qrt, &self.family, &self.class)
    }
}

fn pow2(n: u32) -> f64 {
    (n as f64).exp2()
}

pub fn cf_bipartite(family: BipartiteFamily, pattern: u64) -> Result<f64> {
    if pattern > 3 {
        return Err(GfdError::Range(format!("two-qubit support pattern {pattern} > 3")));
    }
    let weight = pattern.count_ones();
    Ok(match family {
        BipartiteFamily::Product => 0.25,
        BipartiteFamily::Bell => [0.25, 0.0, 0.75][weight as usize],
        BipartiteFamily::Theta { theta } => {
            if !theta.is_finite() {
                return Err(GfdError::Parameter(format!("theta={theta}")));
            }
            let c = theta.cos();
            [0.25, c * c / 4.0, (2.0 - (2.0 * theta).cos()) / 4.0][weight as usize]
        }
        BipartiteFamily::HaarMean => [0.25, 0.15, 0.45][weight as usize],
    })
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 || n > 64 {
        return Err(GfdError::Range(format!("qubit count {n} outside 1..=64")));
    }
    Ok(())
}

/// Weight-k aggregate `P_k`.
pub fn cf_multipartite(family: MultipartiteFamily, n: u32, k: u32) -> Result<f64> {
    check_n(n)?;
    if k > n {
        return Err(GfdError::Range(format!("weight {k} > n = {n}")));
    }
    let d = pow2(n);
    let nb = binomial(n as u64, k as u64);
    Ok(match family {
        MultipartiteFamily::Product => nb / d,
        MultipartiteFamily::Ghz => {
            let even = if k.is_multiple_of(2) { nb / d } else { 0.0 };
            if k == n {
                even + 0.5
            } else {
                even
            }
        }
        MultipartiteFamily::W => {
            let (nf, kf) = (n as f64, k as f64);
            let lead = (nf - 2.0 * kf).powi(2) + 8.0 * binomial(k as u64, 2);
            lead * nb / (nf * nf * d)
        }
        MultipartiteFamily::HaarMean => {
            if k == 0 {
                1.0 / d
            } else {
                3f64.powi(k as i32) * nb / (d * (d + 1.0))
            }
        }
        MultipartiteFamily::Ame => match k {
            0 => 1.0 / d,
            _ if k == n => (d - 1.0) / d,
            _ => 0.0,
        },
    })
}

/// Block purity coefficients of the extent family.
pub fn extent_coefficients(gamma: f64) -> [f64; 4] {
    let c2 = (gamma / 2.0).cos().powi(2);
    let s2 = (gamma / 2.0).sin().powi(2);
    [4.0 * c2, 6.0 + 8.0 * s2, 4.0 * c2, 1.0]
}

/// Majorana-weight purity `P_α`.
pub fn cf_fermionic(family: FermionicFamily, n: u32, alpha: u32) -> Result<f64> {
    check_n(n)?;
    if alpha > 2 * n {
        return Err(GfdError::Range(format!("Majorana weight {alpha} > 2n = {}", 2 * n)));
    }
    if let FermionicFamily::Extent { gamma } = family {
        if !n.is_multiple_of(4) {
            return Err(GfdError::Parameter(format!("extent family needs n divisible by 4, got {n}")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&gamma) {
            return Err(GfdError::Parameter(format!("gamma={gamma} outside [0, pi]")));
        }
    }
    if let FermionicFamily::Ghz = family {
        if !n.is_multiple_of(2) {
            return Err(GfdError::Parameter(format!("fermionic GHZ formula needs even n, got {n}")));
        }
    }
    if alpha % 2 == 1 {
        return Ok(0.0);
    }
    let d = pow2(n);
    let half = (alpha / 2) as u64;
    Ok(match family {
        FermionicFamily::Gaussian => binomial(n as u64, half) / d,
        FermionicFamily::Ghz => {
            if alpha == n {
                let extra = if n.is_multiple_of(4) { binomial(n as u64, half) } else { 0.0 };
                (pow2(n - 1) + extra) / d
            } else if alpha.is_multiple_of(4) {
                binomial(n as u64, half) / d
            } else {
                0.0
            }
        }
        FermionicFamily::Extent { gamma } => extent_sum(n / 4, alpha, gamma) / d,
        FermionicFamily::HaarEvenMean => {
            if alpha == 0 {
                1.0 / d
            } else if alpha == 2 * n {
                3.0 / (d * (d + 1.0))
            } else {
                2.0 * binomial(2 * n as u64, alpha as u64) / (d * (d + 1.0))
            }
        }
        // Within the sector of dimension d/2 every even monomial restricts to a
        // Hermitian unitary, traceless unless it is the identity or the parity.
        FermionicFamily::HaarEvenExact => {
            if alpha == 0 || alpha == 2 * n {
                1.0 / d
            } else {
                2.0 * binomial(2 * n as u64, alpha as u64) / (d * (d + 2.0))
            }
        }
    })
}

/// Σ over (i2, i4, i6, i8) with 2 i2 + 4 i4 + 6 i6 + 8 i8 = α of the
/// multinomial count of block assignments times the block weights.
fn extent_sum(blocks: u32, alpha: u32, gamma: f64) -> f64 {
    let [n2, n4, n6, n8] = extent_coefficients(gamma);
    let b = blocks as u64;
    let a = alpha as u64;
    let mut acc = KahanSum::new();
    for i8 in 0..=b.min(a / 8) {
        for i6 in 0..=(b - i8).min((a - 8 * i8) / 6) {
            for i4 in 0..=(b - i8 - i6).min((a - 8 * i8 - 6 * i6) / 4) {
                let rest = a - 8 * i8 - 6 * i6 - 4 * i4;
                let i2 = rest / 2;
                if i2 > b - i8 - i6 - i4 {
                    continue;
                }
                let count = binomial(b, i8)
                    * binomial(b - i8, i6)
                    * binomial(b - i8 - i6, i4)
                    * binomial(b - i8 - i6 - i4, i2);
                acc.add(
                    count
                        * n2.powi(i2 as i32)
                        * n4.powi(i4 as i32)
                        * n6.powi(i6 as i32)
                        * n8.powi(i8 as i32),
                );
            }
        }
    }
    acc.value()
}

/// Spin-`s` purity of the class `s' = α` (s given as 2s).
pub fn cf_spin(family: SpinFamily, twice_s: u32, alpha: u32) -> Result<f64> {
    if alpha > twice_s {
        return Err(GfdError::Range(format!("alpha {alpha} > 2s = {twice_s}")));
    }
    let ts = twice_s as i32;
    let ta = 2 * alpha;
    Ok(match family {
        SpinFamily::BasisM { twice_m } => {
            if twice_m.abs() > ts || (ts - twice_m) % 2 != 0 {
                return Err(GfdError::Parameter(format!("2m = {twice_m} invalid for 2s = {twice_s}")));
            }
            if twice_m.abs() == ts {
                cg_highest_weight_identity(twice_s, alpha)?.powi(2)
            } else {
                cg_twice(twice_s, twice_m, twice_s, -twice_m, ta, 0)?.powi(2)
            }
        }
        SpinFamily::Ghz => {
            if twice_s == 0 {
                return Err(GfdError::Parameter("spin GHZ needs s > 0".into()));
            }
            if alpha != twice_s {
                if alpha.is_multiple_of(2) {
                    cg_highest_weight_identity(twice_s, alpha)?.powi(2)
                } else {
                    0.0
                }
            } else {
                let c_top = cg_twice(twice_s, ts, twice_s, -ts, ta, 0)?;
                let c_bot = cg_twice(twice_s, -ts, twice_s, ts, ta, 0)?;
                let sign = if twice_s.is_multiple_of(2) { 1.0 } else { -1.0 };
                let low = cg_twice(twice_s, -ts, twice_s, -ts, ta, -(ta as i32))?;
                let high = cg_twice(twice_s, ts, twice_s, ts, ta, ta as i32)?;
                0.25 * (c_top + sign * c_bot).powi(2) + 0.25 * low * low + 0.25 * high * high
            }
        }
        SpinFamily::HaarMean => {
            let d = twice_s as f64 + 1.0;
            if alpha == 0 {
                1.0 / d
            } else {
                (2.0 * alpha as f64 + 1.0) / (d * (d + 1.0))
            }
        }
    })
}

/// Stabilizer purity `W` of the family.
pub fn cf_clifford_witness(family: CliffordFamily, n: u32) -> Result<f64> {
    check_n(n)?;
    let d = pow2(n);
    Ok(match family {
        CliffordFamily::Stabilizer => 1.0 / d,
        CliffordFamily::Magic => 0.375f64.powi(n as i32),
        CliffordFamily::HaarMean => 4.0 / (d * (d + 3.0)),
    })
}

/// Literal two-copy purity of a Clifford class.
pub fn cf_clifford(family: CliffordFamily, n: u32, irrep: CliffordIrrep) -> Result<f64> {
    check_n(n)?;
    let d = pow2(n);
    let w = cf_clifford_witness(family, n)?;
    Ok(match irrep {
        CliffordIrrep::Id => 1.0 / (d * d),
        CliffordIrrep::R | CliffordIrrep::L => (d - 1.0) / (d * d),
        CliffordIrrep::Zero => (d - 1.0) / (d * d * (d + 1.0)),
        CliffordIrrep::One => w - 2.0 / (d * (d + 1.0)),
        CliffordIrrep::Two => 0.0,
        CliffordIrrep::Residual => 1.0 - w - 2.0 * (d - 1.0) / (d * d),
    })
}

fn mismatch(family: &ClosedFamily, qrt: &QrtKind) -> GfdError {
    GfdError::SystemType(format!("{} closed form used with a {} QRT", family.qrt_name(), qrt.name()))
}

/// Closed-form value for one class. Multipartite support labels get the
/// per-irrep share `P_k / C(n,k)`.
pub fn closed_form_value(qrt: &QrtKind, family: &ClosedFamily, label: &IrrepLabel) -> Result<f64> {
    qrt.validate()?;
    let bad_label = || GfdError::Parameter(format!("class {label} does not belong to a {} QRT", qrt.name()));
    match (*qrt, *family) {
        (QrtKind::Bipartite2q, ClosedFamily::Bipartite(f)) => match *label {
            IrrepLabel::Support { n: 2, pattern } => cf_bipartite(f, pattern),
            IrrepLabel::Weight { k } if k <= 2 => {
                let share = match k {
                    1 => 2.0,
                    _ => 1.0,
                };
                Ok(share * cf_bipartite(f, (1u64 << k) - 1)?)
            }
            _ => Err(bad_label()),
        },
        (QrtKind::Multipartite { n }, ClosedFamily::Multipartite(f)) => match *label {
            IrrepLabel::Weight { k } => cf_multipartite(f, n, k),
            IrrepLabel::Support { n: ln, pattern } if ln == n => {
                let k = pattern.count_ones();
                Ok(cf_multipartite(f, n, k)? / binomial(n as u64, k as u64))
            }
            _ => Err(bad_label()),
        },
        (QrtKind::Fermionic { n }, ClosedFamily::Fermionic(f)) => match *label {
            IrrepLabel::Majorana { alpha } => cf_fermionic(f, n, alpha),
            IrrepLabel::Mirror { alpha, n: ln } if ln == n && alpha <= n => {
                let lo = cf_fermionic(f, n, alpha)?;
                if alpha == n {
                    Ok(lo)
                } else {
                    Ok(lo + cf_fermionic(f, n, 2 * n - alpha)?)
                }
            }
            _ => Err(bad_label()),
        },
        (QrtKind::Spin { twice_s }, ClosedFamily::Spin(f)) => match *label {
            IrrepLabel::Spin { alpha } => cf_spin(f, twice_s, alpha),
            _ => Err(bad_label()),
        },
        (QrtKind::Clifford { n }, ClosedFamily::Clifford(f)) => match *label {
            IrrepLabel::Clifford { irrep } => cf_clifford(f, n, irrep),
            _ => Err(bad_label()),
        },
        _ => Err(mismatch(family, qrt)),
    }
}

/// Maps a state recipe to the closed-form family describing it, if any.
pub fn closed_family_for(qrt: &QrtKind, spec: &StateSpec) -> Result<ClosedFamily> {
    let none = || {
        GfdError::Parameter(format!(
            "no closed form for family {} in the {} QRT",
            spec.family.name(),
            qrt.name()
        ))
    };
    if spec.system()? != qrt.system() {
        return Err(GfdError::Size(format!(
            "state {} on {:?} does not match the {} Hilbert space",
            spec.family.name(),
            spec.system()?,
            qrt.name()
        )));
    }
    let plain_product = spec.family == Family::Product && spec.params.bloch.is_none() && spec.seed.is_none();
    let basis_state = spec.family == Family::StabilizerCanonical
        && spec.params.index.unwrap_or(0) < (1u64 << qrt.qubits().unwrap_or(0).min(63));
    Ok(match *qrt {
        QrtKind::Bipartite2q => ClosedFamily::Bipartite(match spec.family {
            Family::Product => BipartiteFamily::Product,
            Family::Bell | Family::Ghz => BipartiteFamily::Bell,
            Family::Theta => BipartiteFamily::Theta {
                theta: spec.params.theta.ok_or_else(|| GfdError::Parameter("theta family needs theta".into()))?,
            },
            _ if basis_state => BipartiteFamily::Product,
            _ => return Err(none()),
        }),
        QrtKind::Multipartite { .. } => ClosedFamily::Multipartite(match spec.family {
            Family::Product => MultipartiteFamily::Product,
            Family::Ghz | Family::Bell => MultipartiteFamily::Ghz,
            Family::W => MultipartiteFamily::W,
            _ if basis_state => MultipartiteFamily::Product,
            _ => return Err(none()),
        }),
        QrtKind::Fermionic { .. } => ClosedFamily::Fermionic(match spec.family {
            _ if plain_product || basis_state => FermionicFamily::Gaussian,
            Family::GaussianRandom => FermionicFamily::Gaussian,
            Family::Ghz | Family::Bell => FermionicFamily::Ghz,
            Family::Extent => FermionicFamily::Extent {
                gamma: spec.params.gamma.ok_or_else(|| GfdError::Parameter("extent family needs gamma".into()))?,
            },
            _ => return Err(none()),
        }),
        QrtKind::Spin { .. } => ClosedFamily::Spin(match spec.family {
            Family::SpinBasis => SpinFamily::BasisM {
                twice_m: twice_from_half_integer(
                    spec.params.m.ok_or_else(|| GfdError::Parameter("spin_basis family needs m".into()))?,
                    "m",
                )? as i32,
            },
            Family::SpinGhz => SpinFamily::Ghz,
            _ => return Err(none()),
        }),
        QrtKind::Clifford { .. } => ClosedFamily::Clifford(match spec.family {
            _ if plain_product => CliffordFamily::Stabilizer,
            Family::StabilizerCanonical | Family::Ghz | Family::Bell => CliffordFamily::Stabilizer,
            Family::Magic => CliffordFamily::Magic,
            _ => return Err(none()),
        }),
    })
}

/// Class list for a closed-form profile under the given aggregation.
fn classes_for(qrt: &QrtKind, aggregation: Aggregation) -> Result<(Vec<crate::irrep::IrrepClass>, Aggregation)> {
    Ok(match (*qrt, aggregation) {
        (QrtKind::Multipartite { n }, Aggregation::ByHammingWeight) => (weight_classes(n), aggregation),
        (QrtKind::Multipartite { n }, Aggregation::PerIrrep | Aggregation::None) => {
            if n > SUPPORT_LISTING_CAP {
                return Err(GfdError::capacity(
                    "per-pattern listing qubit count (aggregate by Hamming weight)",
                    SUPPORT_LISTING_CAP as u64,
                    n as u64,
                ));
            }
            (irrep_table(qrt)?, Aggregation::PerIrrep)
        }
        (QrtKind::Bipartite2q, Aggregation::ByHammingWeight) => (weight_classes(2), aggregation),
        (QrtKind::Fermionic { n }, Aggregation::FermionicMirror) => (mirror_classes(n), aggregation),
        (_, Aggregation::PerIrrep | Aggregation::None) => (irrep_table(qrt)?, Aggregation::PerIrrep),
        _ => {
            return Err(GfdError::Parameter(format!(
                "aggregation {} does not apply to the {} QRT",
                aggregation.name(),
                qrt.name()
            )))
        }
    })
}

/// Full profile of a closed-form family.
pub fn family_profile(qrt: &QrtKind, family: &ClosedFamily, aggregation: Aggregation) -> Result<PurityProfile> {
    qrt.validate()?;
    let (classes, aggregation) = classes_for(qrt, aggregation)?;
    let entries = classes
        .into_iter()
        .map(|class| Ok(ProfileEntry { purity: closed_form_value(qrt, family, &class.label)?, class }))
        .collect::<Result<Vec<_>>>()?;
    PurityProfile::from_entries(*qrt, aggregation, entries)
}

/// Closed-form profile of the state described by `spec`.
pub fn closed_form_profile(qrt: &QrtKind, spec: &StateSpec, aggregation: Aggregation) -> Result<PurityProfile> {
    let family = closed_family_for(qrt, spec)?;
    family_profile(qrt, &family, aggregation)
}

/// Haar-mean profile; the flag marks the approximate fermionic formula.
pub fn haar_mean_profile(qrt: &QrtKind, aggregation: Aggregation) -> Result<(PurityProfile, bool)> {
    let family = match qrt {
        QrtKind::Bipartite2q => ClosedFamily::Bipartite(BipartiteFamily::HaarMean),
        QrtKind::Multipartite { .. } => ClosedFamily::Multipartite(MultipartiteFamily::HaarMean),
        QrtKind::Fermionic { .. } => ClosedFamily::Fermionic(FermionicFamily::HaarEvenMean),
        QrtKind::Spin { .. } => ClosedFamily::Spin(SpinFamily::HaarMean),
        QrtKind::Clifford { .. } => ClosedFamily::Clifford(CliffordFamily::HaarMean),
    };
    Ok((family_profile(qrt, &family, aggregation)?, family.is_approximate()))
}
