//! Monte-Carlo estimates of Haar-averaged purities.
//!
//! Sample `i` is drawn from the stream `(seed, i)`, values are collected in
//! sample order and reduced sequentially, so results do not depend on the
//! thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{
    cf_clifford_witness, closed_form_value, BipartiteFamily, CliffordFamily, ClosedFamily, FermionicFamily,
    MultipartiteFamily, SpinFamily,
};
use crate::error::{GfdError, Result};
use crate::factory::{sample_haar_with, seeded_rng, Parity};
use crate::irrep::{irrep_basis, CliffordIrrep, IrrepClass, IrrepLabel, QrtKind};
use crate::numeric::kahan_sum;
use crate::purity::{aggregate_profile, irrep_purity, profile, stabilizer_purity, Aggregation};
use crate::state::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_values(values: &[f64], seed: u64) -> Result<Self> {
        let m = values.len();
        if m < 2 {
            return Err(GfdError::Parameter(format!("need at least 2 samples, got {m}")));
        }
        let mean = kahan_sum(values.iter().copied()) / m as f64;
        let var = kahan_sum(values.iter().map(|v| (v - mean).powi(2))) / (m - 1) as f64;
        Ok(Self { mean, std_error: (var / m as f64).sqrt(), samples: m as u64, seed })
    }
}

/// Estimate set against its analytic mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaarReport {
    pub label: String,
    #[serde(flatten)]
    pub estimate: McEstimate,
    pub analytic: f64,
    pub approximate: bool,
    pub sigma_distance: f64,
    /// Exact mean where `analytic` is approximate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<f64>,
}

impl HaarReport {
    pub fn new(label: String, estimate: McEstimate, analytic: f64, approximate: bool) -> Self {
        let sigma_distance = sigma_distance(estimate.mean, estimate.std_error, analytic);
        Self { label, estimate, analytic, approximate, sigma_distance, exact: None }
    }

    pub fn with_exact(mut self, exact: Option<f64>) -> Self {
        self.exact = exact;
        self
    }

    /// `|mean - analytic| <= k σ + budget`, up to round-off.
    pub fn within(&self, k_sigma: f64, budget: f64) -> bool {
        (self.estimate.mean - self.analytic).abs() <= k_sigma * self.estimate.std_error + budget + ROUND_OFF
    }
}

/// Absolute agreement below which a difference counts as round-off; constant
/// classes have zero variance up to this level.
pub const ROUND_OFF: f64 = 1e-12;

/// Distance in standard errors; differences at round-off level count as 0,
/// other differences against a zero standard error as infinity.
pub fn sigma_distance(mean: f64, std_error: f64, analytic: f64) -> f64 {
    let diff = (mean - analytic).abs();
    if diff <= ROUND_OFF {
        0.0
    } else if std_error > 0.0 {
        diff / std_error
    } else {
        f64::INFINITY
    }
}

/// Systematic allowance for the approximate fermionic even-sector means.
pub fn systematic_budget(qrt: &QrtKind) -> f64 {
    match qrt {
        QrtKind::Fermionic { n } => (2.0 - *n as f64).exp2(),
        _ => 0.0,
    }
}

fn haar_family(qrt: &QrtKind) -> ClosedFamily {
    match qrt {
        QrtKind::Bipartite2q => ClosedFamily::Bipartite(BipartiteFamily::HaarMean),
        QrtKind::Multipartite { .. } => ClosedFamily::Multipartite(MultipartiteFamily::HaarMean),
        QrtKind::Fermionic { .. } => ClosedFamily::Fermionic(FermionicFamily::HaarEvenMean),
        QrtKind::Spin { .. } => ClosedFamily::Spin(SpinFamily::HaarMean),
        QrtKind::Clifford { .. } => ClosedFamily::Clifford(CliffordFamily::HaarMean),
    }
}

/// Analytic Haar mean of a class and whether the formula is approximate.
pub fn analytic_haar_mean(qrt: &QrtKind, label: &IrrepLabel) -> Result<(f64, bool)> {
    let family = haar_family(qrt);
    Ok((closed_form_value(qrt, &family, label)?, family.is_approximate()))
}

/// Exact mean for QRTs whose `analytic_haar_mean` is approximate.
pub fn exact_haar_mean(qrt: &QrtKind, label: &IrrepLabel) -> Result<Option<f64>> {
    match qrt {
        QrtKind::Fermionic { .. } => Ok(Some(closed_form_value(
            qrt,
            &ClosedFamily::Fermionic(FermionicFamily::HaarEvenExact),
            label,
        )?)),
        _ => Ok(None),
    }
}

fn parity_for(qrt: &QrtKind) -> Option<Parity> {
    match qrt {
        QrtKind::Fermionic { .. } => Some(Parity::Even),
        _ => None,
    }
}

/// Haar sample `index` of the stream family `seed`.
pub fn haar_sample(qrt: &QrtKind, seed: u64, index: u64) -> Result<PureState> {
    let mut rng = seeded_rng(seed, index);
    sample_haar_with(qrt.system(), &mut rng, parity_for(qrt))
}

fn collect_samples<F>(qrt: &QrtKind, samples: u64, seed: u64, f: F) -> Result<Vec<f64>>
where
    F: Fn(&PureState) -> Result<f64> + Sync,
{
    if samples < 2 {
        return Err(GfdError::Parameter(format!("need at least 2 samples, got {samples}")));
    }
    (0..samples).into_par_iter().map(|i| f(&haar_sample(qrt, seed, i)?)).collect()
}

/// Mean of one class purity over `samples` Haar states.
pub fn estimate_haar_mean(qrt: &QrtKind, label: &IrrepLabel, samples: u64, seed: u64) -> Result<McEstimate> {
    qrt.validate()?;
    let residual = matches!(label, IrrepLabel::Clifford { irrep: CliffordIrrep::Residual });
    let values = if residual {
        collect_samples(qrt, samples, seed, |s| {
            profile(s, qrt)?.get(label).ok_or_else(|| GfdError::Internal("residual missing".into()))
        })?
    } else {
        let basis = irrep_basis(qrt, label)?;
        collect_samples(qrt, samples, seed, |s| irrep_purity(s, &basis))?
    };
    McEstimate::from_values(&values, seed)
}

/// Estimates every class of the (aggregated) profile from one sample set.
pub fn estimate_haar_profile(
    qrt: &QrtKind,
    aggregation: Aggregation,
    samples: u64,
    seed: u64,
) -> Result<Vec<(IrrepClass, HaarReport)>> {
    qrt.validate()?;
    if samples < 2 {
        return Err(GfdError::Parameter(format!("need at least 2 samples, got {samples}")));
    }
    let first = aggregate_profile(&profile(&haar_sample(qrt, seed, 0)?, qrt)?, aggregation)?;
    let rows: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| Ok(aggregate_profile(&profile(&haar_sample(qrt, seed, i)?, qrt)?, aggregation)?.purities()))
        .collect::<Result<_>>()?;
    first
        .entries
        .iter()
        .enumerate()
        .map(|(c, e)| {
            let column: Vec<f64> = rows.iter().map(|r| r[c]).collect();
            let est = McEstimate::from_values(&column, seed)?;
            let (analytic, approx) = analytic_haar_mean(qrt, &e.class.label)?;
            let exact = exact_haar_mean(qrt, &e.class.label)?;
            Ok((e.class, HaarReport::new(e.class.label.to_string(), est, analytic, approx).with_exact(exact)))
        })
        .collect()
}

/// Mean stabilizer purity `W` of Haar states, against `4/(d(d+3))`.
pub fn estimate_haar_witness(n: u32, samples: u64, seed: u64) -> Result<HaarReport> {
    let qrt = QrtKind::Clifford { n };
    qrt.validate()?;
    let values = collect_samples(&qrt, samples, seed, stabilizer_purity)?;
    let est = McEstimate::from_values(&values, seed)?;
    Ok(HaarReport::new("W".into(), est, cf_clifford_witness(CliffordFamily::HaarMean, n)?, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_examples() {
        let (v, approx) = analytic_haar_mean(&QrtKind::Spin { twice_s: 1 }, &IrrepLabel::Spin { alpha: 1 }).unwrap();
        assert!((v - 0.5).abs() < 1e-15 && !approx);
        let (v, approx) = analytic_haar_mean(&QrtKind::Fermionic { n: 4 }, &IrrepLabel::Majorana { alpha: 8 }).unwrap();
        assert!((v - 3.0 / (16.0 * 17.0)).abs() < 1e-15 && approx);
        let (v, _) = analytic_haar_mean(&QrtKind::Multipartite { n: 5 }, &IrrepLabel::Weight { k: 0 }).unwrap();
        assert!((v - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn sigma_distance_edge_cases() {
        assert_eq!(sigma_distance(0.25, 0.0, 0.25), 0.0);
        assert!(sigma_distance(0.25, 0.0, 0.3).is_infinite());
        assert!((sigma_distance(1.0, 0.5, 0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let q = QrtKind::Multipartite { n: 3 };
        let label = IrrepLabel::Weight { k: 2 };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_haar_mean(&q, &label, 300, 9).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn small_bipartite_estimate() {
        let est = estimate_haar_mean(&QrtKind::Bipartite2q, &IrrepLabel::support(&[1, 1]), 2000, 7).unwrap();
        assert!((est.mean - 0.45).abs() < 4.0 * est.std_error);
        assert!(estimate_haar_mean(&QrtKind::Bipartite2q, &IrrepLabel::support(&[1, 1]), 1, 7).is_err());
    }
}
