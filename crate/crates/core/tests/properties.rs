use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use gfd_core::closed_forms::{
    cf_fermionic, family_profile, BipartiteFamily, ClosedFamily, CliffordFamily, FermionicFamily, MultipartiteFamily,
    SpinFamily,
};
use gfd_core::factory::{make_state, sample_haar, Family, StateSpec};
use gfd_core::free_ops::apply_random_free_unitary;
use gfd_core::irrep::{hs_inner, irrep_basis, irrep_table, BasisOperator, CliffordIrrep, IrrepLabel, QrtKind};
use gfd_core::maxent::correlation_matrix;
use gfd_core::purity::{aggregate_profile, cumulative_profile, profile, Aggregation};
use gfd_core::state::{PureState, System};

fn qrt_strategy() -> impl Strategy<Value = QrtKind> {
    prop_oneof![
        Just(QrtKind::Bipartite2q),
        (1u32..=5).prop_map(|n| QrtKind::Multipartite { n }),
        (1u32..=5).prop_map(|n| QrtKind::Fermionic { n }),
        (1u32..=10).prop_map(|twice_s| QrtKind::Spin { twice_s }),
        (1u32..=3).prop_map(|n| QrtKind::Clifford { n }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profiles_are_normalized(q in qrt_strategy(), seed in any::<u64>()) {
        let psi = sample_haar(q.system(), seed, None).unwrap();
        let p = profile(&psi, &q).unwrap();
        prop_assert!((p.total - 1.0).abs() < 1e-9);
        prop_assert!(p.entries.iter().all(|e| e.purity >= 0.0));
        let cum = cumulative_profile(&p);
        prop_assert!(cum.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1 + 1e-15));
        prop_assert!((cum.last().unwrap().1 - p.total).abs() < 1e-12);
    }

    #[test]
    fn aggregation_preserves_total(n in 1u32..=5, seed in any::<u64>()) {
        let q = QrtKind::Multipartite { n };
        let p = profile(&sample_haar(q.system(), seed, None).unwrap(), &q).unwrap();
        let agg = aggregate_profile(&p, Aggregation::ByHammingWeight).unwrap();
        prop_assert_eq!(agg.total, p.total);
        let s: f64 = agg.entries.iter().map(|e| e.purity).sum();
        prop_assert!((s - p.total).abs() < 1e-12);
        let f = QrtKind::Fermionic { n };
        let pf = profile(&sample_haar(f.system(), seed, None).unwrap(), &f).unwrap();
        let mirror = aggregate_profile(&pf, Aggregation::FermionicMirror).unwrap();
        let s: f64 = mirror.entries.iter().map(|e| e.purity).sum();
        prop_assert!((s - pf.total).abs() < 1e-12);
    }

    #[test]
    fn two_qubit_single_degree_of_freedom(seed in any::<u64>()) {
        let psi = sample_haar(System::Qubits { n: 2 }, seed, None).unwrap();
        let p = profile(&psi, &QrtKind::Bipartite2q).unwrap();
        let p10 = p.get(&IrrepLabel::support(&[1, 0])).unwrap();
        let p01 = p.get(&IrrepLabel::support(&[0, 1])).unwrap();
        let p11 = p.get(&IrrepLabel::support(&[1, 1])).unwrap();
        prop_assert!((2.0 * p10 + p11 - 0.75).abs() < 1e-10);
        prop_assert!((p10 - p01).abs() < 1e-10);
        // Reduced state of qubit 0 by partial trace over qubit 1.
        let a = psi.amplitudes();
        let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in rho.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                for other in 0..2 {
                    *v += a[i | (other << 1)] * a[j | (other << 1)].conj();
                }
            }
        }
        let tr_sq: f64 = rho.iter().flatten().map(|v| v.norm_sqr()).sum();
        prop_assert!((p10 - 0.5 * (tr_sq - 0.5)).abs() < 1e-10);
    }

    #[test]
    fn correlation_matrix_is_antisymmetric(n in 1u32..=6, seed in any::<u64>()) {
        let psi = sample_haar(System::Qubits { n }, seed, None).unwrap();
        let c = correlation_matrix(&psi).unwrap();
        prop_assert!(c.antisymmetry_defect() < 1e-10);
        prop_assert!(c.singular_values().iter().all(|s| *s <= 1.0 + 1e-10));
    }

    #[test]
    fn gaussian_states_have_orthogonal_correlations(n in 2u32..=6, seed in any::<u64>()) {
        let psi = make_state(&StateSpec::qubits(Family::GaussianRandom, n).with_seed(seed)).unwrap();
        let c = correlation_matrix(&psi).unwrap();
        prop_assert!(c.singular_values().iter().all(|s| (s - 1.0).abs() < 1e-9));
        let p2 = profile(&psi, &QrtKind::Fermionic { n }).unwrap().get(&IrrepLabel::Majorana { alpha: 2 }).unwrap();
        prop_assert!((p2 - c.weight_two_purity()).abs() < 1e-10);
    }

    #[test]
    fn extent_weight_two_decays_as_cos_squared(blocks in 1u32..=16, gamma in 0.0..PI) {
        let n = 4 * blocks;
        let e = cf_fermionic(FermionicFamily::Extent { gamma }, n, 2).unwrap();
        let g = cf_fermionic(FermionicFamily::Gaussian, n, 2).unwrap();
        prop_assert!((e / g - (gamma / 2.0).cos().powi(2)).abs() < 1e-9);
    }
}

#[test]
fn weight_two_purity_matches_engine_on_any_state() {
    for seed in 0..10 {
        let psi = sample_haar(System::Qubits { n: 4 }, seed, None).unwrap();
        let p2 = profile(&psi, &QrtKind::Fermionic { n: 4 }).unwrap().get(&IrrepLabel::Majorana { alpha: 2 }).unwrap();
        assert!((p2 - correlation_matrix(&psi).unwrap().weight_two_purity()).abs() < 1e-10);
    }
}

#[test]
fn ghz_correlations_are_not_gaussian() {
    let ghz = make_state(&StateSpec::qubits(Family::Ghz, 4)).unwrap();
    let sv = correlation_matrix(&ghz).unwrap().singular_values();
    assert!(sv.iter().any(|s| *s < 1.0 - 1e-6));
}

fn dense_free_unitary(q: &QrtKind, seed: u64) -> DMatrix<Complex64> {
    let system = q.system();
    let d = system.dim();
    let mut u = DMatrix::zeros(d, d);
    for col in 0..d {
        let image = apply_random_free_unitary(&PureState::basis(system, col).unwrap(), q, seed).unwrap();
        for (row, a) in image.amplitudes().iter().enumerate() {
            u[(row, col)] = *a;
        }
    }
    u
}

#[test]
fn irrep_spans_are_invariant_subspaces() {
    let qrts = [
        QrtKind::Bipartite2q,
        QrtKind::Multipartite { n: 3 },
        QrtKind::Fermionic { n: 3 },
        QrtKind::Spin { twice_s: 4 },
        QrtKind::Clifford { n: 1 },
        QrtKind::Clifford { n: 2 },
    ];
    for q in qrts {
        for class in irrep_table(&q).unwrap() {
            if class.label == (IrrepLabel::Clifford { irrep: CliffordIrrep::Residual }) {
                continue;
            }
            let basis = irrep_basis(&q, &class.label).unwrap();
            for seed in 0..20 {
                let mut u = dense_free_unitary(&q, seed);
                if matches!(q, QrtKind::Clifford { .. }) {
                    u = u.kronecker(&u);
                }
                for b in &basis.elements {
                    let moved = BasisOperator::Dense(&u * b.to_dense() * u.adjoint());
                    let kept: f64 = basis.elements.iter().map(|e| hs_inner(e, &moved).unwrap().norm_sqr()).sum();
                    assert!((kept - 1.0).abs() < 1e-8, "{} {} seed {seed}: {kept}", q.name(), class.label);
                }
            }
        }
    }
}

#[test]
fn clifford_residual_is_affine_in_p1() {
    for n in 1..=3u32 {
        let q = QrtKind::Clifford { n };
        let pts: Vec<(f64, f64)> = (0..10)
            .map(|s| {
                let p = profile(&sample_haar(q.system(), 900 + s, None).unwrap(), &q).unwrap();
                (
                    p.get(&IrrepLabel::Clifford { irrep: CliffordIrrep::One }).unwrap(),
                    p.get(&IrrepLabel::Clifford { irrep: CliffordIrrep::Residual }).unwrap(),
                )
            })
            .collect();
        let (x0, y0) = pts[0];
        let (x1, y1) = pts[1];
        let slope = (y1 - y0) / (x1 - x0);
        for (x, y) in &pts[2..] {
            assert!((y0 + slope * (x - x0) - y).abs() < 1e-8, "n={n}");
        }
    }
}

#[test]
fn haar_samples_stay_off_the_free_value() {
    // Algebra-class purity reaches the free value only on the free orbit,
    // which Haar samples avoid.
    for seed in 0..50 {
        let psi = sample_haar(System::Qubits { n: 3 }, seed, None).unwrap();
        let p = aggregate_profile(&profile(&psi, &QrtKind::Multipartite { n: 3 }).unwrap(), Aggregation::ByHammingWeight)
            .unwrap();
        assert!(p.get(&IrrepLabel::Weight { k: 1 }).unwrap() < 3.0 / 8.0 - 1e-6);
    }
}

fn assert_normalized(q: QrtKind, f: ClosedFamily, agg: Aggregation) {
    let p = family_profile(&q, &f, agg).unwrap();
    assert!((p.total - 1.0).abs() < 1e-9, "{q:?} {f:?}: {}", p.total);
}

#[test]
fn closed_forms_are_normalized() {
    use ClosedFamily as C;
    for f in [BipartiteFamily::Product, BipartiteFamily::Bell, BipartiteFamily::Theta { theta: 0.7 }, BipartiteFamily::HaarMean] {
        assert_normalized(QrtKind::Bipartite2q, C::Bipartite(f), Aggregation::PerIrrep);
    }
    for n in 1..=64 {
        let q = QrtKind::Multipartite { n };
        for f in [MultipartiteFamily::Product, MultipartiteFamily::Ghz, MultipartiteFamily::W, MultipartiteFamily::HaarMean, MultipartiteFamily::Ame] {
            assert_normalized(q, C::Multipartite(f), Aggregation::ByHammingWeight);
        }
        let q = QrtKind::Fermionic { n };
        let mut fams = vec![FermionicFamily::Gaussian, FermionicFamily::HaarEvenExact];
        if n % 2 == 0 {
            fams.push(FermionicFamily::Ghz);
        }
        if n % 4 == 0 {
            fams.extend([0.0, 0.9, 2.2, PI].map(|gamma| FermionicFamily::Extent { gamma }));
        }
        for f in fams {
            assert_normalized(q, C::Fermionic(f), Aggregation::PerIrrep);
        }
        let approx = family_profile(&q, &C::Fermionic(FermionicFamily::HaarEvenMean), Aggregation::PerIrrep).unwrap();
        assert!((1.0 - approx.total).abs() <= (2.0 - n as f64).exp2());
        if n <= 31 {
            for f in [CliffordFamily::Stabilizer, CliffordFamily::Magic, CliffordFamily::HaarMean] {
                assert_normalized(QrtKind::Clifford { n }, C::Clifford(f), Aggregation::PerIrrep);
            }
        }
    }
    for twice_s in 1..=200u32 {
        let q = QrtKind::Spin { twice_s };
        let ts = twice_s as i32;
        assert_normalized(q, C::Spin(SpinFamily::HaarMean), Aggregation::PerIrrep);
        assert_normalized(q, C::Spin(SpinFamily::BasisM { twice_m: ts }), Aggregation::PerIrrep);
        if twice_s <= 40 || twice_s % 50 == 0 {
            assert_normalized(q, C::Spin(SpinFamily::Ghz), Aggregation::PerIrrep);
            for tm in [ts - 2, ts % 2, -ts] {
                assert_normalized(q, C::Spin(SpinFamily::BasisM { twice_m: tm }), Aggregation::PerIrrep);
            }
        }
    }
}

#[test]
fn fermionic_ghz_agrees_with_gaussian_on_multiples_of_four() {
    for n in (2..=64).step_by(2) {
        for alpha in (0..=2 * n).step_by(4) {
            if alpha == n {
                continue;
            }
            let g = cf_fermionic(FermionicFamily::Gaussian, n, alpha).unwrap();
            assert_eq!(cf_fermionic(FermionicFamily::Ghz, n, alpha).unwrap(), g);
        }
    }
}
