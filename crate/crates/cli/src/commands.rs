//! Command implementations. Each returns the rendered document and an exit status.

use std::f64::consts::PI;

use gfd_core::closed_forms::{cf_clifford_witness, closed_family_for, family_profile, CliffordFamily};
use gfd_core::factory::Family;
use gfd_core::haar_mc::{estimate_haar_profile, estimate_haar_witness, haar_sample, systematic_budget};
use gfd_core::irrep::{checksum, mirror_classes, weight_classes, CLIFFORD_BASIS_CAP, PAULI_BASIS_CAP, SPIN_BASIS_TWICE_CAP};
use gfd_core::purity::stabilizer_purity;
use gfd_core::{
    aggregate_profile, closed_form_profile, closed_form_value, irrep_table, make_state, profile, verify_compression,
    Aggregation, ClosedFamily, CliffordIrrep, GfdError, IrrepLabel, PurityProfile, QrtKind, StateSpec,
};

use crate::config::{resolve_family, CommandKind, Method, RunConfig};
use crate::error::{CliError, CliResult, EXIT_OK, EXIT_VERIFY};
use crate::output::{
    render, FamilySummary, HaarDoc, IrrepDoc, IrrepRow, MaxentDoc, ProfileDoc, VerifyDoc, VerifyRow,
};

/// Rendered output plus exit status and stderr notes.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub status: i32,
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(bytes: Vec<u8>) -> Self {
        Self { bytes, status: EXIT_OK, notes: Vec::new() }
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    match cfg.command {
        CommandKind::Profile => run_profile(cfg),
        CommandKind::Verify => run_verify(cfg),
        CommandKind::Haar => run_haar(cfg),
        CommandKind::Maxent => run_maxent(cfg),
        CommandKind::ListIrreps => run_list_irreps(cfg),
    }
}

fn state_of(cfg: &RunConfig) -> CliResult<&StateSpec> {
    cfg.state.as_ref().ok_or_else(|| CliError::Usage("this command needs --family".into()))
}

/// Largest size the brute-force engine handles for this theory, with its name.
fn brute_cap(qrt: &QrtKind) -> Option<(&'static str, u64, u64)> {
    match *qrt {
        QrtKind::Bipartite2q => None,
        QrtKind::Multipartite { n } | QrtKind::Fermionic { n } => {
            (n > PAULI_BASIS_CAP).then_some(("brute-force Pauli qubit count", PAULI_BASIS_CAP as u64, n as u64))
        }
        QrtKind::Spin { twice_s } => (twice_s > SPIN_BASIS_TWICE_CAP).then_some((
            "brute-force spin 2s",
            SPIN_BASIS_TWICE_CAP as u64,
            twice_s as u64,
        )),
        QrtKind::Clifford { n } => {
            (n > CLIFFORD_BASIS_CAP).then_some(("brute-force Clifford qubit count", CLIFFORD_BASIS_CAP as u64, n as u64))
        }
    }
}

fn brute_profile(qrt: &QrtKind, spec: &StateSpec, aggregation: Aggregation) -> CliResult<PurityProfile> {
    let state = make_state(spec)?;
    Ok(aggregate_profile(&profile(&state, qrt)?, aggregation)?)
}

pub fn run_profile(cfg: &RunConfig) -> CliResult<Outcome> {
    let spec = state_of(cfg)?;
    let (p, method) = match cfg.method {
        Method::Brute => (brute_profile(&cfg.qrt, spec, cfg.aggregation)?, "brute"),
        Method::Closed => (closed_form_profile(&cfg.qrt, spec, cfg.aggregation)?, "closed"),
        Method::Auto => match brute_cap(&cfg.qrt) {
            None => (brute_profile(&cfg.qrt, spec, cfg.aggregation)?, "brute"),
            Some((what, limit, requested)) => match closed_form_profile(&cfg.qrt, spec, cfg.aggregation) {
                Ok(p) => (p, "closed"),
                Err(GfdError::Parameter(msg)) if msg.starts_with("no closed form") => {
                    return Err(GfdError::Capacity { what: format!("{what} ({msg})"), limit, requested }.into())
                }
                Err(e) => return Err(e.into()),
            },
        },
    };
    let doc = ProfileDoc::new(spec.clone(), method, &p);
    Ok(Outcome::ok(render(&doc, cfg.format)?))
}

struct VerifyCase {
    group: &'static str,
    name: String,
    spec: StateSpec,
}

impl VerifyCase {
    fn new(group: &'static str, name: impl Into<String>, spec: StateSpec) -> Self {
        Self { group, name: name.into(), spec }
    }
}

fn verify_cases(qrt: &QrtKind, seed: u64) -> Vec<VerifyCase> {
    let q = |f: Family, n: u32| StateSpec::qubits(f, n);
    match *qrt {
        QrtKind::Bipartite2q => {
            let mut cases = vec![
                VerifyCase::new("product", "product", q(Family::Product, 2).with_seed(seed)),
                VerifyCase::new("bell", "bell", q(Family::Bell, 2)),
            ];
            for i in 0..=4 {
                let theta = i as f64 * PI / 8.0;
                cases.push(VerifyCase::new("theta", format!("theta[{theta}]"), q(Family::Theta, 2).with_theta(theta)));
            }
            cases
        }
        QrtKind::Multipartite { n } => vec![
            VerifyCase::new("product", "product", q(Family::Product, n).with_seed(seed)),
            VerifyCase::new("ghz", "ghz", q(Family::Ghz, n)),
            VerifyCase::new("w", "w", q(Family::W, n)),
        ],
        QrtKind::Fermionic { n } => {
            let mut cases = vec![
                VerifyCase::new("gaussian", "vacuum", q(Family::Product, n)),
                VerifyCase::new("gaussian", "gaussian_random", q(Family::GaussianRandom, n).with_seed(seed)),
                VerifyCase::new("ghz", "ghz", q(Family::Ghz, n)),
            ];
            for gamma in [0.0, PI / 4.0, PI / 2.0, PI] {
                cases.push(VerifyCase::new("extent", format!("extent[{gamma}]"), q(Family::Extent, n).with_gamma(gamma)));
            }
            cases
        }
        QrtKind::Spin { twice_s } => {
            let s = twice_s as f64 / 2.0;
            let mut cases: Vec<VerifyCase> = (0..=twice_s)
                .map(|i| {
                    let m = (twice_s as i64 - 2 * i as i64) as f64 / 2.0;
                    VerifyCase::new("spin_basis", format!("spin_basis[{m}]"), StateSpec::spin(Family::SpinBasis, s).with_m(m))
                })
                .collect();
            cases.push(VerifyCase::new("spin_ghz", "spin_ghz", StateSpec::spin(Family::SpinGhz, s)));
            cases
        }
        QrtKind::Clifford { n } => {
            let mut cases: Vec<VerifyCase> = (0..=(1u64 << n))
                .map(|i| {
                    VerifyCase::new(
                        "stabilizer_canonical",
                        format!("stabilizer_canonical[{i}]"),
                        q(Family::StabilizerCanonical, n).with_index(i),
                    )
                })
                .collect();
            cases.push(VerifyCase::new("magic", "magic", q(Family::Magic, n)));
            cases
        }
    }
}

fn verify_aggregations(qrt: &QrtKind) -> Vec<Aggregation> {
    match qrt {
        QrtKind::Multipartite { .. } | QrtKind::Bipartite2q => vec![Aggregation::PerIrrep, Aggregation::ByHammingWeight],
        QrtKind::Fermionic { .. } => vec![Aggregation::PerIrrep, Aggregation::FermionicMirror],
        _ => vec![Aggregation::PerIrrep],
    }
}

fn matches_filter(case: &VerifyCase, filter: &str, qrt: &QrtKind) -> bool {
    if filter == case.group {
        return true;
    }
    match resolve_family(filter, qrt) {
        Ok(f) => f == case.spec.family,
        Err(_) => filter == "stabilizer" && case.group == "stabilizer_canonical",
    }
}

/// Clifford classes whose purity is the same for every pure state.
const CLIFFORD_CONSTANT_CLASSES: [CliffordIrrep; 5] =
    [CliffordIrrep::Id, CliffordIrrep::R, CliffordIrrep::L, CliffordIrrep::Zero, CliffordIrrep::Two];
const HAAR_CONSTANT_STATES: u64 = 5;

pub fn run_verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let qrt = cfg.qrt;
    let seed = cfg.seed.unwrap_or(0);
    let mut cases = verify_cases(&qrt, seed);
    let mut constants = matches!(qrt, QrtKind::Clifford { .. });
    if let Some(filter) = &cfg.family_filter {
        cases.retain(|c| matches_filter(c, filter, &qrt));
        constants &= filter == "constants";
        if cases.is_empty() && !constants {
            return Err(CliError::Usage(format!("no verifiable family {filter:?} for the {} QRT", qrt.name())));
        }
    }

    // Closed forms first, so parameter errors surface before brute-force work.
    let families = cases
        .iter()
        .map(|c| {
            let family = closed_family_for(&qrt, &c.spec)?;
            for &agg in &verify_aggregations(&qrt) {
                family_profile(&qrt, &family, agg)?;
            }
            Ok(family)
        })
        .collect::<gfd_core::Result<Vec<ClosedFamily>>>()?;

    let mut groups: Vec<&str> = Vec::new();
    let mut rows = Vec::new();
    let mut row_groups = Vec::new();
    let mut push = |group: &'static str, family: &str, aggregation: Aggregation, class: String, closed: f64, brute: f64| {
        if !groups.contains(&group) {
            groups.push(group);
        }
        row_groups.push(group);
        rows.push(VerifyRow {
            family: family.to_string(),
            aggregation: aggregation.name().to_string(),
            class,
            closed_form: closed,
            brute_force: brute,
            deviation: (closed - brute).abs(),
        });
    };

    for (case, family) in cases.iter().zip(&families) {
        let state = make_state(&case.spec)?;
        let full = profile(&state, &qrt)?;
        for agg in verify_aggregations(&qrt) {
            for e in &aggregate_profile(&full, agg)?.entries {
                let closed = closed_form_value(&qrt, family, &e.class.label)?;
                push(case.group, &case.name, agg, e.class.label.to_string(), closed, e.purity);
            }
        }
        if let (QrtKind::Clifford { n }, ClosedFamily::Clifford(cf)) = (qrt, family) {
            let w = cf_clifford_witness(*cf, n)?;
            push(case.group, &case.name, Aggregation::None, "W".into(), w, stabilizer_purity(&state)?);
        }
    }
    if constants {
        let stab = ClosedFamily::Clifford(CliffordFamily::Stabilizer);
        for i in 0..HAAR_CONSTANT_STATES {
            let p = profile(&haar_sample(&qrt, seed, i)?, &qrt)?;
            for irrep in CLIFFORD_CONSTANT_CLASSES {
                let label = IrrepLabel::Clifford { irrep };
                let brute = p.get(&label).ok_or_else(|| GfdError::Internal(format!("class {label} missing")))?;
                let closed = closed_form_value(&qrt, &stab, &label)?;
                push("constants", &format!("constants[haar {i}]"), Aggregation::PerIrrep, label.to_string(), closed, brute);
            }
        }
    }

    let families: Vec<FamilySummary> = groups
        .iter()
        .map(|g| {
            let devs: Vec<f64> =
                rows.iter().zip(&row_groups).filter(|(_, rg)| *rg == g).map(|(r, _)| r.deviation).collect();
            FamilySummary { family: g.to_string(), classes: devs.len(), max_deviation: devs.iter().copied().fold(0.0, f64::max) }
        })
        .collect();

    let offending: Vec<String> = rows
        .iter()
        .filter(|r| r.deviation.is_nan() || r.deviation > cfg.tolerance)
        .map(|r| format!("deviation {:e} in family {} class {} ({})", r.deviation, r.family, r.class, r.aggregation))
        .collect();
    let passed = offending.is_empty();
    let mut notes: Vec<String> =
        families.iter().map(|f| format!("{}: max deviation {:e} over {} classes", f.family, f.max_deviation, f.classes)).collect();
    notes.extend(offending);
    let doc = VerifyDoc { qrt, tolerance: cfg.tolerance, passed, families, rows };
    Ok(Outcome { bytes: render(&doc, cfg.format)?, status: if passed { EXIT_OK } else { EXIT_VERIFY }, notes })
}

pub fn run_haar(cfg: &RunConfig) -> CliResult<Outcome> {
    let seed = cfg.seed.unwrap_or(0);
    let mut rows: Vec<_> = estimate_haar_profile(&cfg.qrt, cfg.aggregation, cfg.samples, seed)?
        .into_iter()
        .map(|(_, report)| report)
        .collect();
    if let QrtKind::Clifford { n } = cfg.qrt {
        rows.push(estimate_haar_witness(n, cfg.samples, seed)?);
    }
    let doc = HaarDoc {
        qrt: cfg.qrt,
        aggregation: cfg.aggregation.name().to_string(),
        samples: cfg.samples,
        seed,
        budget: systematic_budget(&cfg.qrt),
        rows,
    };
    Ok(Outcome::ok(render(&doc, cfg.format)?))
}

pub fn run_maxent(cfg: &RunConfig) -> CliResult<Outcome> {
    let spec = state_of(cfg)?;
    let state = make_state(spec)?;
    let report = verify_compression(&state, &cfg.qrt)?;
    let doc = MaxentDoc { qrt: cfg.qrt, state: spec.clone(), report };
    Ok(Outcome::ok(render(&doc, cfg.format)?))
}

pub fn run_list_irreps(cfg: &RunConfig) -> CliResult<Outcome> {
    let classes = match (cfg.qrt, cfg.aggregation) {
        (QrtKind::Multipartite { n }, Aggregation::ByHammingWeight) => weight_classes(n),
        (QrtKind::Bipartite2q, Aggregation::ByHammingWeight) => weight_classes(2),
        (QrtKind::Fermionic { n }, Aggregation::FermionicMirror) => mirror_classes(n),
        (_, Aggregation::PerIrrep | Aggregation::None) => irrep_table(&cfg.qrt)?,
        (qrt, agg) => {
            return Err(GfdError::Parameter(format!(
                "aggregation {} does not apply to the {} QRT",
                agg.name(),
                qrt.name()
            ))
            .into())
        }
    };
    let doc = IrrepDoc {
        qrt: cfg.qrt,
        aggregation: cfg.aggregation.name().to_string(),
        rows: classes.iter().map(IrrepRow::from_class).collect(),
        checksum: checksum(&classes),
    };
    Ok(Outcome::ok(render(&doc, cfg.format)?))
}
