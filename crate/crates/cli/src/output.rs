//! Row types and their CSV / JSON encodings, plus the atomic file sink.

use std::io::Write;
use std::path::Path;

use gfd_core::{CompressionReport, HaarReport, IrrepClass, PurityProfile, QrtKind, StateSpec};
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

use crate::config::Format;
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub label: String,
    pub dimension: u128,
    pub count: u128,
    pub purity: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub qrt: QrtKind,
    pub state: StateSpec,
    pub method: String,
    pub aggregation: String,
    pub rows: Vec<ProfileRow>,
    pub total: f64,
}

impl ProfileDoc {
    pub fn new(state: StateSpec, method: &str, p: &PurityProfile) -> Self {
        let rows = p
            .cumulative_rows()
            .into_iter()
            .map(|(e, cumulative)| ProfileRow {
                label: e.class.label.to_string(),
                dimension: e.class.dimension,
                count: e.class.count,
                purity: e.purity,
                cumulative,
            })
            .collect();
        Self {
            qrt: p.qrt,
            state,
            method: method.to_string(),
            aggregation: p.aggregation.name().to_string(),
            rows,
            total: p.total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub family: String,
    pub aggregation: String,
    pub class: String,
    pub closed_form: f64,
    pub brute_force: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub family: String,
    pub classes: usize,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub qrt: QrtKind,
    pub tolerance: f64,
    pub passed: bool,
    pub families: Vec<FamilySummary>,
    pub rows: Vec<VerifyRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaarDoc {
    pub qrt: QrtKind,
    pub aggregation: String,
    pub samples: u64,
    pub seed: u64,
    /// Systematic allowance on top of the statistical error (nonzero only
    /// where the analytic mean is approximate).
    pub budget: f64,
    pub rows: Vec<HaarReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxentDoc {
    pub qrt: QrtKind,
    pub state: StateSpec,
    #[serde(flatten)]
    pub report: CompressionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepRow {
    pub label: String,
    pub dimension: u128,
    pub count: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepDoc {
    pub qrt: QrtKind,
    pub aggregation: String,
    pub rows: Vec<IrrepRow>,
    /// Σ count × dimension; `None` when it overflows u128.
    pub checksum: Option<u128>,
}

impl IrrepRow {
    pub fn from_class(c: &IrrepClass) -> Self {
        Self { label: c.label.to_string(), dimension: c.dimension, count: c.count }
    }
}

/// Anything the CLI can print.
pub trait Document: Serialize {
    fn header(&self) -> Vec<&'static str>;
    fn records(&self) -> Vec<Vec<String>>;
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Document for ProfileDoc {
    fn header(&self) -> Vec<&'static str> {
        vec!["label", "dimension", "count", "purity", "cumulative"]
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.label.clone(),
                    r.dimension.to_string(),
                    r.count.to_string(),
                    r.purity.to_string(),
                    r.cumulative.to_string(),
                ]
            })
            .collect()
    }
}

impl Document for VerifyDoc {
    fn header(&self) -> Vec<&'static str> {
        vec!["family", "aggregation", "class", "closed_form", "brute_force", "deviation"]
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.family.clone(),
                    r.aggregation.clone(),
                    r.class.clone(),
                    r.closed_form.to_string(),
                    r.brute_force.to_string(),
                    r.deviation.to_string(),
                ]
            })
            .collect()
    }
}

impl Document for HaarDoc {
    fn header(&self) -> Vec<&'static str> {
        vec!["label", "mean", "std_error", "samples", "seed", "analytic", "approximate", "sigma_distance", "exact"]
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.label.clone(),
                    r.estimate.mean.to_string(),
                    r.estimate.std_error.to_string(),
                    r.estimate.samples.to_string(),
                    r.estimate.seed.to_string(),
                    r.analytic.to_string(),
                    r.approximate.to_string(),
                    r.sigma_distance.to_string(),
                    opt(r.exact),
                ]
            })
            .collect()
    }
}

impl Document for MaxentDoc {
    fn header(&self) -> Vec<&'static str> {
        vec!["certified", "fidelity", "correlation_distance", "overlap", "min_bloch_norm", "min_singular_value"]
    }

    fn records(&self) -> Vec<Vec<String>> {
        let min = |v: &Option<Vec<f64>>| v.as_ref().map(|v| v.iter().copied().fold(f64::INFINITY, f64::min));
        let r = &self.report;
        vec![vec![
            r.certified.to_string(),
            opt(r.fidelity),
            opt(r.correlation_distance),
            opt(r.overlap),
            opt(min(&r.bloch_norms)),
            opt(min(&r.singular_values)),
        ]]
    }
}

impl Document for IrrepDoc {
    fn header(&self) -> Vec<&'static str> {
        vec!["label", "dimension", "count"]
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| vec![r.label.clone(), r.dimension.to_string(), r.count.to_string()]).collect()
    }
}

pub fn render<D: Document>(doc: &D, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(doc)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(doc.header())?;
            for rec in doc.records() {
                w.write_record(&rec)?;
            }
            w.into_inner().map_err(|e| e.into_error().into())
        }
    }
}

/// Writes to `path` through a temp file in the same directory, or to stdout.
pub fn write_output(bytes: &[u8], path: Option<&Path>) -> CliResult<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
        }
    }
    Ok(())
}
