//! Serialized shapes of the command outputs.

use qdm_core::sweep::CSV_HEADER;
use qdm_core::{MeasureReport, SweepRow};
use serde::Serialize;

use crate::failure::Failure;

#[derive(Serialize)]
pub struct Source {
    pub preset: Option<String>,
    pub p: Option<f64>,
    pub file: Option<String>,
    pub dims: [usize; 2],
}

#[derive(Serialize)]
pub struct Minimizer {
    pub method: &'static str,
    /// Bloch direction of the minimizing observable; absent beyond qubits.
    pub direction: Option<[f64; 3]>,
    pub oracle_gap: Option<f64>,
    pub evaluations: usize,
}

impl From<&MeasureReport> for Minimizer {
    fn from(r: &MeasureReport) -> Self {
        Minimizer {
            method: r.method.as_str(),
            direction: r.minimizer.as_ref().and_then(|m| m.bloch_direction()),
            oracle_gap: r.diagnostics.oracle_gap,
            evaluations: r.diagnostics.evaluations,
        }
    }
}

#[derive(Serialize)]
pub struct Minimizers {
    pub lqu: Minimizer,
    pub qip: Minimizer,
    pub discord_entropic: Option<Minimizer>,
}

#[derive(Serialize)]
pub struct MeasuresReport {
    pub source: Source,
    pub side: String,
    pub spectrum: Vec<f64>,
    pub lqu: f64,
    pub qip_raw: f64,
    pub qip_normalized: f64,
    /// Projective measurements on a qubit side only.
    pub discord_entropic: Option<f64>,
    pub mutual_information: f64,
    pub purity: f64,
    pub minimizers: Minimizers,
}

#[derive(Serialize)]
pub struct EstimateReport {
    pub source: Source,
    pub side: String,
    pub direction: [f64; 3],
    pub theta_true: f64,
    pub shots: u64,
    pub batches: usize,
    pub seed: u64,
    pub theta_window: [f64; 2],
    pub theta_hat: f64,
    pub bias: f64,
    pub standard_error: f64,
    pub variance_empirical: f64,
    pub crb: f64,
    pub variance_to_crb: f64,
    pub fisher_quantum: f64,
    pub fisher_classical: f64,
    pub probabilities: Vec<f64>,
    pub outcome_histogram: Vec<u64>,
    pub batch_estimates: Vec<f64>,
}

#[derive(Serialize)]
struct JsonRow {
    p: f64,
    qfi_x: f64,
    qfi_y: f64,
    qfi_z: f64,
    qfi_diag: f64,
    qip_raw: f64,
    qip_normalized: f64,
    lqu: f64,
    discord_entropic: f64,
    purity: f64,
}

impl From<&SweepRow> for JsonRow {
    fn from(r: &SweepRow) -> Self {
        JsonRow {
            p: r.p,
            qfi_x: r.qfi_x,
            qfi_y: r.qfi_y,
            qfi_z: r.qfi_z,
            qfi_diag: r.qfi_diag,
            qip_raw: r.qip_raw,
            qip_normalized: r.qip_normalized,
            lqu: r.lqu,
            discord_entropic: r.discord_entropic,
            purity: r.purity,
        }
    }
}

#[derive(Serialize)]
struct JsonSweep<'a> {
    preset: &'a str,
    rows: Vec<JsonRow>,
}

/// 17 significant digits, enough to recover every `f64` exactly.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e: csv::Error| Failure::Input(e.to_string());
    w.write_record(CSV_HEADER).map_err(wrap)?;
    for r in rows {
        w.write_record(r.values().iter().map(|&x| format_value(x)))
            .map_err(wrap)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

pub fn sweep_json(preset: &str, rows: &[SweepRow]) -> String {
    let doc = JsonSweep {
        preset,
        rows: rows.iter().map(JsonRow::from).collect(),
    };
    to_json(&doc)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
