//! Run-level evaluation quantities: energy ratio, RMSE, and bound accounting.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::StepRecord;

/// Aggregate metrics of one run.
///
/// Serializes to a flat JSON object or one CSV row; the field order below is
/// the CSV column order. Two RMSE variants are reported: `rmse_prediction`
/// over the raw prediction errors at every step where a prediction exists
/// (transmitted steps included, so it can exceed ε), and `rmse_data` over the
/// recorded-value errors, which the transmission bound keeps at or below ε.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub trace_name: String,
    pub scheme_name: String,
    pub eps: f64,
    pub m: usize,
    pub k_total: u64,
    pub n_tx: u64,
    pub energy_ratio: f64,
    pub rmse_prediction: f64,
    pub rmse_data: f64,
    pub max_abs_data_error: f64,
    pub violations: u64,
}

impl RunReport {
    /// A run is clean iff no step broke the error bound.
    pub fn is_clean(&self) -> bool {
        self.violations == 0
    }
}

/// Fraction of samples transmitted, N/k: the proxy for normalized
/// communication energy.
pub fn energy_ratio(n_tx: u64, k_total: u64) -> Result<f64> {
    if k_total == 0 {
        return Err(Error::Validation(
            "energy ratio is undefined for zero samples".into(),
        ));
    }
    if n_tx > k_total {
        return Err(Error::Validation(format!(
            "transmission count {n_tx} exceeds sample count {k_total}"
        )));
    }
    Ok(n_tx as f64 / k_total as f64)
}

/// Root mean squared error, summed left to right in sequence order.
pub fn rmse(errors: &[f64]) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::Validation(
            "rmse of an empty sequence is undefined".into(),
        ));
    }
    let sum = errors.iter().fold(0.0, |acc, e| acc + e * e);
    Ok((sum / errors.len() as f64).sqrt())
}

/// Reduce a run ledger to a report.
///
/// `rmse_prediction` covers the steps where a prediction exists (a run shorter
/// than the window has none; the field is then 0). `rmse_data` covers every
/// step. `violations` counts steps whose absolute data error exceeds `eps`;
/// any nonzero count means the run failed its bound.
pub fn summarize(
    ledger: &[StepRecord],
    trace_name: &str,
    scheme_name: &str,
    eps: f64,
    m: usize,
) -> Result<RunReport> {
    if ledger.is_empty() {
        return Err(Error::Validation("cannot summarize an empty ledger".into()));
    }
    let k_total = ledger.len() as u64;
    let n_tx = ledger.iter().filter(|r| r.transmitted).count() as u64;

    let prediction_errors: Vec<f64> = ledger.iter().filter_map(|r| r.prediction_error).collect();
    let rmse_prediction = if prediction_errors.is_empty() {
        0.0
    } else {
        rmse(&prediction_errors)?
    };

    let data_errors: Vec<f64> = ledger.iter().map(|r| r.data_error).collect();
    let rmse_data = rmse(&data_errors)?;
    let max_abs_data_error = data_errors.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    let violations = ledger.iter().filter(|r| r.data_error.abs() > eps).count() as u64;

    Ok(RunReport {
        trace_name: trace_name.to_owned(),
        scheme_name: scheme_name.to_owned(),
        eps,
        m,
        k_total,
        n_tx,
        energy_ratio: energy_ratio(n_tx, k_total)?,
        rmse_prediction,
        rmse_data,
        max_abs_data_error,
        violations,
    })
}

/// Render reports as CSV, header included.
pub fn reports_to_csv(reports: &[RunReport]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for report in reports {
        writer
            .serialize(report)
            .expect("a flat struct always serializes");
    }
    let bytes = writer.into_inner().expect("writing to a Vec cannot fail");
    String::from_utf8(bytes).expect("csv output is valid UTF-8")
}

/// Render one report as a flat JSON object.
pub fn report_to_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("a flat struct always serializes")
}

/// Render reports as a JSON array of objects.
pub fn reports_to_json(reports: &[RunReport]) -> String {
    serde_json::to_string_pretty(reports).expect("a flat struct always serializes")
}
