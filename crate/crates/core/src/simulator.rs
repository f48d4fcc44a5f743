//! Run orchestration: single runs, multi-scheme comparisons, and ε sweeps.
//!
//! A run is a pure function of its trace and configuration. Comparison grids
//! and sweeps execute their runs in parallel but collect results in input
//! order, so their output is identical no matter how many workers are used.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{RunReport, reports_to_csv, reports_to_json, summarize};
use crate::predictor::Scheme;
use crate::protocol::{BaseStation, SensorNode, StepRecord, run_pair};
use crate::traces::Trace;

/// Window depth used by the reference evaluation.
pub const DEFAULT_M: usize = 3;

/// Configuration of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Maximum allowable absolute data error, in the signal's units.
    pub eps: f64,
    /// History depth M.
    pub m: usize,
    pub scheme: Scheme,
    /// Keep the per-step ledger in the run output.
    pub emit_ledger: bool,
}

impl SimConfig {
    pub fn new(eps: f64, scheme: Scheme) -> Self {
        Self {
            eps,
            m: DEFAULT_M,
            scheme,
            emit_ledger: false,
        }
    }
}

/// Result of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: RunReport,
    pub ledger: Option<Vec<StepRecord>>,
}

/// Simulate one trace under one configuration.
pub fn run(trace: &Trace, cfg: &SimConfig) -> Result<RunOutput> {
    let gains = cfg.scheme.gains();
    let mut sensor = SensorNode::new(gains, cfg.m, cfg.eps)?;
    let mut station = BaseStation::new(gains, cfg.m)?;
    let ledger = run_pair(&mut sensor, &mut station, &trace.values)?;
    let report = summarize(&ledger, &trace.name, cfg.scheme.name(), cfg.eps, cfg.m)?;
    Ok(RunOutput {
        report,
        ledger: cfg.emit_ledger.then_some(ledger),
    })
}

/// One row per (trace, scheme) pair, trace-major, schemes in the given order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<RunReport>,
}

impl ComparisonTable {
    pub fn to_csv(&self) -> String {
        reports_to_csv(&self.rows)
    }

    pub fn to_json(&self) -> String {
        reports_to_json(&self.rows)
    }
}

/// Run every scheme on every trace, taking each trace's ε from its attached
/// default. Runs execute in parallel; row order is deterministic.
pub fn compare(traces: &[Trace], schemes: &[Scheme], m: usize) -> Result<ComparisonTable> {
    if traces.is_empty() || schemes.is_empty() {
        return Err(Error::Validation(
            "comparison needs at least one trace and one scheme".into(),
        ));
    }
    let mut jobs = Vec::with_capacity(traces.len() * schemes.len());
    for trace in traces {
        let eps = trace.default_eps.ok_or_else(|| {
            Error::Validation(format!("trace `{}` has no eps configured", trace.name))
        })?;
        for &scheme in schemes {
            jobs.push((trace, eps, scheme));
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(trace, eps, scheme)| {
            let cfg = SimConfig {
                eps,
                m,
                scheme,
                emit_ledger: false,
            };
            run(trace, &cfg).map(|out| out.report)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonTable { rows })
}

/// Run one scheme on one trace once per ε, reports in `eps_list` order.
pub fn sweep(trace: &Trace, scheme: Scheme, eps_list: &[f64], m: usize) -> Result<Vec<RunReport>> {
    if eps_list.is_empty() {
        return Err(Error::Validation("sweep needs at least one eps".into()));
    }
    for &eps in eps_list {
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::Validation(format!(
                "eps must be finite and non-negative, got {eps}"
            )));
        }
    }
    eps_list
        .par_iter()
        .map(|&eps| {
            let cfg = SimConfig {
                eps,
                m,
                scheme,
                emit_ledger: false,
            };
            run(trace, &cfg).map(|out| out.report)
        })
        .collect()
}

/// Render a ledger as CSV with columns k, x, prediction, transmitted, y, e,
/// data_error. Bootstrap steps have empty prediction and e cells.
pub fn ledger_to_csv(ledger: &[StepRecord]) -> String {
    let mut out = String::from("k,x,prediction,transmitted,y,e,data_error\n");
    for r in ledger {
        let prediction = r.prediction.map(|p| p.to_string()).unwrap_or_default();
        let e = r
            .prediction_error
            .map(|e| e.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.k, r.sample, prediction, r.transmitted, r.record, e, r.data_error
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traces::{gen_constant, gen_ramp, gen_random_walk};

    #[test]
    fn constant_trace_bootstrap_only() {
        let trace = gen_constant(5.0, 100).unwrap();
        let out = run(&trace, &SimConfig::new(0.01, Scheme::Past)).unwrap();
        assert_eq!(out.report.n_tx, 3);
        assert_eq!(out.report.energy_ratio, 0.03);
        assert_eq!(out.report.violations, 0);
        assert!(out.ledger.is_none());
    }

    #[test]
    fn linear_scheme_exact_on_affine_trace() {
        let trace = gen_ramp(0.0, 1.0, 100).unwrap();
        let out = run(&trace, &SimConfig::new(0.5, Scheme::Linear)).unwrap();
        assert_eq!(out.report.n_tx, 3);
    }

    #[test]
    fn past_scheme_transmits_whole_steep_ramp() {
        let trace = gen_ramp(0.0, 1.0, 100).unwrap();
        let out = run(&trace, &SimConfig::new(0.5, Scheme::Past)).unwrap();
        assert_eq!(out.report.n_tx, 100);
        assert_eq!(out.report.energy_ratio, 1.0);
    }

    #[test]
    fn emit_ledger_keeps_every_step() {
        let trace = gen_constant(5.0, 10).unwrap();
        let mut cfg = SimConfig::new(0.1, Scheme::Past);
        cfg.emit_ledger = true;
        let out = run(&trace, &cfg).unwrap();
        assert_eq!(out.ledger.unwrap().len(), 10);
    }

    #[test]
    fn compare_grid_shape_and_order() {
        let traces: Vec<Trace> = (0..5)
            .map(|i| {
                let mut t = gen_random_walk(i, 0.5, 50).unwrap().with_eps(0.2).unwrap();
                t.name = format!("walk{i}");
                t
            })
            .collect();
        let schemes = [
            Scheme::Past,
            Scheme::Average,
            Scheme::Linear,
            Scheme::Pid(crate::predictor::DEFAULT_PID_GAINS),
        ];
        let table = compare(&traces, &schemes, 3).unwrap();
        assert_eq!(table.rows.len(), 20);
        // Trace-major ordering with schemes in the given order.
        assert_eq!(table.rows[0].trace_name, "walk0");
        assert_eq!(table.rows[0].scheme_name, "PAST");
        assert_eq!(table.rows[3].scheme_name, "PID");
        assert_eq!(table.rows[4].trace_name, "walk1");
        assert!(table.rows.iter().all(|r| r.violations == 0));
    }

    #[test]
    fn compare_single_pair_equals_single_run() {
        let trace = gen_constant(2.0, 40).unwrap().with_eps(0.1).unwrap();
        let table = compare(std::slice::from_ref(&trace), &[Scheme::Past], 3).unwrap();
        let single = run(&trace, &SimConfig::new(0.1, Scheme::Past)).unwrap();
        assert_eq!(table.rows, vec![single.report]);
    }

    #[test]
    fn compare_requires_eps_on_every_trace() {
        let trace = gen_constant(2.0, 40).unwrap();
        assert!(matches!(
            compare(&[trace], &[Scheme::Past], 3),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn sweep_runs_once_per_eps() {
        let trace = gen_random_walk(9, 0.5, 200).unwrap();
        let reports = sweep(&trace, Scheme::Past, &[0.1, 0.5, 1.0], 3).unwrap();
        assert_eq!(reports.len(), 3);
        assert_eq!(reports[0].eps, 0.1);
        assert_eq!(reports[2].eps, 1.0);

        let single = sweep(&trace, Scheme::Past, &[0.1], 3).unwrap();
        let direct = run(&trace, &SimConfig::new(0.1, Scheme::Past)).unwrap();
        assert_eq!(single[0], direct.report);
    }

    #[test]
    fn sweep_on_constant_trace_transmits_m_samples() {
        let trace = gen_constant(7.0, 500).unwrap();
        for scheme in [Scheme::Past, Scheme::Average, Scheme::Linear] {
            let reports = sweep(&trace, scheme, &[0.001, 0.1, 10.0], 3).unwrap();
            assert!(reports.iter().all(|r| r.n_tx == 3));
        }
    }

    #[test]
    fn sweep_rejects_bad_eps() {
        let trace = gen_constant(7.0, 10).unwrap();
        assert!(sweep(&trace, Scheme::Past, &[], 3).is_err());
        assert!(sweep(&trace, Scheme::Past, &[-0.1], 3).is_err());
    }

    #[test]
    fn explicit_gains_match_their_preset() {
        let trace = gen_random_walk(3, 1.0, 300).unwrap();
        for (gains, preset) in [
            ((1.0, 0.0, 0.0), Scheme::Past),
            ((0.0, 1.0, 0.0), Scheme::Average),
            ((1.0, 0.0, 1.0), Scheme::Linear),
        ] {
            let pid =
                Scheme::Pid(crate::predictor::GainSet::new(gains.0, gains.1, gains.2).unwrap());
            let mut cfg = SimConfig::new(0.4, pid);
            cfg.emit_ledger = true;
            let a = run(&trace, &cfg).unwrap();
            cfg.scheme = preset;
            let b = run(&trace, &cfg).unwrap();
            assert_eq!(a.ledger, b.ledger);
        }
    }

    #[test]
    fn run_is_deterministic() {
        let trace = gen_random_walk(5, 1.0, 500).unwrap();
        let cfg = SimConfig::new(0.3, Scheme::Pid(crate::predictor::DEFAULT_PID_GAINS));
        let a = run(&trace, &cfg).unwrap();
        let b = run(&trace, &cfg).unwrap();
        assert_eq!(a.report, b.report);
        assert_eq!(reports_to_csv(&[a.report]), reports_to_csv(&[b.report]));
    }

    #[test]
    fn ledger_csv_has_empty_bootstrap_cells() {
        let trace = gen_ramp(0.0, 1.0, 5).unwrap();
        let mut cfg = SimConfig::new(0.5, Scheme::Past);
        cfg.emit_ledger = true;
        let out = run(&trace, &cfg).unwrap();
        let csv = ledger_to_csv(&out.ledger.unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,x,prediction,transmitted,y,e,data_error");
        assert_eq!(lines[1], "0,0,,true,0,,0");
        assert_eq!(lines[4], "3,3,2,true,3,1,0");
    }
}
