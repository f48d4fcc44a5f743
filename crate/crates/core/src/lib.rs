//! Prediction-based data transmission for body-sensor telemetry.
//!
//! A wireless body sensor and its base station run identical PID-form
//! predictors over the recorded stream. The sensor transmits a sample only
//! when its prediction misses by more than the error budget ε; the station
//! reconstructs suppressed samples from its own predictor. The recorded
//! stream therefore never deviates from the sampled one by more than ε, while
//! transmission count — the dominant energy cost — drops to a fraction of the
//! sample count.
//!
//! The crate provides:
//!
//! - [`predictor`]: the PID-form prediction function, its PAST / AVERAGE /
//!   LINEAR special cases, and the fixed-depth history window;
//! - [`protocol`]: the sensor and base-station state machines with the
//!   lossless channel contract between them;
//! - [`metrics`]: energy ratio, RMSE variants, and bound accounting;
//! - [`traces`]: trace file I/O, dataset manifests, and deterministic
//!   synthetic generators;
//! - [`simulator`]: single runs, scheme comparisons, and ε sweeps, with
//!   deterministic parallel batch execution.
//!
//! ## Example
//!
//! ```
//! use dualpred::{Scheme, SimConfig, gen_sine, run};
//!
//! let trace = gen_sine(10.0, 60.0, 5000).unwrap();
//! let out = run(&trace, &SimConfig::new(0.5, Scheme::Past)).unwrap();
//!
//! // The recorded stream never strays more than eps from the samples,
//! // and far fewer than 5000 samples were transmitted.
//! assert_eq!(out.report.violations, 0);
//! assert!(out.report.max_abs_data_error <= 0.5);
//! assert!(out.report.energy_ratio < 1.0);
//! ```

pub mod error;
pub mod metrics;
pub mod predictor;
pub mod protocol;
pub mod simulator;
pub mod traces;

pub use error::Error;
pub use metrics::{
    RunReport, energy_ratio, report_to_json, reports_to_csv, reports_to_json, rmse, summarize,
};
pub use predictor::{DEFAULT_PID_GAINS, GainSet, HistoryWindow, Scheme, predict};
pub use protocol::{
    BaseRecord, BaseStation, Channel, LosslessChannel, SensorNode, StepRecord, Transmission,
    run_pair,
};
pub use simulator::{
    ComparisonTable, DEFAULT_M, RunOutput, SimConfig, compare, ledger_to_csv, run, sweep,
};
pub use traces::{
    DatasetManifest, DatasetSpec, MGH_DATASETS, ManifestEntry, Trace, gen_constant, gen_ramp,
    gen_random_walk, gen_sine, load_manifest, load_trace, save_trace,
};
