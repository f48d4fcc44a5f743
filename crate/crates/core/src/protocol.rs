//! The dual-prediction transmission protocol.
//!
//! A sensor and a base station run identical predictors over the same record
//! history. The sensor transmits a sample only when its prediction misses by
//! more than the error budget ε; the station reconstructs suppressed samples
//! from its own predictor. Because both sides append the same recorded value
//! `y_k` each step, their histories never diverge and the recorded stream is
//! guaranteed to stay within ε of the sampled one.

use crate::error::{Error, Result};
use crate::predictor::{GainSet, HistoryWindow, predict};

/// A sample the sensor decided to deliver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmission {
    pub k: u64,
    pub value: f64,
}

/// Per-step ledger entry as seen by the sensor.
///
/// `prediction` and `prediction_error` are absent during bootstrap, while the
/// window is still filling and no prediction exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub k: u64,
    /// Sampled value x_k.
    pub sample: f64,
    pub prediction: Option<f64>,
    pub transmitted: bool,
    /// Recorded value y_k: the sample when transmitted, the prediction otherwise.
    pub record: f64,
    /// Prediction error e_k = x_k - prediction.
    pub prediction_error: Option<f64>,
    /// Data error: x_k minus the recorded value; zero at transmitted steps.
    pub data_error: f64,
}

/// Sensor-side state machine.
#[derive(Debug, Clone)]
pub struct SensorNode {
    gains: GainSet,
    window: HistoryWindow,
    eps: f64,
    step_count: u64,
    tx_count: u64,
}

impl SensorNode {
    pub fn new(gains: GainSet, m: usize, eps: f64) -> Result<Self> {
        gains.validate()?;
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::Validation(format!(
                "eps must be finite and non-negative, got {eps}"
            )));
        }
        Ok(Self {
            gains,
            window: HistoryWindow::new(m)?,
            eps,
            step_count: 0,
            tx_count: 0,
        })
    }

    pub fn gains(&self) -> GainSet {
        self.gains
    }

    pub fn capacity(&self) -> usize {
        self.window.capacity()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Samples processed so far (k).
    pub fn steps(&self) -> u64 {
        self.step_count
    }

    /// Samples transmitted so far (N).
    pub fn transmissions(&self) -> u64 {
        self.tx_count
    }

    /// Process one sample: predict, decide whether to transmit, record.
    ///
    /// During bootstrap (window not yet full) every sample is transmitted
    /// unconditionally. Afterwards a sample is transmitted iff the absolute
    /// prediction error exceeds ε; ties are suppressed. A non-finite sample is
    /// rejected and the state left unchanged.
    pub fn step(&mut self, sample: f64) -> Result<(StepRecord, Option<Transmission>)> {
        if !sample.is_finite() {
            return Err(Error::Validation(format!(
                "sample must be finite, got {sample}"
            )));
        }
        let k = self.step_count;
        let (prediction, prediction_error, transmitted) = if self.window.is_full() {
            let p = predict(&self.gains, &self.window)?;
            let e = sample - p;
            (Some(p), Some(e), e.abs() > self.eps)
        } else {
            (None, None, true)
        };
        let record = if transmitted {
            sample
        } else {
            // A suppressed prediction sits within ε of the finite sample, so
            // it is finite and the push below cannot fail.
            prediction.expect("suppression only happens after a prediction")
        };
        self.window.push(record)?;
        self.step_count += 1;
        let tx = if transmitted {
            self.tx_count += 1;
            Some(Transmission { k, value: sample })
        } else {
            None
        };
        Ok((
            StepRecord {
                k,
                sample,
                prediction,
                transmitted,
                record,
                prediction_error,
                data_error: sample - record,
            },
            tx,
        ))
    }
}

/// What the base station recorded for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseRecord {
    pub k: u64,
    pub record: f64,
    pub transmitted: bool,
}

/// Base-station-side state machine; mirrors the sensor's predictor.
#[derive(Debug, Clone)]
pub struct BaseStation {
    gains: GainSet,
    window: HistoryWindow,
    step_count: u64,
}

impl BaseStation {
    pub fn new(gains: GainSet, m: usize) -> Result<Self> {
        gains.validate()?;
        Ok(Self {
            gains,
            window: HistoryWindow::new(m)?,
            step_count: 0,
        })
    }

    pub fn gains(&self) -> GainSet {
        self.gains
    }

    pub fn capacity(&self) -> usize {
        self.window.capacity()
    }

    pub fn steps(&self) -> u64 {
        self.step_count
    }

    /// Record one step: the received value when a transmission arrived, the
    /// local prediction otherwise.
    ///
    /// Steps must arrive in strict k order. A missing message while the window
    /// is still filling means the channel dropped a bootstrap packet, which the
    /// protocol's lossless-channel assumption rules out; both are protocol
    /// violations.
    pub fn step(&mut self, msg: Option<&Transmission>) -> Result<BaseRecord> {
        let k = self.step_count;
        let record = match msg {
            Some(tx) => {
                if tx.k != k {
                    return Err(Error::Protocol(format!(
                        "out-of-order transmission: expected step {k}, got {}",
                        tx.k
                    )));
                }
                if !tx.value.is_finite() {
                    return Err(Error::Protocol(format!(
                        "transmission at step {k} carries non-finite value {}",
                        tx.value
                    )));
                }
                tx.value
            }
            None => {
                if !self.window.is_full() {
                    return Err(Error::Protocol(format!(
                        "no transmission at bootstrap step {k}; the channel must be lossless"
                    )));
                }
                predict(&self.gains, &self.window)?
            }
        };
        self.window.push(record)?;
        self.step_count += 1;
        Ok(BaseRecord {
            k,
            record,
            transmitted: msg.is_some(),
        })
    }
}

/// Conduit carrying transmissions from sensor to station.
///
/// The shipped implementation is lossless, ordered, and instantaneous, which
/// is what the protocol's guarantee assumes; loss and latency models would
/// slot in behind this trait.
pub trait Channel {
    fn convey(&mut self, tx: Option<Transmission>) -> Option<Transmission>;
}

/// In-process channel that delivers every transmission unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct LosslessChannel;

impl Channel for LosslessChannel {
    fn convey(&mut self, tx: Option<Transmission>) -> Option<Transmission> {
        tx
    }
}

/// Drive a paired sensor and base station over a sample sequence.
///
/// Conveys each optional transmission over a lossless channel and checks after
/// every step that both sides recorded the same value bit for bit. A mismatch
/// is an implementation bug, never a data condition, and aborts the run.
pub fn run_pair(
    sensor: &mut SensorNode,
    station: &mut BaseStation,
    samples: &[f64],
) -> Result<Vec<StepRecord>> {
    if sensor.gains() != station.gains() || sensor.capacity() != station.capacity() {
        return Err(Error::Validation(
            "sensor and station must share gains and window capacity".into(),
        ));
    }
    if sensor.steps() != station.steps() {
        return Err(Error::Validation(
            "sensor and station must start at the same step".into(),
        ));
    }
    let mut channel = LosslessChannel;
    let mut ledger = Vec::with_capacity(samples.len());
    for &sample in samples {
        let (entry, tx) = sensor.step(sample)?;
        let mirrored = station.step(channel.convey(tx).as_ref())?;
        if entry.record.to_bits() != mirrored.record.to_bits() {
            return Err(Error::Synchrony {
                k: entry.k,
                sensor: entry.record,
                station: mirrored.record,
            });
        }
        ledger.push(entry);
    }
    Ok(ledger)
}
