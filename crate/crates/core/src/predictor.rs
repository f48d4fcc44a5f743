//! PID-form prediction over a fixed-depth history of recorded values.
//!
//! The predictor combines three terms: the last record (proportional), the
//! mean of the last M records (integral), and the last first-difference
//! (derivative). Term evaluation order is fixed so that two predictor
//! instances fed identical inputs produce bit-identical outputs; the
//! transmission protocol depends on that.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Predictor coefficients. Dimensionless; must be finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSet {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

impl GainSet {
    pub fn new(kp: f64, ki: f64, kd: f64) -> Result<Self> {
        let gains = Self { kp, ki, kd };
        gains.validate()?;
        Ok(gains)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("kp", self.kp), ("ki", self.ki), ("kd", self.kd)] {
            if !v.is_finite() {
                return Err(Error::Validation(format!(
                    "gain {name} must be finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// The gains the reference evaluation uses for the general PID scheme.
pub const DEFAULT_PID_GAINS: GainSet = GainSet {
    kp: 0.6,
    ki: 0.4,
    kd: 0.3,
};

/// The last `capacity` recorded values, oldest first.
///
/// Capacity is the prediction depth M and must be at least 2: the derivative
/// term looks two records back.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryWindow {
    capacity: usize,
    records: VecDeque<f64>,
}

impl HistoryWindow {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity < 2 {
            return Err(Error::Validation(format!(
                "window capacity must be at least 2, got {capacity}"
            )));
        }
        Ok(Self {
            capacity,
            records: VecDeque::with_capacity(capacity),
        })
    }

    /// Append `value`, evicting the oldest record once the window is full.
    pub fn push(&mut self, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::Validation(format!(
                "record must be finite, got {value}"
            )));
        }
        if self.records.len() == self.capacity {
            self.records.pop_front();
        }
        self.records.push_back(value);
        Ok(())
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.records.len() == self.capacity
    }

    /// Newest record, if any.
    pub fn newest(&self) -> Option<f64> {
        self.records.back().copied()
    }

    /// Records oldest to newest.
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().copied()
    }
}

/// PID-form prediction from a full history window.
///
/// Writing `y[-1]` for the newest record and `y[-2]` for the second newest:
///
/// ```text
/// P = kp * y[-1]
/// I = ki * (S / M)      S summed oldest to newest
/// D = kd * (y[-1] - y[-2])
/// prediction = (P + I) + D
/// ```
///
/// The summation and combination order is part of the contract; floating-point
/// addition is not associative, and the sensor and base station must agree on
/// every bit of the result.
pub fn predict(gains: &GainSet, window: &HistoryWindow) -> Result<f64> {
    if !window.is_full() {
        return Err(Error::Validation(format!(
            "prediction requires a full window, have {} of {} records",
            window.len(),
            window.capacity()
        )));
    }
    let newest = window.records[window.records.len() - 1];
    let second = window.records[window.records.len() - 2];
    let sum = window.iter().fold(0.0, |acc, y| acc + y);
    let m = window.capacity() as f64;

    let p = gains.kp * newest;
    let i = gains.ki * (sum / m);
    let d = gains.kd * (newest - second);
    Ok((p + i) + d)
}

/// A prediction scheme: one of the named presets or the general PID form
/// with explicit gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Repeat the last record; gains (1, 0, 0).
    Past,
    /// Moving average of the window; gains (0, 1, 0).
    Average,
    /// Linear extrapolation from the last two records; gains (1, 0, 1).
    Linear,
    /// General form with caller-supplied gains.
    Pid(GainSet),
}

impl Scheme {
    /// Look up a preset by name (case-insensitive). `pid` is rejected here
    /// because it needs explicit gains.
    pub fn preset(name: &str) -> Result<Scheme> {
        match name.to_ascii_lowercase().as_str() {
            "past" => Ok(Scheme::Past),
            "average" => Ok(Scheme::Average),
            "linear" => Ok(Scheme::Linear),
            "pid" => Err(Error::Validation(
                "scheme `pid` requires explicit gains kp, ki, kd".into(),
            )),
            other => Err(Error::Validation(format!("unknown scheme `{other}`"))),
        }
    }

    pub fn gains(&self) -> GainSet {
        match self {
            Scheme::Past => GainSet {
                kp: 1.0,
                ki: 0.0,
                kd: 0.0,
            },
            Scheme::Average => GainSet {
                kp: 0.0,
                ki: 1.0,
                kd: 0.0,
            },
            Scheme::Linear => GainSet {
                kp: 1.0,
                ki: 0.0,
                kd: 1.0,
            },
            Scheme::Pid(gains) => *gains,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Past => "PAST",
            Scheme::Average => "AVERAGE",
            Scheme::Linear => "LINEAR",
            Scheme::Pid(_) => "PID",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window_of(values: &[f64], capacity: usize) -> HistoryWindow {
        let mut w = HistoryWindow::new(capacity).unwrap();
        for &v in values {
            w.push(v).unwrap();
        }
        w
    }

    #[test]
    fn push_evicts_oldest_when_full() {
        let mut w = window_of(&[1.0, 2.0, 3.0], 3);
        w.push(4.0).unwrap();
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![2.0, 3.0, 4.0]);
    }

    #[test]
    fn push_into_empty_window() {
        let mut w = HistoryWindow::new(3).unwrap();
        w.push(7.0).unwrap();
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![7.0]);
        assert!(!w.is_full());
    }

    #[test]
    fn push_accepts_duplicates() {
        let mut w = window_of(&[5.0], 2);
        w.push(5.0).unwrap();
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![5.0, 5.0]);
        assert!(w.is_full());
    }

    #[test]
    fn push_rejects_non_finite() {
        let mut w = HistoryWindow::new(3).unwrap();
        assert!(matches!(w.push(f64::NAN), Err(Error::Validation(_))));
        assert!(matches!(w.push(f64::INFINITY), Err(Error::Validation(_))));
        assert!(w.is_empty());
    }

    #[test]
    fn capacity_below_two_rejected() {
        assert!(HistoryWindow::new(1).is_err());
        assert!(HistoryWindow::new(0).is_err());
    }

    #[test]
    fn predict_past_returns_newest() {
        let w = window_of(&[1.0, 2.0, 3.0], 3);
        let p = predict(&Scheme::Past.gains(), &w).unwrap();
        assert_eq!(p, 3.0);
    }

    #[test]
    fn predict_average_returns_window_mean() {
        let w = window_of(&[1.0, 2.0, 3.0], 3);
        let p = predict(&Scheme::Average.gains(), &w).unwrap();
        assert_eq!(p, 2.0);
    }

    #[test]
    fn predict_linear_extrapolates() {
        let w = window_of(&[1.0, 2.0, 3.0], 3);
        let p = predict(&Scheme::Linear.gains(), &w).unwrap();
        assert_eq!(p, 4.0);
    }

    #[test]
    fn predict_pid_hand_evaluation() {
        // 0.6*3 + 0.4*(6/3) + 0.3*(3-2) = 2.9, allowing the final rounding
        let gains = GainSet::new(0.6, 0.4, 0.3).unwrap();
        let w = window_of(&[1.0, 2.0, 3.0], 3);
        let p = predict(&gains, &w).unwrap();
        let ulps = (p.to_bits() as i64 - 2.9f64.to_bits() as i64).unsigned_abs();
        assert!(ulps <= 1, "expected 2.9 within 1 ulp, got {p}");
    }

    #[test]
    fn predict_requires_full_window() {
        let w = window_of(&[1.0, 2.0], 3);
        assert!(matches!(
            predict(&Scheme::Past.gains(), &w),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn preset_gains_match_names() {
        assert_eq!(
            Scheme::preset("past").unwrap().gains(),
            GainSet::new(1.0, 0.0, 0.0).unwrap()
        );
        assert_eq!(
            Scheme::preset("average").unwrap().gains(),
            GainSet::new(0.0, 1.0, 0.0).unwrap()
        );
        assert_eq!(
            Scheme::preset("linear").unwrap().gains(),
            GainSet::new(1.0, 0.0, 1.0).unwrap()
        );
    }

    #[test]
    fn preset_rejects_pid_and_unknown_names() {
        assert!(Scheme::preset("pid").is_err());
        assert!(Scheme::preset("kalman").is_err());
    }

    #[test]
    fn gains_must_be_finite() {
        assert!(GainSet::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(GainSet::new(0.0, f64::NEG_INFINITY, 0.0).is_err());
    }

    #[test]
    fn constant_window_is_a_fixpoint_for_friendly_values() {
        // With these constants every intermediate rounds exactly, so all four
        // schemes reproduce c bit for bit.
        for c in [5.0, 1.0, 2.5, -3.0, 100.0] {
            let w = window_of(&[c, c, c], 3);
            for scheme in [
                Scheme::Past,
                Scheme::Average,
                Scheme::Linear,
                Scheme::Pid(DEFAULT_PID_GAINS),
            ] {
                let p = predict(&scheme.gains(), &w).unwrap();
                assert_eq!(p, c, "{} on constant {c}", scheme.name());
            }
        }
    }
}
