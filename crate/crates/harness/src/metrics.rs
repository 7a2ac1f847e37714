//! Summary statistics of a run log.

use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::sim::Record;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub observer: f64,
    pub ulm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            observer: 1e-6,
            ulm: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub cutoff: f64,
    pub samples_after_cutoff: usize,
    pub max_abs_e: f64,
    pub rms_e: f64,
    pub max_abs_e_o: f64,
    pub max_abs_e_f: f64,
    pub first_e_o_below: Option<usize>,
    pub first_e_f_below: Option<usize>,
    pub u_rms: f64,
}

fn rms(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v * v, n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).sqrt()
    }
}

fn max_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m, v| m.max(v.abs()))
}

/// Tracking and estimation figures over `t ≥ cutoff` (seconds); observer
/// error and control effort are taken over the whole log.
pub fn compute_metrics(log: &[Record], cutoff: f64, tol: &Tolerances) -> Result<Summary> {
    let last = log.last().ok_or(HarnessError::EmptyLog)?.t;
    if cutoff > last {
        return Err(HarnessError::CutoffBeyondHorizon { cutoff, last });
    }
    let tail = || log.iter().filter(|r| r.t >= cutoff);
    Ok(Summary {
        cutoff,
        samples_after_cutoff: tail().count(),
        max_abs_e: max_abs(tail().map(|r| r.e)),
        rms_e: rms(tail().map(|r| r.e)),
        max_abs_e_o: max_abs(log.iter().map(|r| r.e_o)),
        max_abs_e_f: max_abs(tail().map(|r| r.e_f)),
        first_e_o_below: log.iter().position(|r| r.e_o.abs() < tol.observer),
        first_e_f_below: log.iter().position(|r| r.e_f.abs() < tol.ulm),
        u_rms: rms(log.iter().map(|r| r.u)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: f64, e: f64) -> Record {
        Record {
            t,
            e,
            ..Record::default()
        }
    }

    #[test]
    fn zero_log_gives_zero_metrics() {
        let log: Vec<Record> = (0..10).map(|k| rec(k as f64, 0.0)).collect();
        let m = compute_metrics(&log, 2.0, &Tolerances::default()).unwrap();
        assert_eq!(m.max_abs_e, 0.0);
        assert_eq!(m.rms_e, 0.0);
        assert_eq!(m.u_rms, 0.0);
        assert_eq!(m.first_e_o_below, Some(0));
        assert_eq!(m.samples_after_cutoff, 8);
    }

    #[test]
    fn cutoff_applies_to_tracking_error() {
        let log = vec![rec(0.0, 5.0), rec(1.0, -0.5), rec(2.0, 0.25)];
        let m = compute_metrics(&log, 1.0, &Tolerances::default()).unwrap();
        assert_eq!(m.max_abs_e, 0.5);
        assert!((m.rms_e - ((0.25 + 0.0625) / 2f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(compute_metrics(&[], 0.0, &Tolerances::default()), Err(HarnessError::EmptyLog)));
        let log = vec![rec(0.0, 0.0), rec(1.0, 0.0)];
        assert!(matches!(
            compute_metrics(&log, 20.0, &Tolerances::default()),
            Err(HarnessError::CutoffBeyondHorizon { .. })
        ));
    }
}
