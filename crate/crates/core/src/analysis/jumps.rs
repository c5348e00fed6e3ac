//! Switching of a conditioned quantum record seen through the field and the
//! atom at once.

use serde::{Deserialize, Serialize};

use super::transitions::{coincidence, detect_transitions, Coincidence, DwellRecord, Thresholds};
use crate::error::Result;

/// Histogram resolution used to locate the two modes of each series.
pub const MODE_BINS: usize = 60;
/// Largest shift, in samples, searched for the field-to-atom response lag.
pub const MAX_LAG_SAMPLES: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpAnalysis {
    /// Switching of `Re <a>`.
    pub field: DwellRecord,
    /// Switching of `<sigma_z>`.
    pub atom: DwellRecord,
    pub coincidence: Coincidence,
    /// Shift of the atomic record behind the field record that maximizes
    /// their correlation, in time units (negative if the atom leads).
    pub lag: f64,
    /// Correlation coefficient at that shift.
    pub lag_correlation: f64,
}

impl JumpAnalysis {
    /// Dwell durations of the field in both states together.
    pub fn durations(&self) -> Vec<f64> {
        self.field.segments.iter().map(|s| s.duration).collect()
    }
}

/// Detects switching on both series with thresholds taken from their own
/// histograms, and pairs the switches within `window`.
pub fn quantum_jumps(times: &[f64], field: &[f64], atom: &[f64], window: f64) -> Result<JumpAnalysis> {
    let (shift, lag_correlation) = response_lag(field, atom, MAX_LAG_SAMPLES);
    let interval = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
    let field = detect_transitions(times, field, Thresholds::from_bimodal(field, MODE_BINS)?)?;
    let atom = detect_transitions(times, atom, Thresholds::from_bimodal(atom, MODE_BINS)?)?;
    let coincidence = coincidence(&field, &atom, window);
    Ok(JumpAnalysis {
        field,
        atom,
        coincidence,
        lag: shift as f64 * interval,
        lag_correlation,
    })
}

/// Shift `k` (|k| <= `max_lag`) maximizing the correlation of `x[t]` with
/// `y[t + k]`, and that correlation.
pub fn response_lag(x: &[f64], y: &[f64], max_lag: usize) -> (isize, f64) {
    let n = x.len().min(y.len());
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(&x[..n]), mean(&y[..n]));
    let xc: Vec<f64> = x[..n].iter().map(|v| v - mx).collect();
    let yc: Vec<f64> = y[..n].iter().map(|v| v - my).collect();
    let norm = (xc.iter().map(|v| v * v).sum::<f64>() * yc.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let max_lag = max_lag.min(n.saturating_sub(1)) as isize;
    let mut best = (0, f64::NEG_INFINITY);
    for k in -max_lag..=max_lag {
        let (xs, ys) = if k >= 0 {
            (&xc[..n - k as usize], &yc[k as usize..])
        } else {
            (&xc[(-k) as usize..], &yc[..n - (-k) as usize])
        };
        let c = xs.iter().zip(ys).map(|(a, b)| a * b).sum::<f64>() / norm;
        if c > best.1 {
            best = (k, c);
        }
    }
    best
}
