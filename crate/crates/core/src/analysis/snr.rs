//! Signal-to-noise ratio of a periodic response read off the periodogram.

use rustfft::{num_complex::Complex64, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bins on each side of the signal bin used for the background estimate.
pub const BACKGROUND_BINS: usize = 20;
/// Bins next to the signal bin excluded from the background.
pub const GUARD_BINS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrResult {
    /// Angular signal frequency.
    pub delta: f64,
    pub signal_power: f64,
    pub background_power: f64,
    pub snr_db: f64,
}

/// One-sided periodogram of the mean-subtracted series, indexed by bin
/// `k` at frequency `k / (n dt)` cycles per unit time.
pub fn periodogram(series: &[f64], dt: f64, window: Window) -> Vec<f64> {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let w = |i: usize| match window {
        Window::Rectangular => 1.0,
        Window::Hann => {
            let x = std::f64::consts::PI * i as f64 / n as f64;
            2.0 * x.sin().powi(2)
        }
    };
    let mut buf: Vec<Complex64> = series
        .iter()
        .enumerate()
        .map(|(i, &x)| Complex64::new((x - mean) * w(i), 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let norm = dt / n as f64;
    buf[..n / 2 + 1].iter().map(|c| c.norm_sqr() * norm).collect()
}

/// SNR in dB of the periodogram bin containing `delta / 2 pi` against the
/// median of its neighbors.
pub fn snr_db(series: &[f64], dt: f64, delta: f64, window: Window) -> Result<SnrResult> {
    let n = series.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let duration = n as f64 * dt;
    let bin_width = 2.0 * std::f64::consts::PI / duration;
    if !(delta > 0.0) || bin_width > delta / 10.0 {
        return Err(Error::Unresolvable { delta, bin_width });
    }
    let spec = periodogram(series, dt, window);
    let k = (delta / bin_width).round() as usize;
    let reach = GUARD_BINS + BACKGROUND_BINS;
    if k + reach >= spec.len() {
        return Err(Error::Domain(format!(
            "signal bin {k} too close to the Nyquist bin {}",
            spec.len() - 1
        )));
    }
    let mut neighbors: Vec<f64> = (GUARD_BINS + 1..=reach)
        .flat_map(|o| [k.checked_sub(o), Some(k + o)])
        .flatten()
        .filter(|&j| j > 0)
        .map(|j| spec[j])
        .collect();
    neighbors.sort_by(f64::total_cmp);
    let background = super::residence::quantile(&neighbors, 0.5);
    let signal = spec[k];
    Ok(SnrResult {
        delta,
        signal_power: signal,
        background_power: background,
        snr_db: 10.0 * (signal / background).log10(),
    })
}
