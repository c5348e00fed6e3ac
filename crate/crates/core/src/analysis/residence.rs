//! Residence-time statistics and the stochastic-resonance matching frequency.

use serde::{Deserialize, Serialize};

use super::transitions::{DwellRecord, Label};
use crate::error::{Error, Result};

/// Minimum number of dwells for a meaningful exponential fit.
pub const MIN_SEGMENTS: usize = 20;

/// Stephens' 5% critical value for the modified KS statistic of an
/// exponential law with estimated scale.
const KS_EXP_CRITICAL_5: f64 = 1.094;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Binning {
    FreedmanDiaconis,
    Width(f64),
    Count(usize),
}

impl Default for Binning {
    fn default() -> Self {
        Binning::FreedmanDiaconis
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn build(samples: &[f64], binning: Binning) -> Self {
        let max = samples.iter().copied().fold(0.0, f64::max);
        let width = match binning {
            Binning::Width(w) => w,
            Binning::Count(n) => max / n.max(1) as f64,
            Binning::FreedmanDiaconis => {
                let mut s = samples.to_vec();
                s.sort_by(f64::total_cmp);
                let iqr = quantile(&s, 0.75) - quantile(&s, 0.25);
                2.0 * iqr / (s.len() as f64).cbrt()
            }
        };
        let width = if width > 0.0 && width.is_finite() {
            width
        } else {
            max.max(1.0)
        };
        let bins = ((max / width).floor() as usize + 1).min(1 << 20);
        let edges = (0..=bins).map(|i| i as f64 * width).collect();
        let mut counts = vec![0; bins];
        for &x in samples {
            let i = ((x / width).floor() as usize).min(bins - 1);
            counts[i] += 1;
        }
        Self { edges, counts }
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Linear-interpolated quantile of sorted data.
pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialFit {
    /// Scale `a` of the density `(1/a) exp(-tau/a)`.
    pub scale: f64,
    pub rate: f64,
    /// Kolmogorov–Smirnov distance to the fitted law.
    pub ks_statistic: f64,
    /// Stephens-modified statistic, compared against the 5% critical value.
    pub ks_modified: f64,
    pub ks_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidenceStats {
    pub label: Label,
    pub durations: Vec<f64>,
    pub histogram: Histogram,
    pub tau_bar: f64,
    pub stderr: f64,
    pub fit: ExponentialFit,
}

pub fn residence_stats(d: &DwellRecord, label: Label, binning: Binning) -> Result<ResidenceStats> {
    stats_from_durations(d.durations(label), label, binning)
}

pub fn stats_from_durations(durations: Vec<f64>, label: Label, binning: Binning) -> Result<ResidenceStats> {
    let n = durations.len();
    if n < MIN_SEGMENTS {
        return Err(Error::TooFewSegments {
            label: label.as_str(),
            count: n,
            needed: MIN_SEGMENTS,
        });
    }
    let tau_bar = durations.iter().sum::<f64>() / n as f64;
    let var = durations.iter().map(|x| (x - tau_bar).powi(2)).sum::<f64>() / (n - 1) as f64;
    let fit = exponential_fit(&durations, tau_bar);
    Ok(ResidenceStats {
        label,
        histogram: Histogram::build(&durations, binning),
        durations,
        tau_bar,
        stderr: (var / n as f64).sqrt(),
        fit,
    })
}

fn exponential_fit(samples: &[f64], scale: f64) -> ExponentialFit {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let ks = s
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = 1.0 - (-x / scale).exp();
            let above = (i + 1) as f64 / n - cdf;
            let below = cdf - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    let modified = (ks - 0.2 / n) * (n.sqrt() + 0.26 + 0.5 / n.sqrt());
    ExponentialFit {
        scale,
        rate: 1.0 / scale,
        ks_statistic: ks,
        ks_modified: modified,
        ks_pass: modified < KS_EXP_CRITICAL_5,
    }
}

/// Signal frequency (angular, like the detuning) whose half period equals the
/// mean residence time.
pub fn optimal_frequency(tau_bar: f64) -> f64 {
    std::f64::consts::PI / tau_bar
}
