//! Peak structure of residence-time histograms under periodic forcing.
//!
//! Synchronized switching concentrates dwell times near odd multiples of
//! half the signal period, `(2n + 1) T / 2`.

use serde::{Deserialize, Serialize};

use super::residence::{Binning, Histogram, ResidenceStats};

/// Bins per signal period used for peak finding.
pub const BINS_PER_PERIOD: f64 = 10.0;
/// Peaks below this fraction of the tallest smoothed bin are ignored.
pub const PROMINENCE_FRACTION: f64 = 0.05;
/// Matching tolerance as a fraction of the half period.
pub const MATCH_TOLERANCE: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResiduePeak {
    pub location: f64,
    pub height: f64,
    pub prominence: f64,
    /// `n` of the matched `(2n + 1) T / 2`, if within tolerance.
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakStructure {
    pub signal_period: f64,
    pub histogram: Histogram,
    pub peaks: Vec<ResiduePeak>,
    /// Fraction of detected peaks that match some odd half period.
    pub matched_fraction: f64,
    /// Fraction of all dwells with duration in `[T/4, 3T/4]`.
    pub first_peak_mass: f64,
}

impl PeakStructure {
    pub fn matched(&self) -> impl Iterator<Item = &ResiduePeak> {
        self.peaks.iter().filter(|p| p.order.is_some())
    }
}

pub(crate) fn smooth3(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(x.len() - 1);
            x[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// Topographic prominence of the local maximum at `i`.
pub(crate) fn prominence(y: &[f64], i: usize) -> f64 {
    let h = y[i];
    // Past either end the histogram is empty.
    let mut left_min = if i == 0 { 0.0 } else { h };
    for j in (0..i).rev() {
        if y[j] > h {
            break;
        }
        left_min = left_min.min(y[j]);
    }
    let mut right_min = if i + 1 == y.len() { 0.0 } else { h };
    for &v in &y[i + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

pub(crate) fn local_maxima(y: &[f64]) -> impl Iterator<Item = usize> + '_ {
    (0..y.len()).filter(|&i| {
        let left_ok = i == 0 || y[i] > y[i - 1];
        let right_ok = i + 1 == y.len() || y[i] >= y[i + 1];
        left_ok && right_ok && y[i] > 0.0
    })
}

pub fn residence_peak_structure(stats: &ResidenceStats, signal_period: f64) -> PeakStructure {
    let hist = Histogram::build(&stats.durations, Binning::Width(signal_period / BINS_PER_PERIOD));
    let raw: Vec<f64> = hist.counts.iter().map(|&c| c as f64).collect();
    let y = smooth3(&raw);
    let centers = hist.centers();
    let top = y.iter().copied().fold(0.0, f64::max);
    let half = 0.5 * signal_period;

    let mut peaks = Vec::new();
    for i in local_maxima(&y) {
        let prom = prominence(&y, i);
        if prom < PROMINENCE_FRACTION * top {
            continue;
        }
        let loc = centers[i];
        let n = ((loc / half - 1.0) / 2.0).round().max(0.0);
        let target = (2.0 * n + 1.0) * half;
        let order = ((loc - target).abs() <= MATCH_TOLERANCE * half).then_some(n as usize);
        peaks.push(ResiduePeak {
            location: loc,
            height: y[i],
            prominence: prom,
            order,
        });
    }
    let matched = peaks.iter().filter(|p| p.order.is_some()).count();
    let in_first = stats
        .durations
        .iter()
        .filter(|&&d| d >= 0.5 * half && d <= 1.5 * half)
        .count();
    PeakStructure {
        signal_period,
        histogram: hist,
        matched_fraction: if peaks.is_empty() {
            0.0
        } else {
            matched as f64 / peaks.len() as f64
        },
        first_peak_mass: in_first as f64 / stats.durations.len().max(1) as f64,
        peaks,
    }
}
