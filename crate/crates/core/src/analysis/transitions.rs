//! Two-threshold hysteresis detection of interwell switching.

use serde::{Deserialize, Serialize};

use super::peaks::{local_maxima, prominence, smooth3, PROMINENCE_FRACTION};
use crate::error::{Error, Result};
use crate::model::{steady_states, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "L")]
    Low,
    #[serde(rename = "H")]
    High,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Low => "L",
            Label::High => "H",
        }
    }

    fn other(self) -> Self {
        match self {
            Label::Low => Label::High,
            Label::High => Label::Low,
        }
    }
}

/// Hysteresis pair: `L -> H` once `x >= low_to_high`, `H -> L` once `x <= high_to_low`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub low_to_high: f64,
    pub high_to_low: f64,
}

impl Thresholds {
    pub fn new(low_to_high: f64, high_to_low: f64) -> Result<Self> {
        if !(high_to_low < low_to_high) {
            return Err(Error::Domain(format!(
                "hysteresis needs high_to_low < low_to_high, got {high_to_low} >= {low_to_high}"
            )));
        }
        Ok(Self {
            low_to_high,
            high_to_low,
        })
    }

    /// Symmetric pair around `center` at `+-fraction * separation`.
    pub fn around(center: f64, separation: f64, fraction: f64) -> Result<Self> {
        let half = fraction * separation.abs();
        Self::new(center + half, center - half)
    }

    /// Pair around the midpoint of the two histogram modes of `values`, at
    /// `+- 0.25` of their separation.
    pub fn from_bimodal(values: &[f64], bins: usize) -> Result<Self> {
        let (low, high) = bimodal_modes(values, bins)
            .ok_or_else(|| Error::Domain("series is not bimodal".into()))?;
        Self::around(0.5 * (low + high), high - low, 0.25)
    }

    /// Default pair for the semiclassical amplitude: the unstable root
    /// `+- 0.25 (alpha_H - alpha_L)`.
    pub fn for_params(p: &SystemParams) -> Result<Self> {
        let roots = steady_states(p, p.e1)?;
        if roots.len() != 3 {
            return Err(Error::NotBistable { e1: p.e1 });
        }
        Self::around(roots[1].alpha, roots[2].alpha - roots[0].alpha, 0.25)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub label: Label,
    pub start: f64,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DwellRecord {
    /// Complete dwells, alternating in label; censored leading and trailing
    /// dwells are dropped.
    pub segments: Vec<Segment>,
    pub thresholds: Thresholds,
    /// Every detected switch as `(time, label entered)`.
    pub switches: Vec<(f64, Label)>,
}

impl DwellRecord {
    pub fn durations(&self, label: Label) -> Vec<f64> {
        self.segments
            .iter()
            .filter(|s| s.label == label)
            .map(|s| s.duration)
            .collect()
    }

    pub fn switch_times(&self) -> Vec<f64> {
        self.switches.iter().map(|&(t, _)| t).collect()
    }

    /// Binary telegraph version of the series: 1 in `H`, 0 in `L`, holding
    /// the initial resolved label before the first switch.
    pub fn telegraph(&self, times: &[f64], initial: Label) -> Vec<f64> {
        let mut out = Vec::with_capacity(times.len());
        let mut label = initial;
        let mut next = self.switches.iter().peekable();
        for &t in times {
            while let Some(&&(ts, l)) = next.peek() {
                if ts <= t {
                    label = l;
                    next.next();
                } else {
                    break;
                }
            }
            out.push(if label == Label::High { 1.0 } else { 0.0 });
        }
        out
    }
}

pub fn detect_transitions(times: &[f64], values: &[f64], thresholds: Thresholds) -> Result<DwellRecord> {
    if times.len() != values.len() {
        return Err(Error::Domain(format!(
            "time and value series differ in length ({} vs {})",
            times.len(),
            values.len()
        )));
    }
    if times.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: times.len(),
        });
    }
    Thresholds::new(thresholds.low_to_high, thresholds.high_to_low)?;

    let mut state: Option<Label> = None;
    let mut entered: Option<f64> = None;
    let mut segments = Vec::new();
    let mut switches = Vec::new();
    for (&t, &x) in times.iter().zip(values) {
        let next = match state {
            None if x >= thresholds.low_to_high => Some(Label::High),
            None if x <= thresholds.high_to_low => Some(Label::Low),
            Some(Label::Low) if x >= thresholds.low_to_high => Some(Label::High),
            Some(Label::High) if x <= thresholds.high_to_low => Some(Label::Low),
            _ => None,
        };
        let Some(next) = next else { continue };
        if let Some(current) = state {
            debug_assert_eq!(next, current.other());
            if let Some(start) = entered {
                segments.push(Segment {
                    label: current,
                    start,
                    duration: t - start,
                });
            }
            switches.push((t, next));
            entered = Some(t);
        }
        state = Some(next);
    }
    Ok(DwellRecord {
        segments,
        thresholds,
        switches,
    })
}

/// Label resolved at the first sample that crosses either threshold.
pub fn initial_label(values: &[f64], thresholds: Thresholds) -> Option<Label> {
    values.iter().find_map(|&x| {
        if x >= thresholds.low_to_high {
            Some(Label::High)
        } else if x <= thresholds.high_to_low {
            Some(Label::Low)
        } else {
            None
        }
    })
}

/// How well the switches of two records line up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coincidence {
    pub window: f64,
    /// Switches of the first record with a same-direction switch of the
    /// second within `window`, and the other way round.
    pub matched_first: usize,
    pub matched_second: usize,
    pub total_first: usize,
    pub total_second: usize,
    /// Largest offset among the matched pairs.
    pub max_lag: f64,
}

impl Coincidence {
    pub fn all_matched(&self) -> bool {
        self.matched_first == self.total_first && self.matched_second == self.total_second
    }
}

fn nearest_same_direction(t: f64, label: Label, other: &[(f64, Label)]) -> Option<f64> {
    let i = other.partition_point(|&(s, _)| s < t);
    let forward = other[i..].iter().find(|&&(_, l)| l == label);
    let backward = other[..i].iter().rev().find(|&&(_, l)| l == label);
    [forward, backward]
        .into_iter()
        .flatten()
        .map(|&(s, _)| (s - t).abs())
        .min_by(f64::total_cmp)
}

/// Pairs every switch with the nearest switch of the other record entering
/// the same label.
pub fn coincidence(first: &DwellRecord, second: &DwellRecord, window: f64) -> Coincidence {
    let mut max_lag: f64 = 0.0;
    let mut count = |a: &[(f64, Label)], b: &[(f64, Label)]| {
        a.iter()
            .filter(|&&(t, l)| match nearest_same_direction(t, l, b) {
                Some(lag) if lag <= window => {
                    max_lag = max_lag.max(lag);
                    true
                }
                _ => false,
            })
            .count()
    };
    let matched_first = count(&first.switches, &second.switches);
    let matched_second = count(&second.switches, &first.switches);
    Coincidence {
        window,
        matched_first,
        matched_second,
        total_first: first.switches.len(),
        total_second: second.switches.len(),
        max_lag,
    }
}

/// Centers of the two most prominent modes of `values`, in ascending order,
/// from a histogram with `bins` bins smoothed over three bins.
pub fn bimodal_modes(values: &[f64], bins: usize) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if !(hi > lo) || bins < 3 {
        return None;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0.0; bins];
    for &x in values {
        counts[(((x - lo) / width) as usize).min(bins - 1)] += 1.0;
    }
    let y = smooth3(&counts);
    let top = y.iter().copied().fold(0.0, f64::max);
    let mut peaks: Vec<(f64, usize)> = local_maxima(&y)
        .map(|i| (prominence(&y, i), i))
        .filter(|&(p, _)| p >= PROMINENCE_FRACTION * top)
        .collect();
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
    let [(_, i), (_, j)] = peaks.get(..2)? else { return None };
    let center = |k: usize| lo + (k as f64 + 0.5) * width;
    Some((center(*i.min(j)), center(*i.max(j))))
}
