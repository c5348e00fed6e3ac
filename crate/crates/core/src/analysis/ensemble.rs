//! Ensemble scans over noise strength: Kramers scaling of the mean
//! residence time and the SNR resonance curve.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::snr::{snr_db, Window};
use super::transitions::{detect_transitions, initial_label, DwellRecord, Label, Thresholds};
use crate::error::{Error, Result};
use crate::model::{steady_states, SystemParams};
use crate::semiclassical::{integrate, SdeConfig, SemiclassicalState, Trajectory};

/// Minimum switches for a noise strength to enter the Kramers fit.
pub const MIN_TRANSITIONS: usize = 20;

/// Low-amplitude stable root, the default initial condition.
pub fn low_branch_state(p: &SystemParams) -> Result<SemiclassicalState> {
    let roots = steady_states(p, p.e1)?;
    Ok(roots[0].as_state())
}

/// A single noisy run from the low branch together with its dwell record.
pub fn switching_run(p: &SystemParams, cfg: &SdeConfig) -> Result<(Trajectory, DwellRecord)> {
    let thresholds = Thresholds::for_params(p)?;
    let tr = integrate(p, low_branch_state(p)?, cfg)?;
    let dwell = detect_transitions(&tr.times(), &tr.amplitude(), thresholds)?;
    Ok((tr, dwell))
}

/// Dwell records of independent runs, one per seed, in seed order.
pub fn switching_ensemble(p: &SystemParams, cfg: &SdeConfig, seeds: &[u64]) -> Result<Vec<DwellRecord>> {
    seeds
        .par_iter()
        .map(|&seed| switching_run(p, &SdeConfig { seed, ..*cfg }).map(|(_, d)| d))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KramersPoint {
    pub noise: f64,
    pub tau_bar: f64,
    pub stderr: f64,
    pub transitions: usize,
    /// Too few transitions; excluded from the fit.
    pub flagged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - my - slope * (a - mx)).powi(2))
        .sum();
    Some(LinearFit {
        intercept: my - slope * mx,
        slope,
        r_squared: if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KramersScan {
    pub points: Vec<KramersPoint>,
    /// `ln tau_bar = intercept + slope / D`; the slope is the fitted barrier.
    pub fit: Option<LinearFit>,
}

impl KramersScan {
    pub fn barrier(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }
}

/// Mean residence time (both wells pooled) per noise strength from
/// unmodulated runs.
pub fn kramers_scan(p: &SystemParams, noise: &[f64], cfg: &SdeConfig, seeds: &[u64]) -> Result<KramersScan> {
    let params = SystemParams { e2: 0.0, ..*p };
    let jobs: Vec<(usize, u64)> = (0..noise.len())
        .flat_map(|i| seeds.iter().map(move |&s| (i, s)))
        .collect();
    let records: Vec<(usize, DwellRecord)> = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let q = params.with_noise(noise[i]);
            switching_run(&q, &SdeConfig { seed, ..*cfg }).map(|(_, d)| (i, d))
        })
        .collect::<Result<_>>()?;

    let points: Vec<KramersPoint> = noise
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut durations = Vec::new();
            let mut transitions = 0;
            for (_, rec) in records.iter().filter(|(j, _)| *j == i) {
                transitions += rec.switches.len();
                durations.extend(rec.segments.iter().map(|s| s.duration));
            }
            let n = durations.len();
            let tau_bar = if n > 0 {
                durations.iter().sum::<f64>() / n as f64
            } else {
                f64::NAN
            };
            let stderr = if n > 1 {
                let var = durations.iter().map(|x| (x - tau_bar).powi(2)).sum::<f64>() / (n - 1) as f64;
                (var / n as f64).sqrt()
            } else {
                f64::NAN
            };
            KramersPoint {
                noise: d,
                tau_bar,
                stderr,
                transitions,
                flagged: transitions < MIN_TRANSITIONS || n == 0,
            }
        })
        .collect();
    let (x, y): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|p| !p.flagged)
        .map(|p| (1.0 / p.noise, p.tau_bar.ln()))
        .unzip();
    Ok(KramersScan {
        fit: linear_fit(&x, &y),
        points,
    })
}

/// Which signal of a run is fed to the periodogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrSource {
    /// Two-state output of the hysteresis detector.
    #[default]
    Telegraph,
    /// Raw `Re alpha`.
    Amplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    pub noise: f64,
    pub snr_db: f64,
    pub stderr: f64,
    /// Runs whose SNR was undefined (no switching at all).
    pub silent_runs: usize,
}

/// SNR of one modulated run at the signal detuning `p.delta`.
pub fn run_snr(p: &SystemParams, cfg: &SdeConfig, source: SnrSource, window: Window) -> Result<Option<f64>> {
    let thresholds = Thresholds::for_params(p)?;
    let tr = integrate(p, low_branch_state(p)?, cfg)?;
    let times = tr.times();
    let amplitude = tr.amplitude();
    let series = match source {
        SnrSource::Amplitude => amplitude,
        SnrSource::Telegraph => {
            let d = detect_transitions(&times, &amplitude, thresholds)?;
            if d.switches.is_empty() {
                return Ok(None);
            }
            let start = initial_label(&amplitude, thresholds).unwrap_or(Label::Low);
            d.telegraph(&times, start)
        }
    };
    let r = snr_db(&series, tr.record_interval(), p.delta, window)?;
    Ok(r.snr_db.is_finite().then_some(r.snr_db))
}

/// Seed-averaged SNR (in dB) per noise strength. A run without a single
/// switch carries no signal and counts toward `silent_runs` with the
/// background-band value of 0 dB.
pub fn snr_sweep(
    p: &SystemParams,
    noise: &[f64],
    cfg: &SdeConfig,
    seeds: &[u64],
    source: SnrSource,
    window: Window,
) -> Result<Vec<SnrPoint>> {
    if !(p.delta > 0.0) {
        return Err(Error::Domain(format!("snr sweep needs a positive detuning, got {}", p.delta)));
    }
    let jobs: Vec<(usize, u64)> = (0..noise.len())
        .flat_map(|i| seeds.iter().map(move |&s| (i, s)))
        .collect();
    let values: Vec<(usize, Option<f64>)> = jobs
        .par_iter()
        .map(|&(i, seed)| {
            run_snr(&p.with_noise(noise[i]), &SdeConfig { seed, ..*cfg }, source, window).map(|v| (i, v))
        })
        .collect::<Result<_>>()?;
    Ok(noise
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let runs: Vec<Option<f64>> = values.iter().filter(|(j, _)| *j == i).map(|(_, v)| *v).collect();
            let silent = runs.iter().filter(|v| v.is_none()).count();
            let xs: Vec<f64> = runs.iter().map(|v| v.unwrap_or(0.0)).collect();
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let var = if xs.len() > 1 {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            SnrPoint {
                noise: d,
                snr_db: mean,
                stderr: (var / n).sqrt(),
                silent_runs: silent,
            }
        })
        .collect())
}

/// `count` values spaced evenly in log between `lo` and `hi`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 + 0.5 * v).collect();
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12);
        assert!((f.intercept - 2.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_spaced(0.005, 0.3, 8);
        assert_eq!(g.len(), 8);
        assert!((g[0] - 0.005).abs() < 1e-15);
        assert!((g[7] - 0.3).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
