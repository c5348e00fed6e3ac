use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{drift_with_signal, SemiclassicalState};
use crate::error::{Error, Result};
use crate::model::SystemParams;

pub const TRAJECTORY_CSV_HEADER: &str = "t,re_alpha,im_alpha,D0";

/// Numerical controls of one Euler–Maruyama run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdeConfig {
    pub dt: f64,
    /// Total integrated time.
    pub duration: f64,
    pub seed: u64,
    /// Steps between recorded samples.
    pub stride: usize,
    /// Start time.
    #[serde(default)]
    pub t0: f64,
    /// Also drive `Im alpha` with an independent noise of the same strength.
    #[serde(default)]
    pub imaginary_noise: bool,
    /// Records with `D0` outside `[-1 - excursion, 1 + excursion]` are counted
    /// in [`Trajectory::excursions`].
    #[serde(default = "default_excursion")]
    pub excursion: f64,
}

fn default_excursion() -> f64 {
    0.05
}

impl SdeConfig {
    pub fn new(dt: f64, duration: f64, seed: u64, stride: usize) -> Self {
        Self {
            dt,
            duration,
            seed,
            stride,
            t0: 0.0,
            imaginary_noise: false,
            excursion: default_excursion(),
        }
    }

    pub fn steps(&self) -> u64 {
        (self.duration / self.dt).round() as u64
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParams(format!("dt = {}", self.dt)));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(Error::InvalidParams(format!("duration = {}", self.duration)));
        }
        if self.stride == 0 {
            return Err(Error::InvalidParams("stride = 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub t: f64,
    pub re_alpha: f64,
    pub im_alpha: f64,
    pub d0: f64,
}

/// Destination for records as they are produced.
pub trait RecordSink {
    fn push(&mut self, record: Record) -> Result<()>;
}

impl RecordSink for Vec<Record> {
    fn push(&mut self, record: Record) -> Result<()> {
        Vec::push(self, record);
        Ok(())
    }
}

/// Streams records as CSV rows, for runs too long to keep in memory.
pub struct CsvRecordSink<W: Write> {
    out: W,
}

impl<W: Write> CsvRecordSink<W> {
    pub fn new(mut out: W) -> Result<Self> {
        writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
        Ok(Self { out })
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> RecordSink for CsvRecordSink<W> {
    fn push(&mut self, r: Record) -> Result<()> {
        writeln!(
            self.out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            r.t, r.re_alpha, r.im_alpha, r.d0
        )?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub dt: f64,
    pub t0: f64,
    pub seed: u64,
    pub stride: usize,
    pub records: Vec<Record>,
    /// Number of records whose inversion left the excursion bound.
    pub excursions: usize,
    pub final_state: SemiclassicalState,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn amplitude(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.re_alpha).collect()
    }

    pub fn inversion(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.d0).collect()
    }

    pub fn record_interval(&self) -> f64 {
        self.dt * self.stride as f64
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut sink = CsvRecordSink::new(out)?;
        for r in &self.records {
            sink.push(*r)?;
        }
        sink.out.flush()?;
        Ok(())
    }
}

/// Outcome of [`integrate_into`]: everything except the records.
#[derive(Debug, Clone, Copy)]
pub struct RunSummary {
    pub excursions: usize,
    pub final_state: SemiclassicalState,
}

const FINITE_CHECK_EVERY: u64 = 1024;
const PHASOR_RESYNC_EVERY: u64 = 4096;

/// Euler–Maruyama integration with records pushed into `sink`.
///
/// Per step the real Gaussian increment `sqrt(2 D dt) N(0,1)` is added to
/// `alpha`; polarization and inversion follow the drift only. The run is a
/// pure function of `(p, init, cfg)`.
pub fn integrate_into<S: RecordSink + ?Sized>(
    p: &SystemParams,
    init: SemiclassicalState,
    cfg: &SdeConfig,
    sink: &mut S,
) -> Result<RunSummary> {
    p.validate()?;
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dt = cfg.dt;
    let kick = (2.0 * p.noise * dt).sqrt();
    let steps = cfg.steps();
    let stride = cfg.stride as u64;
    let lo = -1.0 - cfg.excursion;
    let hi = 1.0 + cfg.excursion;

    let signal_at = |k: u64| {
        let t = cfg.t0 + k as f64 * dt;
        Complex64::from_polar(p.e2, -p.delta * t)
    };
    let rotation = Complex64::from_polar(1.0, -p.delta * dt);
    let mut signal = signal_at(0);

    let mut s = init;
    let mut excursions = 0;
    let mut emit = |k: u64, s: &SemiclassicalState| -> Result<()> {
        let t = cfg.t0 + k as f64 * dt;
        if !s.is_finite() {
            return Err(non_finite(t, s));
        }
        if s.d0 < lo || s.d0 > hi {
            excursions += 1;
        }
        sink.push(Record {
            t,
            re_alpha: s.alpha.re,
            im_alpha: s.alpha.im,
            d0: s.d0,
        })
    };
    emit(0, &s)?;

    for k in 1..=steps {
        let d = drift_with_signal(&s, signal, p);
        s = s + d * dt;
        if kick != 0.0 {
            let xi: f64 = StandardNormal.sample(&mut rng);
            s.alpha.re += kick * xi;
            if cfg.imaginary_noise {
                let eta: f64 = StandardNormal.sample(&mut rng);
                s.alpha.im += kick * eta;
            }
        }
        if p.e2 != 0.0 {
            signal = if k % PHASOR_RESYNC_EVERY == 0 {
                signal_at(k)
            } else {
                signal * rotation
            };
        }
        if k % stride == 0 {
            emit(k, &s)?;
        } else if k % FINITE_CHECK_EVERY == 0 && !s.is_finite() {
            return Err(non_finite(cfg.t0 + k as f64 * dt, &s));
        }
    }
    Ok(RunSummary {
        excursions,
        final_state: s,
    })
}

fn non_finite(t: f64, s: &SemiclassicalState) -> Error {
    Error::NonFinite {
        t,
        state: format!("alpha = {}, p = {}, D0 = {}", s.alpha, s.p, s.d0),
    }
}

pub fn integrate(p: &SystemParams, init: SemiclassicalState, cfg: &SdeConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let capacity = (cfg.steps() / cfg.stride.max(1) as u64 + 1).min(1 << 24) as usize;
    let mut records = Vec::with_capacity(capacity);
    let summary = integrate_into(p, init, cfg, &mut records)?;
    Ok(Trajectory {
        dt: cfg.dt,
        t0: cfg.t0,
        seed: cfg.seed,
        stride: cfg.stride,
        records,
        excursions: summary.excursions,
        final_state: summary.final_state,
    })
}

/// Independent runs, one per seed, returned in seed order regardless of how
/// the worker pool schedules them.
pub fn integrate_ensemble(
    p: &SystemParams,
    init: SemiclassicalState,
    cfg: &SdeConfig,
    seeds: &[u64],
) -> Result<Vec<Trajectory>> {
    seeds
        .par_iter()
        .map(|&seed| integrate(p, init, &SdeConfig { seed, ..*cfg }))
        .collect()
}
