//! Homodyne-conditioned trajectories of the stochastic master equation
//!
//! `d rho = L(rho) dt + dW H[sqrt(kappa) a] rho`, `H[A] rho = A rho + rho A^dagger - Tr(A rho + rho A^dagger) rho`,
//!
//! with the measured current `I = sqrt(kappa) <a + a^dagger> + dW/dt`.

use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dense::CMatrix;
use super::master::Liouvillian;
use super::operators::OperatorSet;
use super::state::{top_population, Hygiene, QuantumState, TRUNCATION_TOLERANCE};
use crate::error::{Error, Result};
use crate::model::SystemParams;

pub const EXPECTATION_CSV_HEADER: &str = "t,re_a,im_a,sigma_z,I";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmeScheme {
    /// Explicit Itô step, then trace renormalization. Can lose positivity
    /// by ~1e-6 on long bistable runs.
    EulerMaruyama,
    /// `rho -> M rho M^dagger + gamma dt sigma_- rho sigma_+` (normalized) with
    /// `M = 1 - i K dt + sqrt(kappa) dY a`; positive by construction.
    #[default]
    Kraus,
}

impl SmeScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            SmeScheme::EulerMaruyama => "euler-maruyama",
            SmeScheme::Kraus => "kraus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmeConfig {
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
    /// Steps per recorded sample; the current is averaged over each stride.
    pub stride: usize,
    #[serde(default)]
    pub scheme: SmeScheme,
    /// Largest admissible top-Fock population.
    #[serde(default = "default_truncation")]
    pub truncation: f64,
    /// Largest admissible trace error of a single step before renormalization.
    #[serde(default = "default_max_trace_drift")]
    pub max_trace_drift: f64,
    /// Keep the per-step current as well as the binned one.
    #[serde(default)]
    pub raw_current: bool,
    /// Records between full hygiene checks (eigenvalues); 0 disables them.
    #[serde(default)]
    pub snapshot_every: usize,
    /// With `false` the innovation `dW` is set to zero.
    #[serde(default = "default_true")]
    pub conditioning: bool,
}

fn default_truncation() -> f64 {
    TRUNCATION_TOLERANCE
}

fn default_max_trace_drift() -> f64 {
    0.1
}

fn default_true() -> bool {
    true
}

impl SmeConfig {
    pub fn new(dt: f64, duration: f64, seed: u64, stride: usize) -> Self {
        Self {
            dt,
            duration,
            seed,
            stride,
            scheme: SmeScheme::default(),
            truncation: default_truncation(),
            max_trace_drift: default_max_trace_drift(),
            raw_current: false,
            snapshot_every: 0,
            conditioning: true,
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
            return Err(Error::InvalidParams("stride must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomodyneSample {
    pub t: f64,
    /// Current averaged over the stride ending at `t`.
    pub current: f64,
    pub a: Complex64,
    pub sigma_z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomodyneRecord {
    pub dt: f64,
    pub seed: u64,
    pub stride: usize,
    pub samples: Vec<HomodyneSample>,
    pub raw_current: Option<Vec<f64>>,
    /// Largest single-step trace error before renormalization.
    pub max_trace_drift: f64,
}

impl HomodyneRecord {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn re_a(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.a.re).collect()
    }

    pub fn sigma_z(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.sigma_z).collect()
    }

    pub fn current(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.current).collect()
    }

    pub fn record_interval(&self) -> f64 {
        self.dt * self.stride as f64
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{EXPECTATION_CSV_HEADER}")?;
        for s in &self.samples {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.t, s.a.re, s.a.im, s.sigma_z, s.current
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub hygiene: Hygiene,
}

#[derive(Debug, Clone)]
pub struct SmeRun {
    pub record: HomodyneRecord,
    pub snapshots: Vec<Snapshot>,
    pub final_state: QuantumState,
}

/// Everything needed to continue a run bit-identically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmeCheckpoint {
    pub params: SystemParams,
    pub config: SmeConfig,
    pub fock_dim: usize,
    pub t0: f64,
    pub step: u64,
    pub rho_re: Vec<f64>,
    pub rho_im: Vec<f64>,
    pub rng_word_pos: u128,
    pub record: HomodyneRecord,
    pub snapshots: Vec<Snapshot>,
    pub bin_sum: f64,
}

/// A conditioned trajectory that can be advanced in pieces.
pub struct SmeIntegrator {
    lv: Liouvillian,
    cfg: SmeConfig,
    rng: ChaCha8Rng,
    rho: CMatrix,
    t0: f64,
    step: u64,
    record: HomodyneRecord,
    snapshots: Vec<Snapshot>,
    bin_sum: f64,
    tmp: CMatrix,
    scratch: CMatrix,
}

impl SmeIntegrator {
    pub fn new(ops: &OperatorSet, p: &SystemParams, init: &QuantumState, cfg: &SmeConfig) -> Result<Self> {
        cfg.validate()?;
        if init.fock_dim() != ops.fock_dim() {
            return Err(Error::InvalidParams(format!(
                "initial state has N = {}, operators N = {}",
                init.fock_dim(),
                ops.fock_dim()
            )));
        }
        let lv = Liouvillian::new(ops, p)?;
        let n = ops.dim();
        let steps = cfg.steps();
        Ok(Self {
            lv,
            cfg: *cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            rho: init.rho.clone(),
            t0: init.t,
            step: 0,
            record: HomodyneRecord {
                dt: cfg.dt,
                seed: cfg.seed,
                stride: cfg.stride,
                samples: Vec::with_capacity((steps / cfg.stride as u64).min(1 << 24) as usize),
                raw_current: cfg.raw_current.then(Vec::new),
                max_trace_drift: 0.0,
            },
            snapshots: Vec::new(),
            bin_sum: 0.0,
            tmp: CMatrix::zeros(n),
            scratch: CMatrix::zeros(n),
        })
    }

    pub fn resume(ops: &OperatorSet, cp: SmeCheckpoint) -> Result<Self> {
        let n = 2 * cp.fock_dim;
        if cp.rho_re.len() != n * n || cp.rho_im.len() != n * n {
            return Err(Error::Config("checkpoint density matrix has the wrong size".into()));
        }
        let mut rho = CMatrix::zeros(n);
        {
            let (re, im) = rho.planes_mut();
            re.copy_from_slice(&cp.rho_re);
            im.copy_from_slice(&cp.rho_im);
        }
        let init = QuantumState::new(rho, cp.fock_dim, cp.t0);
        let mut me = Self::new(ops, &cp.params, &init, &cp.config)?;
        me.step = cp.step;
        me.rng.set_word_pos(cp.rng_word_pos);
        me.record = cp.record;
        me.snapshots = cp.snapshots;
        me.bin_sum = cp.bin_sum;
        Ok(me)
    }

    pub fn checkpoint(&self) -> SmeCheckpoint {
        let (re, im) = self.rho.planes();
        SmeCheckpoint {
            params: self.lv.params,
            config: self.cfg,
            fock_dim: self.lv.fock_dim(),
            t0: self.t0,
            step: self.step,
            rho_re: re.to_vec(),
            rho_im: im.to_vec(),
            rng_word_pos: self.rng.get_word_pos(),
            record: self.record.clone(),
            snapshots: self.snapshots.clone(),
            bin_sum: self.bin_sum,
        }
    }

    pub fn time(&self) -> f64 {
        self.t0 + self.step as f64 * self.cfg.dt
    }

    pub fn steps_done(&self) -> u64 {
        self.step
    }

    pub fn is_finished(&self) -> bool {
        self.step >= self.cfg.steps()
    }

    pub fn state(&self) -> QuantumState {
        QuantumState::new(self.rho.clone(), self.lv.fock_dim(), self.time())
    }

    /// Advances by at most `max_steps`; returns the number taken.
    pub fn advance(&mut self, max_steps: u64) -> Result<u64> {
        let target = self.step.saturating_add(max_steps).min(self.cfg.steps());
        let start = self.step;
        let sqrt_dt = self.cfg.dt.sqrt();
        let sqrt_kappa = self.lv.params.kappa.sqrt();
        while self.step < target {
            let t = self.time();
            let dw = if self.cfg.conditioning {
                let xi: f64 = StandardNormal.sample(&mut self.rng);
                sqrt_dt * xi
            } else {
                0.0
            };
            let (x, drift) = match self.cfg.scheme {
                SmeScheme::EulerMaruyama => self.euler_step(t, dw),
                SmeScheme::Kraus => self.kraus_step(t, dw),
            };
            self.step += 1;
            let t_new = self.time();
            if !drift.is_finite() {
                return Err(Error::NonFinite {
                    t: t_new,
                    state: "density matrix trace".into(),
                });
            }
            if drift > self.cfg.max_trace_drift {
                return Err(Error::TraceDrift { t: t_new, drift });
            }
            self.record.max_trace_drift = self.record.max_trace_drift.max(drift);
            let current = sqrt_kappa * x + dw / self.cfg.dt;
            self.bin_sum += current;
            if let Some(raw) = &mut self.record.raw_current {
                raw.push(current);
            }
            if self.step % self.cfg.stride as u64 == 0 {
                self.emit(t_new)?;
            }
        }
        Ok(self.step - start)
    }

    fn emit(&mut self, t: f64) -> Result<()> {
        let population = top_population(&self.rho, self.lv.fock_dim());
        if population > self.cfg.truncation {
            return Err(Error::Truncation {
                t,
                population,
                tolerance: self.cfg.truncation,
            });
        }
        let a = self.lv.expect_a(&self.rho);
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::NonFinite {
                t,
                state: format!("<a> = {a}"),
            });
        }
        self.record.samples.push(HomodyneSample {
            t,
            current: self.bin_sum / self.cfg.stride as f64,
            a,
            sigma_z: self.lv.expect_sigma_z(&self.rho),
        });
        self.bin_sum = 0.0;
        let every = self.cfg.snapshot_every;
        if every > 0 && self.record.samples.len() % every == 0 {
            let hygiene = self.state().hygiene();
            self.snapshots.push(Snapshot { t, hygiene });
        }
        Ok(())
    }

    /// Returns `<a + a^dagger>` before the step and the trace error before renormalization.
    fn euler_step(&mut self, t: f64, dw: f64) -> (f64, f64) {
        let x = self.lv.quadrature(&self.rho);
        let c = self.lv.params.kappa.sqrt() * dw;
        let trace = self.lv.update(&self.rho, &mut self.tmp, t, self.cfg.dt, 1.0 - c * x, c);
        std::mem::swap(&mut self.rho, &mut self.tmp);
        self.rho.scale(1.0 / trace);
        (x, (trace - 1.0).abs())
    }

    fn kraus_step(&mut self, t: f64, dw: f64) -> (f64, f64) {
        let dt = self.cfg.dt;
        let kappa = self.lv.params.kappa;
        let x = self.lv.quadrature(&self.rho);
        // Without conditioning the measurement channel becomes an ordinary
        // dissipator inside the Kraus map.
        let c = if self.cfg.conditioning {
            kappa.sqrt() * (dw + kappa.sqrt() * x * dt)
        } else {
            0.0
        };
        let number = if self.cfg.conditioning { self.lv.photon_number(&self.rho) } else { 0.0 };
        let trace = self
            .lv
            .kraus(&self.rho, &mut self.scratch, &mut self.tmp, t, dt, c, !self.cfg.conditioning);
        std::mem::swap(&mut self.rho, &mut self.tmp);
        self.rho.scale(1.0 / trace);
        // The unnormalized trace is 1 + c <a + a^dagger> + (c^2 - kappa dt) <a^dagger a>
        // up to higher orders; report what is left beyond that.
        let drift = (trace - 1.0 - c * x - (c * c - kappa * dt) * number).abs();
        (x, drift)
    }

    pub fn finish(self) -> SmeRun {
        let final_state = self.state();
        SmeRun {
            record: self.record,
            snapshots: self.snapshots,
            final_state,
        }
    }
}

/// One conditioned trajectory from `init` over `cfg.duration`.
pub fn sme_integrate(ops: &OperatorSet, p: &SystemParams, init: &QuantumState, cfg: &SmeConfig) -> Result<SmeRun> {
    let mut it = SmeIntegrator::new(ops, p, init, cfg)?;
    it.advance(u64::MAX)?;
    Ok(it.finish())
}

/// Independent trajectories, one per seed, in seed order.
pub fn sme_ensemble(
    ops: &OperatorSet,
    p: &SystemParams,
    init: &QuantumState,
    cfg: &SmeConfig,
    seeds: &[u64],
) -> Result<Vec<SmeRun>> {
    seeds
        .par_iter()
        .map(|&seed| sme_integrate(ops, p, init, &SmeConfig { seed, ..*cfg }))
        .collect()
}
