//! Unconditional Lindblad evolution and its steady state.
//!
//! The generator is written with the non-Hermitian effective Hamiltonian
//! `K = H - (i/2)(kappa a^dagger a + gamma sigma_+ sigma_-)`, so that for a
//! Hermitian `rho`
//!
//! `L(rho) = M + M^dagger + kappa a rho a^dagger + gamma sigma_- rho sigma_+`, with `M = -i K rho`,
//!
//! which equals `i[rho, H] + D[sqrt(kappa) a] rho + D[sqrt(gamma) sigma_-] rho`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dense::CMatrix;
use super::kernel::{self, diagonals, valid_rows, Diagonal, Jump};
use super::operators::OperatorSet;
use super::sparse::SparseMatrix;
use super::state::QuantumState;
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Precomputed generator pieces plus scratch space for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub(crate) params: SystemParams,
    fock_dim: usize,
    a: SparseMatrix,
    sigma_z: SparseMatrix,
    k_diagonals: Vec<Diagonal>,
    a_diagonal: Diagonal,
    a_dag_diagonal: Diagonal,
    a_channel: Jump,
    sigma_channel: Jump,
    left: Vec<Diagonal>,
}

impl Liouvillian {
    pub fn new(ops: &OperatorSet, p: &SystemParams) -> Result<Self> {
        p.validate()?;
        let half_i = Complex64::new(0.0, -0.5);
        let damping = ops
            .number
            .scale(Complex64::new(p.kappa, 0.0))
            .add(&ops.sigma_plus.matmul(&ops.sigma_minus).scale(Complex64::new(p.gamma, 0.0)))
            .scale(half_i);
        let n = ops.dim();
        let k_static = ops.coupling(p.g).add(&damping);
        let k_diagonals = diagonals(&k_static);
        let single = |m: &SparseMatrix, offset: isize| {
            diagonals(m)
                .into_iter()
                .find(|d| d.offset == offset)
                .unwrap_or_else(|| Diagonal::zeros(n, offset))
        };
        let mut offsets: Vec<isize> = k_diagonals.iter().map(|d| d.offset).chain([1, -1]).collect();
        offsets.sort_unstable();
        offsets.dedup();
        Ok(Self {
            params: *p,
            fock_dim: ops.fock_dim(),
            a_diagonal: single(&ops.a, 1),
            a_dag_diagonal: single(&ops.a_dag, -1),
            a_channel: Jump::from_sparse(&ops.a).expect("a lies on one diagonal"),
            sigma_channel: Jump::from_sparse(&ops.sigma_minus).expect("sigma_- lies on one diagonal"),
            left: offsets.into_iter().map(|d| Diagonal::zeros(n, d)).collect(),
            k_diagonals,
            a: ops.a.clone(),
            sigma_z: ops.sigma_z.clone(),
        })
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn dim(&self) -> usize {
        2 * self.fock_dim
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn expect_a(&self, rho: &CMatrix) -> Complex64 {
        self.a.expect(rho)
    }

    pub fn expect_sigma_z(&self, rho: &CMatrix) -> f64 {
        self.sigma_z.expect(rho).re
    }

    /// `left = -i scale K(t) + measured a`.
    fn set_left(&mut self, t: f64, scale: f64, measured: f64) {
        let c = OperatorSet::drive_coefficient(&self.params, t);
        let minus_i = Complex64::new(0.0, -scale);
        let parts = self
            .k_diagonals
            .iter()
            .map(|d| (d, minus_i))
            .chain([
                (&self.a_diagonal, minus_i * c + measured),
                (&self.a_dag_diagonal, minus_i * c.conj()),
            ]);
        for slot in &mut self.left {
            slot.re.fill(0.0);
            slot.im.fill(0.0);
        }
        for (d, w) in parts {
            let slot = self.left.iter_mut().find(|s| s.offset == d.offset).expect("offset slot");
            for i in 0..d.re.len() {
                let v = w * Complex64::new(d.re[i], d.im[i]);
                slot.re[i] += v.re;
                slot.im[i] += v.im;
            }
        }
    }

    /// `<a + a^dagger>`.
    pub(crate) fn quadrature(&self, rho: &CMatrix) -> f64 {
        let d = &self.a_diagonal;
        let mut acc = 0.0;
        for i in d.rows(rho.dim()) {
            let r = rho.get(i + 1, i);
            acc += d.re[i] * r.re - d.im[i] * r.im;
        }
        2.0 * acc
    }

    /// `<a^dagger a>`.
    pub(crate) fn photon_number(&self, rho: &CMatrix) -> f64 {
        let j = &self.a_channel;
        valid_rows(rho.dim(), j.offset)
            .map(|i| {
                let k = (i as isize + j.offset) as usize;
                j.u[i] * j.u[i] * rho.get(k, k).re
            })
            .sum()
    }

    /// `out = M rho M^dagger + gamma dt sigma_- rho sigma_+ (+ kappa dt a rho a^dagger)`
    /// with `M = 1 - i K(t) dt + measured a`; the cavity dissipator is added
    /// explicitly only when `unconditioned`. Returns the trace of `out`.
    pub(crate) fn kraus(
        &mut self,
        rho: &CMatrix,
        scratch: &mut CMatrix,
        out: &mut CMatrix,
        t: f64,
        dt: f64,
        measured: f64,
        unconditioned: bool,
    ) -> f64 {
        self.set_left(t, dt, measured);
        let (kappa, gamma) = (self.params.kappa, self.params.gamma);
        let sigma = (&self.sigma_channel, gamma * dt);
        if unconditioned {
            kernel::sandwich(rho, scratch, out, &self.left, &[(&self.a_channel, kappa * dt), sigma])
        } else {
            kernel::sandwich(rho, scratch, out, &self.left, &[sigma])
        }
    }

    /// `out = keep rho + scale L(rho) + measured (a rho + rho a^dagger)`;
    /// returns the trace of `out`.
    pub(crate) fn update(&mut self, rho: &CMatrix, out: &mut CMatrix, t: f64, scale: f64, keep: f64, measured: f64) -> f64 {
        self.set_left(t, scale, measured);
        let (kappa, gamma) = (self.params.kappa, self.params.gamma);
        kernel::apply(
            rho,
            out,
            keep,
            &self.left,
            &[(&self.a_channel, kappa * scale), (&self.sigma_channel, gamma * scale)],
        )
    }

    /// `out = L(rho)` at time `t`; `rho` must be Hermitian.
    pub fn rhs_into(&mut self, rho: &CMatrix, t: f64, out: &mut CMatrix) {
        self.update(rho, out, t, 1.0, 0.0, 0.0);
    }

    pub fn rhs(&mut self, rho: &CMatrix, t: f64) -> CMatrix {
        let mut out = CMatrix::zeros(rho.dim());
        self.rhs_into(rho, t, &mut out);
        out
    }
}

/// Lindblad right-hand side `i[rho, H] + D[sqrt(kappa) a] rho + D[sqrt(gamma) sigma_-] rho`.
pub fn me_rhs(rho: &CMatrix, ops: &OperatorSet, p: &SystemParams, t: f64) -> Result<CMatrix> {
    Ok(Liouvillian::new(ops, p)?.rhs(rho, t))
}

/// Controls of the steady-state search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyOptions {
    /// Frobenius norm of the generator below which the state counts as stationary.
    pub tolerance: f64,
    pub max_time: f64,
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
}

impl Default for SteadyOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_time: 20_000.0,
            rtol: 1e-11,
            atol: 1e-13,
            initial_step: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SteadyReport {
    pub state: QuantumState,
    pub a: Complex64,
    pub sigma_z: f64,
    pub residual: f64,
    pub steps: usize,
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// Adaptive Dormand–Prince integration of the master equation.
pub struct AdaptiveEvolution {
    lv: Liouvillian,
    k: Vec<CMatrix>,
    stage: CMatrix,
    pub rtol: f64,
    pub atol: f64,
    pub h: f64,
    k1_valid: bool,
    pub steps: usize,
}

impl AdaptiveEvolution {
    pub fn new(lv: Liouvillian, h: f64, rtol: f64, atol: f64) -> Self {
        let n = lv.dim();
        Self {
            lv,
            k: (0..7).map(|_| CMatrix::zeros(n)).collect(),
            stage: CMatrix::zeros(n),
            rtol,
            atol,
            h,
            k1_valid: false,
            steps: 0,
        }
    }

    pub fn liouvillian(&mut self) -> &mut Liouvillian {
        &mut self.lv
    }

    /// Frobenius norm of `L(rho)` at the current point, available after a step.
    pub fn residual(&self) -> f64 {
        self.k[0].frobenius_norm()
    }

    /// Attempts steps until one is accepted; advances `state` and returns the step taken.
    pub fn step(&mut self, state: &mut QuantumState, h_max: f64) -> f64 {
        let t = state.t;
        if !self.k1_valid {
            let (k0, _) = self.k.split_at_mut(1);
            self.lv.rhs_into(&state.rho, t, &mut k0[0]);
            self.k1_valid = true;
        }
        loop {
            let h = self.h.min(h_max);
            for s in 1..7 {
                self.stage.copy_from(&state.rho);
                for (j, &a) in A[s][..s].iter().enumerate() {
                    if a != 0.0 {
                        self.stage.axpy(h * a, &self.k[j]);
                    }
                }
                let (_, rest) = self.k.split_at_mut(s);
                self.lv.rhs_into(&self.stage, t + C[s] * h, &mut rest[0]);
            }
            // stage now holds the 5th-order solution (FSAL row); k[6] = L(stage).
            let err = self.error_norm(&state.rho, h);
            if err <= 1.0 || h <= 1e-12 {
                state.rho.copy_from(&self.stage);
                state.rho.hermitize();
                state.t = t + h;
                self.k.swap(0, 6);
                self.steps += 1;
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                self.h = h * grow;
                return h;
            }
            self.h = h * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
    }

    fn error_norm(&self, y0: &CMatrix, h: f64) -> f64 {
        let (y0re, y0im) = y0.planes();
        let (y1re, y1im) = self.stage.planes();
        let planes: Vec<(&[f64], &[f64])> = self.k.iter().map(|k| k.planes()).collect();
        let len = y0re.len();
        let mut acc = 0.0;
        for idx in 0..len {
            let (mut er, mut ei) = (0.0, 0.0);
            for (s, &e) in E.iter().enumerate() {
                if e != 0.0 {
                    er += e * planes[s].0[idx];
                    ei += e * planes[s].1[idx];
                }
            }
            let scale = self.atol
                + self.rtol
                    * y0re[idx]
                        .hypot(y0im[idx])
                        .max(y1re[idx].hypot(y1im[idx]));
            acc += (h * h) * (er * er + ei * ei) / (scale * scale);
        }
        (acc / len as f64).sqrt()
    }
}

/// Long-time integration of the time-independent master equation until the
/// generator norm drops below `opts.tolerance`.
pub fn me_steady_state(ops: &OperatorSet, p: &SystemParams, opts: &SteadyOptions) -> Result<SteadyReport> {
    me_steady_state_from(ops, p, QuantumState::ground(ops), opts)
}

/// As [`me_steady_state`], starting from `init` (e.g. the steady state of a
/// neighboring drive).
pub fn me_steady_state_from(
    ops: &OperatorSet,
    p: &SystemParams,
    init: QuantumState,
    opts: &SteadyOptions,
) -> Result<SteadyReport> {
    if p.e2 != 0.0 {
        return Err(Error::Domain("steady state requires E2 = 0".into()));
    }
    let lv = Liouvillian::new(ops, p)?;
    let mut evo = AdaptiveEvolution::new(lv, opts.initial_step, opts.rtol, opts.atol);
    let mut state = init;
    state.t = 0.0;
    loop {
        evo.step(&mut state, f64::INFINITY);
        let residual = evo.residual();
        if !state.rho.is_finite() {
            return Err(Error::NonFinite {
                t: state.t,
                state: "density matrix".into(),
            });
        }
        if residual < opts.tolerance {
            let a = evo.liouvillian().expect_a(&state.rho);
            let sigma_z = evo.liouvillian().expect_sigma_z(&state.rho);
            return Ok(SteadyReport {
                state,
                a,
                sigma_z,
                residual,
                steps: evo.steps,
            });
        }
        if state.t >= opts.max_time {
            return Err(Error::NotConverged { t: state.t, residual });
        }
    }
}

/// Steady states along a list of control drives, each search starting from
/// the previous result.
pub fn me_steady_sweep(
    ops: &OperatorSet,
    p: &SystemParams,
    e1_values: &[f64],
    opts: &SteadyOptions,
) -> Result<Vec<SteadyReport>> {
    let mut state = QuantumState::ground(ops);
    let mut out = Vec::with_capacity(e1_values.len());
    for &e1 in e1_values {
        let r = me_steady_state_from(ops, &p.with_e1(e1), state, opts)?;
        state = r.state.clone();
        out.push(r);
    }
    Ok(out)
}

/// One sample of an expectation-value time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expectations {
    pub t: f64,
    pub a: Complex64,
    pub sigma_z: f64,
}

/// Fixed-step RK4 evolution of the unconditional master equation, sampled
/// every `stride` steps.
pub fn me_evolve(
    ops: &OperatorSet,
    p: &SystemParams,
    init: &QuantumState,
    dt: f64,
    duration: f64,
    stride: usize,
) -> Result<(Vec<Expectations>, QuantumState)> {
    let mut lv = Liouvillian::new(ops, p)?;
    let n = ops.dim();
    let mut rho = init.rho.clone();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        CMatrix::zeros(n),
        CMatrix::zeros(n),
        CMatrix::zeros(n),
        CMatrix::zeros(n),
        CMatrix::zeros(n),
    );
    let steps = (duration / dt).round() as usize;
    let stride = stride.max(1);
    let mut out = Vec::with_capacity(steps / stride + 1);
    let sample = |lv: &Liouvillian, rho: &CMatrix, t: f64| Expectations {
        t,
        a: lv.expect_a(rho),
        sigma_z: lv.expect_sigma_z(rho),
    };
    out.push(sample(&lv, &rho, init.t));
    for k in 0..steps {
        let t = init.t + k as f64 * dt;
        lv.rhs_into(&rho, t, &mut k1);
        tmp.copy_from(&rho);
        tmp.axpy(0.5 * dt, &k1);
        lv.rhs_into(&tmp, t + 0.5 * dt, &mut k2);
        tmp.copy_from(&rho);
        tmp.axpy(0.5 * dt, &k2);
        lv.rhs_into(&tmp, t + 0.5 * dt, &mut k3);
        tmp.copy_from(&rho);
        tmp.axpy(dt, &k3);
        lv.rhs_into(&tmp, t + dt, &mut k4);
        rho.axpy(dt / 6.0, &k1);
        rho.axpy(dt / 3.0, &k2);
        rho.axpy(dt / 3.0, &k3);
        rho.axpy(dt / 6.0, &k4);
        rho.hermitize();
        if (k + 1) % stride == 0 {
            out.push(sample(&lv, &rho, init.t + (k + 1) as f64 * dt));
        }
    }
    let t_end = init.t + steps as f64 * dt;
    Ok((out, QuantumState::new(rho, ops.fock_dim(), t_end)))
}
