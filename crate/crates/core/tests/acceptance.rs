//! One line per acceptance criterion.
//!
//! `JCSR_CRITERIA=2,5,9` runs a subset. `JCSR_FULL=1` runs the quantum jump
//! statistics at the full duration instead of the smoke variant.

use std::cell::OnceCell;
use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{Matrix5, Vector5};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jcsr::analysis::{
    kramers_scan, level_crossing, log_spaced, optimal_frequency, quantum_jumps, residence_peak_structure,
    snr_sweep, stats_from_durations, switching_run, Binning, DwellRecord, JumpAnalysis, Label, PeakStructure,
    ResidenceStats, SnrSource, Window,
};
use jcsr::model::{
    bistable_region, branch_midpoint, derived_params, potential_extrema, steady_states, Stability, SystemParams,
};
use jcsr::quantum::{
    build_operators, fidelity_with_pure, me_steady_state, me_steady_sweep, reduce_cavity, sme_integrate, wigner,
    Hygiene, OperatorSet, QuantumState, SmeConfig, SmeRun, SteadyOptions, SteadyReport, WignerGrid,
    TRUNCATION_TOLERANCE,
};
use jcsr::seed::derive_seeds;
use jcsr::semiclassical::{drift, SdeConfig, SemiclassicalState};

/// Criteria that cannot be met as stated, with the reason. They print FAIL
/// but do not fail the run.
const KNOWN_FAILING: &[(usize, &str)] = &[
    (
        2,
        "the upper fold of the steady-state curve is 2.44026 (independent oracle agrees), 1.03e-2 from the quoted 2.43",
    ),
    (
        5,
        "dwells from the quarter-separation detector are not exponential at the 5% level; wider hysteresis passes KS but moves a above 500",
    ),
];

const STEADY_FOCK: usize = 50;
const SME_FOCK: usize = 60;
const QUANTUM_E1: f64 = 2.55;
const QUANTUM_F0: f64 = 0.095;
const SC_DT: f64 = 1e-3;
const SC_STRIDE: usize = 100;

fn paper() -> SystemParams {
    SystemParams::default()
}

fn oracle_drive(p: &SystemParams, alpha: f64) -> f64 {
    let c = 2.0 * p.g * p.g / (p.kappa * p.gamma);
    let n0 = p.gamma * p.gamma / (8.0 * p.g * p.g);
    0.5 * p.kappa * alpha * (1.0 + 2.0 * c / (1.0 + alpha * alpha / n0))
}

fn oracle_potential(p: &SystemParams, alpha: f64) -> f64 {
    let n0 = p.gamma * p.gamma / (8.0 * p.g * p.g);
    p.kappa * p.gamma / 8.0 * alpha * alpha - p.gamma * p.e1 / 2.0 * alpha
        + p.gamma * p.gamma / 16.0 * (1.0 + alpha * alpha / n0).ln()
}

/// Zeros of `f` on `[lo, hi]` by a dense sign scan and bisection.
fn zeros(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let h = (hi - lo) / points as f64;
    let mut out = Vec::new();
    for i in 0..points {
        let (mut a, mut b) = (lo + i as f64 * h, lo + (i + 1) as f64 * h);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            out.push(a);
            continue;
        }
        if fa * fb > 0.0 {
            continue;
        }
        let mut fa = fa;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fa * fm <= 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

fn to_vec(s: &SemiclassicalState) -> Vector5<f64> {
    Vector5::new(s.alpha.re, s.alpha.im, s.p.re, s.p.im, s.d0)
}

fn from_vec(v: &Vector5<f64>) -> SemiclassicalState {
    SemiclassicalState {
        alpha: Complex64::new(v[0], v[1]),
        p: Complex64::new(v[2], v[3]),
        d0: v[4],
    }
}

/// Largest real part of the eigenvalues of a central-difference Jacobian of the drift.
fn numeric_growth_rate(p: &SystemParams, s: &SemiclassicalState) -> f64 {
    let x = to_vec(s);
    let h = 1e-6;
    let mut j = Matrix5::zeros();
    for k in 0..5 {
        let mut up = x;
        let mut down = x;
        up[k] += h;
        down[k] -= h;
        let col = (to_vec(&drift(&from_vec(&up), 0.0, p)) - to_vec(&drift(&from_vec(&down), 0.0, p))) / (2.0 * h);
        j.set_column(k, &col);
    }
    j.complex_eigenvalues().iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
}

fn oracle_coherent(beta: f64, len: usize) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(len);
    let mut amp = (-0.5 * beta * beta).exp();
    for n in 0..len {
        if n > 0 {
            amp *= beta / (n as f64).sqrt();
        }
        c.push(Complex64::new(amp, 0.0));
    }
    c
}

/// Mass an exponential law of mean `tau` puts in `[T/4, 3T/4]`.
fn exponential_window_mass(tau: f64, period: f64) -> f64 {
    (-0.25 * period / tau).exp() - (-0.75 * period / tau).exp()
}

fn label_stats(records: &[DwellRecord], label: Label) -> ResidenceStats {
    let d: Vec<f64> = records.iter().flat_map(|r| r.durations(label)).collect();
    stats_from_durations(d, label, Binning::FreedmanDiaconis).unwrap()
}

fn pooled_stats(records: &[DwellRecord]) -> ResidenceStats {
    let d: Vec<f64> = records
        .iter()
        .flat_map(|r| r.segments.iter().map(|s| s.duration))
        .collect();
    stats_from_durations(d, Label::High, Binning::FreedmanDiaconis).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

struct JumpRun {
    run: SmeRun,
    jumps: JumpAnalysis,
}

impl JumpRun {
    fn high_stats(&self) -> ResidenceStats {
        label_stats(std::slice::from_ref(&self.jumps.field), Label::High)
    }
}

struct SemiclassicalBaseline {
    pooled: ResidenceStats,
    high: ResidenceStats,
    low: ResidenceStats,
}

#[derive(Default)]
struct Lab {
    baseline: OnceCell<SemiclassicalBaseline>,
    sweep: OnceCell<(Vec<f64>, Vec<SteadyReport>)>,
    steady_225: OnceCell<SteadyReport>,
    jump_run: OnceCell<JumpRun>,
    sr_runs: OnceCell<Vec<(f64, JumpRun)>>,
    full: bool,
    ops: OnceCell<(OperatorSet, OperatorSet)>,
}

impl Lab {
    fn steady_ops(&self) -> &OperatorSet {
        &self.ops().0
    }

    fn sme_ops(&self) -> &OperatorSet {
        &self.ops().1
    }

    fn ops(&self) -> &(OperatorSet, OperatorSet) {
        self.ops
            .get_or_init(|| (build_operators(STEADY_FOCK).unwrap(), build_operators(SME_FOCK).unwrap()))
    }

    fn baseline(&self) -> &SemiclassicalBaseline {
        self.baseline.get_or_init(|| {
            let p = paper().with_noise(0.03);
            let cfg = SdeConfig::new(SC_DT, 5e5, derive_seeds(1, 1)[0], SC_STRIDE);
            let (_, d) = switching_run(&p, &cfg).unwrap();
            let records = [d];
            SemiclassicalBaseline {
                pooled: pooled_stats(&records),
                high: label_stats(&records, Label::High),
                low: label_stats(&records, Label::Low),
            }
        })
    }

    fn sweep(&self) -> &(Vec<f64>, Vec<SteadyReport>) {
        self.sweep.get_or_init(|| {
            let e1s = vec![2.40, 2.45, 2.50, 2.55, 2.60, 2.65, 2.70];
            let reports = me_steady_sweep(self.steady_ops(), &paper(), &e1s, &SteadyOptions::default()).unwrap();
            (e1s, reports)
        })
    }

    fn steady_at(&self, e1: f64) -> &SteadyReport {
        if e1 == 2.25 {
            return self.steady_225.get_or_init(|| {
                me_steady_state(self.steady_ops(), &paper().with_e1(e1), &SteadyOptions::default()).unwrap()
            });
        }
        let (e1s, reports) = self.sweep();
        &reports[e1s.iter().position(|&e| e == e1).unwrap()]
    }

    fn quantum_run(&self, p: &SystemParams, duration: f64, seed: u64) -> JumpRun {
        let ops = self.sme_ops();
        let cfg = SmeConfig {
            snapshot_every: 10,
            ..SmeConfig::new(1e-3, duration, seed, 100)
        };
        let run = sme_integrate(ops, p, &QuantumState::ground(ops), &cfg).unwrap();
        let r = &run.record;
        let jumps = quantum_jumps(&r.times(), &r.re_a(), &r.sigma_z(), r.record_interval()).unwrap();
        JumpRun { run, jumps }
    }

    fn jump_run(&self) -> &JumpRun {
        self.jump_run.get_or_init(|| {
            let p = paper().with_e1(QUANTUM_E1).with_noise(0.0);
            let duration = if self.full { 5e4 } else { 5e3 };
            self.quantum_run(&p, duration, derive_seeds(11, 1)[0])
        })
    }

    fn sr_runs(&self) -> &Vec<(f64, JumpRun)> {
        self.sr_runs.get_or_init(|| {
            [QUANTUM_F0, 7.0 * QUANTUM_F0, QUANTUM_F0 / 7.0]
                .into_iter()
                .map(|delta| {
                    let p = paper().with_e1(QUANTUM_E1).with_noise(0.0).with_signal(0.3, delta);
                    (delta, self.quantum_run(&p, 5e3, derive_seeds(12, 1)[0]))
                })
                .collect()
        })
    }
}

fn criterion_1(_: &Lab) -> Outcome {
    let p = SystemParams::new(1.0, 10.0, 6.0);
    let d = derived_params(&p).unwrap();
    let c_oracle = 2.0 * 36.0 / 10.0;
    let n0_oracle = 100.0 / (8.0 * 36.0);
    let pass = (d.cooperativity - 7.2).abs() <= 1e-6
        && (d.saturation_photons - 0.347222).abs() <= 1e-6
        && (d.cooperativity - c_oracle).abs() <= 1e-12
        && (d.saturation_photons - n0_oracle).abs() <= 1e-12;
    outcome(pass, format!("C = {:.9}, n0 = {:.9}", d.cooperativity, d.saturation_photons))
}

fn criterion_2(_: &Lab) -> Outcome {
    let p = paper();
    let (lo, hi) = bistable_region(&p, (1.5, 3.5), 1e-5).unwrap().unwrap();
    let slope = |a: f64| (oracle_drive(&p, a + 1e-6) - oracle_drive(&p, a - 1e-6)) / 2e-6;
    let folds: Vec<f64> = zeros(slope, 1e-3, 5.0, 5000).iter().map(|&a| oracle_drive(&p, a)).collect();
    let (olo, ohi) = (folds[1].min(folds[0]), folds[1].max(folds[0]));
    let pass = folds.len() == 2
        && (lo - 2.15).abs() <= 0.01
        && (hi - 2.43).abs() <= 0.01
        && (lo - olo).abs() <= 1e-4
        && (hi - ohi).abs() <= 1e-4;
    outcome(pass, format!("[{lo:.5}, {hi:.5}], fold oracle [{olo:.5}, {ohi:.5}]"))
}

fn criterion_3(_: &Lab) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut mismatched = 0;
    let mut inside = 0;
    for _ in 0..50 {
        let e1 = rng.random_range(1.5..3.0);
        let p = paper().with_e1(e1);
        let roots: Vec<f64> = steady_states(&p, e1).unwrap().iter().map(|r| r.alpha).collect();
        let extrema: Vec<f64> = potential_extrema(&p).extrema.iter().map(|e| e.alpha).collect();
        let hi = 2.0 * e1 / p.kappa + 1.0;
        let oracle_roots = zeros(|a| oracle_drive(&p, a) - e1, 0.0, hi, 20_000);
        let dv = |a: f64| (oracle_potential(&p, a + 1e-5) - oracle_potential(&p, a - 1e-5)) / 2e-5;
        let oracle_extrema = zeros(dv, 0.0, hi, 20_000);
        if roots.len() == 3 {
            inside += 1;
        }
        let lens = [extrema.len(), oracle_roots.len(), oracle_extrema.len()];
        if lens.iter().any(|&n| n != roots.len()) {
            mismatched += 1;
            continue;
        }
        for i in 0..roots.len() {
            for other in [extrema[i], oracle_roots[i], oracle_extrema[i]] {
                worst = worst.max((roots[i] - other).abs());
            }
        }
    }
    outcome(
        mismatched == 0 && worst <= 1e-6 && inside > 0 && inside < 50,
        format!("50 drives ({inside} bistable), max deviation {worst:.2e}, count mismatches {mismatched}"),
    )
}

fn criterion_4(_: &Lab) -> Outcome {
    let p = paper();
    let (lo, hi) = bistable_region(&p, (1.5, 3.5), 1e-6).unwrap().unwrap();
    let mut ok = 0;
    let mut worst_outer = f64::NEG_INFINITY;
    let mut least_middle = f64::INFINITY;
    for i in 0..20 {
        let e1 = lo + (i as f64 + 0.5) / 20.0 * (hi - lo);
        let q = p.with_e1(e1).with_noise(0.0);
        let roots = steady_states(&q, e1).unwrap();
        if roots.len() != 3 {
            continue;
        }
        let rates: Vec<f64> = roots.iter().map(|r| numeric_growth_rate(&q, &r.as_state())).collect();
        let labels = [Stability::Stable, Stability::Unstable, Stability::Stable];
        worst_outer = worst_outer.max(rates[0]).max(rates[2]);
        least_middle = least_middle.min(rates[1]);
        if rates[0] < 0.0 && rates[2] < 0.0 && rates[1] > 0.0 && roots.iter().map(|r| r.stability).eq(labels) {
            ok += 1;
        }
    }
    outcome(
        ok == 20,
        format!("{ok}/20 drives; middle growth rate >= {least_middle:.3e}, outer <= {worst_outer:.3e}"),
    )
}

fn criterion_5(lab: &Lab) -> Outcome {
    let b = lab.baseline();
    let a = b.pooled.fit.scale;
    let ratio = b.high.tau_bar / b.low.tau_bar;
    let pass = (300.0..=500.0).contains(&a) && (0.7..=1.4).contains(&ratio) && b.pooled.fit.ks_pass;
    outcome(
        pass,
        format!(
            "a = {a:.1} from {} dwells, tau_H/tau_L = {ratio:.3}, KS {:.3} (H {:.3}, L {:.3}; 5% critical 1.094)",
            b.pooled.durations.len(),
            b.pooled.fit.ks_modified,
            b.high.fit.ks_modified,
            b.low.fit.ks_modified
        ),
    )
}

fn semiclassical_peaks(delta: f64, seed: u64) -> (PeakStructure, f64) {
    let p = paper().with_noise(0.03).with_signal(0.1, delta);
    let (_, d) = switching_run(&p, &SdeConfig::new(SC_DT, 5e5, seed, SC_STRIDE)).unwrap();
    let high = label_stats(&[d], Label::High);
    (residence_peak_structure(&high, 2.0 * PI / delta), high.tau_bar)
}

fn criterion_6(lab: &Lab) -> Outcome {
    let f0 = optimal_frequency(lab.baseline().pooled.tau_bar);
    let (at_f0, tau_f0) = semiclassical_peaks(f0, derive_seeds(6, 2)[0]);
    let (at_7f0, _) = semiclassical_peaks(7.0 * f0, derive_seeds(6, 2)[1]);
    let matched = at_7f0.matched().count();
    let baseline = exponential_window_mass(tau_f0, at_f0.signal_period);
    outcome(
        at_f0.first_peak_mass > 0.5 && matched >= 3,
        format!(
            "f0 = {f0:.5}: first-peak mass {:.3} (exponential {baseline:.3}); 7 f0: {matched} matched peaks of {} ({:.0}%)",
            at_f0.first_peak_mass,
            at_7f0.peaks.len(),
            100.0 * at_7f0.matched_fraction
        ),
    )
}

fn criterion_7(_: &Lab) -> Outcome {
    let p = paper().with_signal(0.1, 0.008);
    let noise = log_spaced(0.005, 0.3, 12);
    let cfg = SdeConfig::new(SC_DT, 1e5, 0, SC_STRIDE);
    let points = snr_sweep(&p, &noise, &cfg, &derive_seeds(7, 10), SnrSource::Telegraph, Window::Rectangular).unwrap();
    let best = (0..points.len()).max_by(|&i, &j| points[i].snr_db.total_cmp(&points[j].snr_db)).unwrap();
    let peak = points[best];
    let interior = best > 0 && best + 1 < points.len();
    let curve: Vec<String> = points.iter().map(|q| format!("{:.1}", q.snr_db)).collect();
    outcome(
        interior && (0.02..=0.12).contains(&peak.noise),
        format!("maximum {:.2} dB at D = {:.4}; SNR(D) = [{}]", peak.snr_db, peak.noise, curve.join(", ")),
    )
}

fn criterion_8(_: &Lab) -> Outcome {
    let noise = [0.02, 0.03, 0.04, 0.05, 0.06];
    let cfg = SdeConfig::new(SC_DT, 1e5, 0, SC_STRIDE);
    let scan = kramers_scan(&paper(), &noise, &cfg, &derive_seeds(8, 4)).unwrap();
    let fit = scan.fit.unwrap();
    let flagged = scan.points.iter().filter(|q| q.flagged).count();
    outcome(
        fit.r_squared > 0.95 && flagged == 0,
        format!(
            "ln tau = {:.3} + {:.4}/D, R^2 = {:.4}, {flagged} flagged points",
            fit.intercept, fit.slope, fit.r_squared
        ),
    )
}

fn criterion_9(lab: &Lab) -> Outcome {
    let p = paper();
    let (lo, hi) = bistable_region(&p, (1.5, 3.5), 1e-5).unwrap().unwrap();
    let level = branch_midpoint(&p, 0.5 * (lo + hi)).unwrap().unwrap();
    let (e1s, reports) = lab.sweep();
    let re_a: Vec<f64> = reports.iter().map(|r| r.a.re).collect();
    let crossing = level_crossing(e1s, &re_a, level);
    let values: Vec<String> = re_a.iter().map(|a| format!("{a:.3}")).collect();
    outcome(
        crossing.is_some_and(|e| (2.45..=2.65).contains(&e)),
        format!("midpoint {level:.4} crossed at E1 = {crossing:?}; <a> = [{}] at N = {STEADY_FOCK}", values.join(", ")),
    )
}

fn criterion_10(lab: &Lab) -> Outcome {
    let grid = WignerGrid::new((-2.5, 5.5), (-3.0, 3.0), 81, 81);
    let counts: Vec<usize> = [2.25, 2.55]
        .iter()
        .map(|&e1| {
            let rho = reduce_cavity(&lab.steady_at(e1).state.rho, STEADY_FOCK);
            wigner(&rho, &grid).peaks(0.05).len()
        })
        .collect();
    outcome(counts == [1, 2], format!("peaks: {} at E1 = 2.25, {} at E1 = 2.55", counts[0], counts[1]))
}

fn criterion_11(lab: &Lab) -> Outcome {
    let j = lab.jump_run();
    let high = j.high_stats();
    let switches = j.jumps.field.switches.len();
    let stride = j.run.record.record_interval();
    let a = high.fit.scale;
    let pass = switches >= 10 && (19.0..=45.0).contains(&a) && j.jumps.lag.abs() <= stride + 1e-12;
    let t = j.run.record.samples.last().map_or(0.0, |s| s.t);
    outcome(
        pass,
        format!(
            "T = {t:.0}: {switches} field jumps, a = {a:.1} from {} H dwells, atom lag {:.2} (stride {stride}), correlation {:.3}, per-switch coincidence {}/{}",
            high.durations.len(),
            j.jumps.lag,
            j.jumps.lag_correlation,
            j.jumps.coincidence.matched_first,
            j.jumps.coincidence.total_first
        ),
    )
}

fn criterion_12(lab: &Lab) -> Outcome {
    let rows: Vec<(f64, f64, f64)> = lab
        .sr_runs()
        .iter()
        .map(|(delta, j)| {
            let high = j.high_stats();
            let period = 2.0 * PI / delta;
            let s = residence_peak_structure(&high, period);
            (*delta, s.first_peak_mass, exponential_window_mass(high.tau_bar, period))
        })
        .collect();
    let pass = rows[0].1 > rows[1].1 && rows[0].1 > rows[2].1;
    let detail: Vec<String> = rows
        .iter()
        .map(|(d, m, e)| format!("delta {d:.4}: mass {m:.3} (exponential {e:.3})"))
        .collect();
    outcome(pass, detail.join("; "))
}

fn criterion_13(lab: &Lab) -> Outcome {
    let mut checked = 0;
    let mut bad = 0;
    let mut worst = Hygiene {
        trace_error: 0.0,
        hermiticity_error: 0.0,
        min_eigenvalue: f64::INFINITY,
        top_fock_population: 0.0,
    };
    let mut visit = |h: &Hygiene| {
        checked += 1;
        if !h.is_valid(TRUNCATION_TOLERANCE) {
            bad += 1;
        }
        worst.trace_error = worst.trace_error.max(h.trace_error);
        worst.hermiticity_error = worst.hermiticity_error.max(h.hermiticity_error);
        worst.min_eigenvalue = worst.min_eigenvalue.min(h.min_eigenvalue);
        worst.top_fock_population = worst.top_fock_population.max(h.top_fock_population);
    };
    for r in &lab.sweep().1 {
        visit(&r.state.hygiene());
    }
    visit(&lab.steady_at(2.25).state.hygiene());
    let runs = std::iter::once(lab.jump_run()).chain(lab.sr_runs().iter().map(|(_, j)| j));
    for j in runs {
        for s in &j.run.snapshots {
            visit(&s.hygiene);
        }
        visit(&j.run.final_state.hygiene());
    }
    outcome(
        bad == 0 && checked > 8,
        format!(
            "{checked} states, {bad} invalid; worst trace {:.1e}, hermiticity {:.1e}, min eigenvalue {:.1e}, top Fock {:.1e}",
            worst.trace_error, worst.hermiticity_error, worst.min_eigenvalue, worst.top_fock_population
        ),
    )
}

fn criterion_14(_: &Lab) -> Outcome {
    let mut worst: f64 = 0.0;
    for e1 in [0.3, 1.0, 2.24, 4.0] {
        let p = SystemParams::new(1.0, 10.0, 0.0).with_e1(e1);
        let roots = steady_states(&p, e1).unwrap();
        worst = worst.max((roots[0].alpha - 2.0 * e1 / p.kappa).abs());
        if roots.len() != 1 {
            worst = f64::INFINITY;
        }
    }
    let (n, e1) = (30, 1.0);
    let ops = build_operators(n).unwrap();
    let p = SystemParams::new(1.0, 10.0, 0.0).with_e1(e1);
    let ss = me_steady_state(&ops, &p, &SteadyOptions::default()).unwrap();
    let fidelity = fidelity_with_pure(&reduce_cavity(&ss.state.rho, n), &oracle_coherent(2.0 * e1 / p.kappa, n));
    outcome(
        worst <= 1e-9 && fidelity > 0.999,
        format!("fixed point error {worst:.1e}; fidelity with |2> = {fidelity:.9} at N = {n}"),
    )
}

fn main() {
    let selected: Option<Vec<usize>> = std::env::var("JCSR_CRITERIA")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let lab = Lab {
        full: std::env::var("JCSR_FULL").is_ok_and(|v| v == "1"),
        ..Lab::default()
    };
    let criteria: [fn(&Lab) -> Outcome; 14] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
        criterion_13,
        criterion_14,
    ];
    let mut unexpected = Vec::new();
    for (i, check) in criteria.iter().enumerate() {
        let n = i + 1;
        if selected.as_ref().is_some_and(|s| !s.contains(&n)) {
            continue;
        }
        let start = Instant::now();
        let o = check(&lab);
        let known = KNOWN_FAILING.iter().find(|(k, _)| *k == n);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2}: {verdict} {} [{:.1} s]", o.detail, start.elapsed().as_secs_f64());
        match (o.pass, known) {
            (false, Some((_, why))) => println!("              known failure: {why}"),
            (false, None) => unexpected.push(n),
            (true, Some(_)) => println!("              listed as known failing but passed"),
            (true, None) => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
