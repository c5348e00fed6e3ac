use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Engine, RunConfig};
use super::output::OutputDir;
use super::Command;
use crate::analysis::{
    detect_transitions, kramers_scan, low_branch_state, optimal_frequency, quantum_jumps, residence_peak_structure,
    snr_sweep, stats_from_durations, Binning, DwellRecord, Histogram, JumpAnalysis, Label, ResidenceStats, Thresholds,
    Window,
};
use crate::error::{Error, Result};
use crate::model::{
    bistable_region, branch_midpoint, derived_params, potential_extrema_on, steady_states, AlphaGrid, ExtremumKind,
    Stability, SystemParams,
};
use crate::quantum::{
    build_operators, me_steady_state, me_steady_sweep, reduce_cavity, wigner, HomodyneRecord, OperatorSet,
    QuantumState, SmeCheckpoint, SmeConfig, SmeIntegrator, SmeRun, SteadyOptions, EXPECTATION_CSV_HEADER,
    WIGNER_CSV_HEADER,
};
use crate::semiclassical::{integrate, integrate_into, CsvRecordSink, SdeConfig};

/// Steps between wall-clock checks of a quantum run.
const CHECK_EVERY: u64 = 10_000;
/// Prominence threshold for Wigner peaks, relative to the maximum.
const WIGNER_PROMINENCE: f64 = 0.05;

pub(super) fn dispatch(command: &Command, cfg: &RunConfig) -> Result<()> {
    match command {
        Command::SteadyState => steady_state(cfg),
        Command::Potential => potential(cfg),
        Command::Trajectory { resume } => trajectory(cfg, *resume),
        Command::Residence => residence(cfg),
        Command::SnrSweep => snr(cfg),
        Command::Kramers => kramers(cfg),
        Command::Wigner => wigner_cmd(cfg),
    }
}

fn linspace([lo, hi]: [f64; 2], points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn sde_config(cfg: &RunConfig, seed: u64) -> SdeConfig {
    let n = &cfg.numerics;
    SdeConfig {
        imaginary_noise: n.imaginary_noise,
        ..SdeConfig::new(n.dt, n.duration, seed, n.stride)
    }
}

fn sme_config(cfg: &RunConfig, seed: u64) -> SmeConfig {
    let n = &cfg.numerics;
    SmeConfig {
        scheme: n.scheme,
        truncation: n.truncation,
        snapshot_every: n.snapshot_every,
        ..SmeConfig::new(n.dt, n.duration, seed, n.stride)
    }
}

fn binning(cfg: &RunConfig) -> Binning {
    cfg.analysis.bin_width.map_or(Binning::FreedmanDiaconis, Binning::Width)
}

fn indexed(stem: &str, ext: &str, i: usize, count: usize) -> String {
    if count == 1 {
        format!("{stem}.{ext}")
    } else {
        format!("{stem}_{i}.{ext}")
    }
}

fn steady_state(cfg: &RunConfig) -> Result<()> {
    let e1s = linspace(cfg.analysis.e1_range, cfg.analysis.e1_points);
    let p = cfg.params;
    let hi = cfg.analysis.e1_range[1].max(p.e1);
    let region = bistable_region(&p, (0.0, 2.0 * hi + 1.0), 1e-4)?;
    match region {
        Some((a, b)) => println!("bistable region: E1 in [{a:.4}, {b:.4}]"),
        None => println!("no bistable region"),
    }
    let derived = derived_params(&p).ok();
    let mut out = OutputDir::create(&cfg.output.dir)?;
    let mut summary = json!({
        "bistable_region": region,
        "cooperativity": derived.map(|d| d.cooperativity),
        "saturation_photons": derived.map(|d| d.saturation_photons),
    });

    let mut rows = Vec::new();
    for &e1 in &e1s {
        for (k, r) in steady_states(&p, e1)?.iter().enumerate() {
            let stable = if r.stability == Stability::Stable { 1.0 } else { 0.0 };
            rows.push(vec![e1, k as f64, r.alpha, r.d0, r.p.re, r.p.im, stable]);
        }
    }
    out.table("branches.csv", "E1,branch,alpha,D0,re_p,im_p,stable", rows)?;

    if cfg.engine == Engine::Quantum {
        let ops = build_operators(cfg.fock_dim()?)?;
        let reports = me_steady_sweep(&ops, &SystemParams { e2: 0.0, ..p }, &e1s, &SteadyOptions::default())?;
        let re_a: Vec<f64> = reports.iter().map(|r| r.a.re).collect();
        out.table(
            "quantum_steady_state.csv",
            "E1,re_a,im_a,sigma_z,residual,top_fock",
            e1s.iter().zip(&reports).map(|(&e1, r)| {
                vec![e1, r.a.re, r.a.im, r.sigma_z, r.residual, r.state.top_fock_population()]
            }),
        )?;
        if let Some((a, b)) = region {
            if let Some(level) = branch_midpoint(&p, 0.5 * (a + b))? {
                let crossing = crate::analysis::level_crossing(&e1s, &re_a, level);
                if let Some(c) = crossing {
                    println!("quantum <a> crosses the branch midpoint {level:.4} at E1 = {c:.4}");
                }
                summary["quantum_midpoint_level"] = json!(level);
                summary["quantum_crossing_e1"] = json!(crossing);
            }
        }
    }
    out.finish("steady-state", cfg, &[], summary)?;
    Ok(())
}

fn potential(cfg: &RunConfig) -> Result<()> {
    let p = cfg.params;
    let covering = AlphaGrid::covering(&p);
    let grid = AlphaGrid {
        min: 0.0,
        max: cfg.analysis.alpha_max.unwrap_or(covering.max),
        points: cfg.analysis.alpha_points,
    };
    let profile = potential_extrema_on(&p, grid);
    let mut out = OutputDir::create(&cfg.output.dir)?;
    out.table(
        "potential.csv",
        "alpha,U,dU",
        profile.grid.iter().zip(&profile.values).map(|(&a, &u)| {
            vec![a, u, crate::model::potential_derivative(&p, a)]
        }),
    )?;
    out.write("extrema.csv", |w| {
        writeln!(w, "alpha,U,kind")?;
        for e in &profile.extrema {
            let kind = if e.kind == ExtremumKind::Min { "min" } else { "max" };
            writeln!(w, "{:?},{:?},{kind}", e.alpha, e.value)?;
        }
        Ok(())
    })?;
    for e in &profile.extrema {
        println!("{:?} at alpha = {:.6}, U = {:.6}", e.kind, e.alpha, e.value);
    }
    let roots: Vec<f64> = steady_states(&p, p.e1)?.iter().map(|r| r.alpha).collect();
    out.finish(
        "potential",
        cfg,
        &[],
        json!({ "extrema": profile.extrema, "barriers": profile.barriers(), "steady_roots": roots }),
    )?;
    Ok(())
}

/// One quantum trajectory, checkpointed to `checkpoint` every
/// `numerics.checkpoint_seconds` of wall time.
fn quantum_run(
    cfg: &RunConfig,
    ops: &OperatorSet,
    seed: u64,
    checkpoint: &Path,
    resume: bool,
) -> Result<SmeRun> {
    let sme = sme_config(cfg, seed);
    let mut it = if resume && checkpoint.exists() {
        let cp: SmeCheckpoint = serde_json::from_reader(BufReader::new(File::open(checkpoint)?))?;
        if cp.config != sme || cp.params != cfg.params || cp.fock_dim != ops.fock_dim() {
            return Err(Error::Config(format!(
                "{} was written by a different configuration",
                checkpoint.display()
            )));
        }
        SmeIntegrator::resume(ops, cp)?
    } else {
        SmeIntegrator::new(ops, &cfg.params, &QuantumState::ground(ops), &sme)?
    };
    let interval = Duration::from_secs_f64(cfg.numerics.checkpoint_seconds.max(0.0));
    let mut last = Instant::now();
    while !it.is_finished() {
        it.advance(CHECK_EVERY)?;
        if !interval.is_zero() && last.elapsed() >= interval && !it.is_finished() {
            let tmp = checkpoint.with_extension("json.tmp");
            let mut w = BufWriter::new(File::create(&tmp)?);
            serde_json::to_writer(&mut w, &it.checkpoint())?;
            w.flush()?;
            drop(w);
            fs::rename(&tmp, checkpoint)?;
            last = Instant::now();
        }
    }
    if checkpoint.exists() {
        fs::remove_file(checkpoint)?;
    }
    Ok(it.finish())
}

fn quantum_runs(cfg: &RunConfig, dir: &Path, seeds: &[u64], resume: bool) -> Result<Vec<SmeRun>> {
    let ops = build_operators(cfg.fock_dim()?)?;
    fs::create_dir_all(dir)?;
    seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| quantum_run(cfg, &ops, seed, &dir.join(format!("checkpoint_{i}.json")), resume))
        .collect()
}

fn after_burn_in(record: &HomodyneRecord, burn_in: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let kept = record.samples.iter().filter(|s| s.t >= burn_in);
    let mut t = Vec::new();
    let mut a = Vec::new();
    let mut z = Vec::new();
    for s in kept {
        t.push(s.t);
        a.push(s.a.re);
        z.push(s.sigma_z);
    }
    (t, a, z)
}

#[derive(Serialize)]
struct QuantumRunSummary {
    seed: u64,
    max_trace_drift: f64,
    snapshots: usize,
    min_eigenvalue: Option<f64>,
    max_top_fock_population: Option<f64>,
    all_snapshots_valid: bool,
    final_a: [f64; 2],
    final_sigma_z: f64,
}

fn summarize_quantum(run: &SmeRun, truncation: f64) -> QuantumRunSummary {
    let fold = |f: fn(&crate::quantum::Hygiene) -> f64, pick: fn(f64, f64) -> f64| {
        run.snapshots.iter().map(|s| f(&s.hygiene)).reduce(pick)
    };
    let last = run.record.samples.last();
    QuantumRunSummary {
        seed: run.record.seed,
        max_trace_drift: run.record.max_trace_drift,
        snapshots: run.snapshots.len(),
        min_eigenvalue: fold(|h| h.min_eigenvalue, f64::min),
        max_top_fock_population: fold(|h| h.top_fock_population, f64::max),
        all_snapshots_valid: run.snapshots.iter().all(|s| s.hygiene.is_valid(truncation)),
        final_a: last.map_or([f64::NAN; 2], |s| [s.a.re, s.a.im]),
        final_sigma_z: last.map_or(f64::NAN, |s| s.sigma_z),
    }
}

fn trajectory(cfg: &RunConfig, resume: bool) -> Result<()> {
    let seeds = cfg.seeds();
    let mut out = OutputDir::create(&cfg.output.dir)?;
    let summary = match cfg.engine {
        Engine::Semiclassical => {
            let init = low_branch_state(&cfg.params)?;
            let names: Vec<String> = (0..seeds.len()).map(|i| indexed("trajectory", "csv", i, seeds.len())).collect();
            let results: Vec<Value> = seeds
                .par_iter()
                .zip(&names)
                .map(|(&seed, name)| {
                    let file = BufWriter::new(File::create(out.path(name))?);
                    let mut sink = CsvRecordSink::new(file)?;
                    let run = integrate_into(&cfg.params, init, &sde_config(cfg, seed), &mut sink)?;
                    sink.into_inner().flush()?;
                    Ok(json!({ "seed": seed, "excursions": run.excursions, "final_state": run.final_state }))
                })
                .collect::<Result<_>>()?;
            for name in &names {
                out.register(name);
            }
            json!({ "runs": results })
        }
        Engine::Quantum => {
            let runs = quantum_runs(cfg, &cfg.output.dir, &seeds, resume)?;
            let mut results = Vec::new();
            for (i, run) in runs.iter().enumerate() {
                let name = indexed("expectations", "csv", i, runs.len());
                out.write(&name, |w| run.record.write_csv(w))?;
                let mut entry = serde_json::to_value(summarize_quantum(run, cfg.numerics.truncation))?;
                let (t, a, z) = after_burn_in(&run.record, cfg.numerics.burn_in);
                if let Ok(j) = quantum_jumps(&t, &a, &z, run.record.record_interval()) {
                    entry["jumps"] = json!({
                        "field_switches": j.field.switches.len(),
                        "atom_switches": j.atom.switches.len(),
                        "coincidence": j.coincidence,
                        "lag": j.lag,
                        "lag_correlation": j.lag_correlation,
                    });
                }
                results.push(entry);
            }
            json!({ "runs": results, "header": EXPECTATION_CSV_HEADER })
        }
    };
    out.finish("trajectory", cfg, &seeds, summary)?;
    Ok(())
}

fn write_histogram(out: &mut OutputDir, name: &str, h: &Histogram) -> Result<()> {
    out.table(
        name,
        "bin_left,bin_right,count",
        h.edges.windows(2).zip(&h.counts).map(|(e, &c)| vec![e[0], e[1], c as f64]),
    )
}

fn write_dwells(out: &mut OutputDir, records: &[DwellRecord]) -> Result<()> {
    out.write("dwells.csv", |w| {
        writeln!(w, "trajectory,label,start,duration")?;
        for (i, d) in records.iter().enumerate() {
            for s in &d.segments {
                writeln!(w, "{i},{},{:?},{:?}", s.label.as_str(), s.start, s.duration)?;
            }
        }
        Ok(())
    })
}

fn stats_summary(s: &ResidenceStats) -> Value {
    json!({
        "count": s.durations.len(),
        "tau_bar": s.tau_bar,
        "stderr": s.stderr,
        "fit": s.fit,
    })
}

/// Per-label and pooled residence statistics plus the peak structure of the
/// modulated run.
fn residence_outputs(cfg: &RunConfig, out: &mut OutputDir, records: &[DwellRecord]) -> Result<Value> {
    write_dwells(out, records)?;
    let mut summary = json!({});
    let mut per_label = Vec::new();
    for label in [Label::High, Label::Low] {
        let durations: Vec<f64> = records.iter().flat_map(|d| d.durations(label)).collect();
        let s = stats_from_durations(durations, label, binning(cfg))?;
        write_histogram(out, &format!("residence_{}.csv", label.as_str()), &s.histogram)?;
        summary[label.as_str()] = stats_summary(&s);
        per_label.push(s);
    }
    let (high, low) = (&per_label[0], &per_label[1]);
    let pooled: Vec<f64> = records
        .iter()
        .flat_map(|d| d.segments.iter().map(|s| s.duration))
        .collect();
    let all = stats_from_durations(pooled, Label::High, binning(cfg))?;
    summary["pooled"] = stats_summary(&all);
    summary["tau_ratio_high_low"] = json!(high.tau_bar / low.tau_bar);
    summary["optimal_frequency"] = json!(optimal_frequency(all.tau_bar));
    let p = cfg.params;
    if p.e2 > 0.0 && p.delta > 0.0 {
        let period = 2.0 * std::f64::consts::PI / p.delta;
        let peaks = residence_peak_structure(high, period);
        write_histogram(out, "residence_peaks_H.csv", &peaks.histogram)?;
        summary["peak_structure"] = json!({
            "signal_period": period,
            "peaks": peaks.peaks,
            "matched_fraction": peaks.matched_fraction,
            "first_peak_mass": peaks.first_peak_mass,
        });
    }
    println!(
        "tau_bar: H {:.4}, L {:.4}, pooled {:.4}; exponential KS (H, L) {}, {}",
        high.tau_bar,
        low.tau_bar,
        all.tau_bar,
        if high.fit.ks_pass { "passes" } else { "fails" },
        if low.fit.ks_pass { "passes" } else { "fails" }
    );
    Ok(summary)
}

fn residence(cfg: &RunConfig) -> Result<()> {
    let seeds = cfg.seeds();
    let burn_in = cfg.numerics.burn_in;
    match cfg.engine {
        Engine::Semiclassical => {
            let p = cfg.params;
            let thresholds = match cfg.analysis.thresholds()? {
                Some(t) => t,
                None => Thresholds::for_params(&p)?,
            };
            let init = low_branch_state(&p)?;
            let records: Vec<DwellRecord> = seeds
                .par_iter()
                .map(|&seed| {
                    let tr = integrate(&p, init, &sde_config(cfg, seed))?;
                    let (t, x): (Vec<f64>, Vec<f64>) = tr
                        .records
                        .iter()
                        .filter(|r| r.t >= burn_in)
                        .map(|r| (r.t, r.re_alpha))
                        .unzip();
                    detect_transitions(&t, &x, thresholds)
                })
                .collect::<Result<_>>()?;
            let mut out = OutputDir::create(&cfg.output.dir)?;
            let mut summary = residence_outputs(cfg, &mut out, &records)?;
            summary["thresholds"] = json!(thresholds);
            out.finish("residence", cfg, &seeds, summary)?;
        }
        Engine::Quantum => {
            let runs = quantum_runs(cfg, &cfg.output.dir, &seeds, false)?;
            let jumps: Vec<JumpAnalysis> = runs
                .iter()
                .map(|run| {
                    let (t, a, z) = after_burn_in(&run.record, burn_in);
                    quantum_jumps(&t, &a, &z, run.record.record_interval())
                })
                .collect::<Result<_>>()?;
            let records: Vec<DwellRecord> = jumps.iter().map(|j| j.field.clone()).collect();
            let mut out = OutputDir::create(&cfg.output.dir)?;
            let mut summary = residence_outputs(cfg, &mut out, &records)?;
            summary["runs"] = json!(runs
                .iter()
                .zip(&jumps)
                .map(|(r, j)| json!({
                    "hygiene": summarize_quantum(r, cfg.numerics.truncation),
                    "field_thresholds": j.field.thresholds,
                    "atom_thresholds": j.atom.thresholds,
                    "coincidence": j.coincidence,
                    "lag": j.lag,
                    "lag_correlation": j.lag_correlation,
                }))
                .collect::<Vec<_>>());
            out.finish("residence", cfg, &seeds, summary)?;
        }
    }
    Ok(())
}

fn semiclassical_only(cfg: &RunConfig, command: &str) -> Result<()> {
    if cfg.engine == Engine::Quantum {
        return Err(Error::Config(format!("{command} runs on the semiclassical engine only")));
    }
    Ok(())
}

fn snr(cfg: &RunConfig) -> Result<()> {
    semiclassical_only(cfg, "snr-sweep")?;
    let seeds = cfg.seeds();
    let noise = &cfg.analysis.noise_values;
    let points = snr_sweep(
        &cfg.params,
        noise,
        &sde_config(cfg, 0),
        &seeds,
        cfg.analysis.snr_source,
        Window::Rectangular,
    )?;
    let mut out = OutputDir::create(&cfg.output.dir)?;
    out.table("snr.csv", "D,snr_db,stderr", points.iter().map(|p| vec![p.noise, p.snr_db, p.stderr]))?;
    let best = points.iter().max_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
    if let Some(b) = best {
        println!("SNR maximum {:.2} dB at D = {}", b.snr_db, b.noise);
    }
    out.finish(
        "snr-sweep",
        cfg,
        &seeds,
        json!({ "points": points, "best_noise": best.map(|b| b.noise) }),
    )?;
    Ok(())
}

fn kramers(cfg: &RunConfig) -> Result<()> {
    semiclassical_only(cfg, "kramers")?;
    let seeds = cfg.seeds();
    let scan = kramers_scan(&cfg.params, &cfg.analysis.noise_values, &sde_config(cfg, 0), &seeds)?;
    let mut out = OutputDir::create(&cfg.output.dir)?;
    out.table(
        "kramers.csv",
        "D,tau_bar,stderr",
        scan.points.iter().map(|p| vec![p.noise, p.tau_bar, p.stderr]),
    )?;
    let barriers = crate::model::potential_extrema(&SystemParams { e2: 0.0, ..cfg.params }).barriers();
    if let Some(f) = scan.fit {
        println!("ln tau_bar = {:.4} + {:.5} / D, R^2 = {:.4}", f.intercept, f.slope, f.r_squared);
    }
    out.finish(
        "kramers",
        cfg,
        &seeds,
        json!({ "points": scan.points, "fit": scan.fit, "potential_barriers": barriers }),
    )?;
    Ok(())
}

fn wigner_cmd(cfg: &RunConfig) -> Result<()> {
    let ops = build_operators(cfg.fock_dim()?)?;
    let grid = cfg.analysis.wigner_grid();
    let mut fields = Vec::new();
    for &e1 in &cfg.analysis.wigner_e1 {
        let p = SystemParams { e1, e2: 0.0, ..cfg.params };
        let r = me_steady_state(&ops, &p, &SteadyOptions::default())?;
        let field = wigner(&reduce_cavity(&r.state.rho, ops.fock_dim()), &grid);
        if field.beyond_safe_radius {
            eprintln!(
                "warning: the grid reaches beyond the truncation-safe radius {:.3}",
                field.safe_radius
            );
        }
        fields.push((e1, r, field));
    }
    let mut out = OutputDir::create(&cfg.output.dir)?;
    let mut summary = Vec::new();
    for (e1, r, field) in &fields {
        out.write(&format!("wigner_E1_{e1}.csv"), |w| field.write_csv(w))?;
        let peaks = field.peaks(WIGNER_PROMINENCE);
        println!("E1 = {e1}: {} peak(s)", peaks.len());
        summary.push(json!({
            "e1": e1,
            "a": [r.a.re, r.a.im],
            "sigma_z": r.sigma_z,
            "peaks": peaks,
            "integral": field.integral(),
            "safe_radius": field.safe_radius,
            "beyond_safe_radius": field.beyond_safe_radius,
            "header": WIGNER_CSV_HEADER,
        }));
    }
    out.finish("wigner", cfg, &[], json!({ "fields": summary }))?;
    Ok(())
}
