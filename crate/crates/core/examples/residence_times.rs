//! Residence-time statistics of an ensemble of runs. With a signal the
//! histogram develops peaks at odd multiples of half its period.
//!
//! `cargo run --release --example residence_times -- [D] [E2] [delta] [T] [runs]`

use jcsr::analysis::{
    optimal_frequency, residence_peak_structure, stats_from_durations, switching_ensemble, Binning, Label,
};
use jcsr::model::SystemParams;
use jcsr::seed::derive_seeds;
use jcsr::semiclassical::SdeConfig;

fn main() -> jcsr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).map_or(default, |s| s.parse().expect("number"));
    let p = SystemParams::default()
        .with_noise(arg(0, 0.03))
        .with_signal(arg(1, 0.0), arg(2, 0.0));
    let cfg = SdeConfig::new(1e-3, arg(3, 5e4), 0, 100);
    let seeds = derive_seeds(2024, arg(4, 4.0) as usize);

    let records = switching_ensemble(&p, &cfg, &seeds)?;
    for label in [Label::High, Label::Low] {
        let durations: Vec<f64> = records.iter().flat_map(|d| d.durations(label)).collect();
        let s = stats_from_durations(durations, label, Binning::FreedmanDiaconis)?;
        println!(
            "{label:?}: {} dwells, tau_bar = {:.1} +- {:.1}, KS {:.3} ({})",
            s.durations.len(),
            s.tau_bar,
            s.stderr,
            s.fit.ks_modified,
            if s.fit.ks_pass { "exponential" } else { "not exponential" }
        );
    }
    let all: Vec<f64> = records.iter().flat_map(|d| d.segments.iter().map(|s| s.duration)).collect();
    let s = stats_from_durations(all, Label::High, Binning::FreedmanDiaconis)?;
    println!("pooled a = {:.1}, f0 = {:.5}", s.fit.scale, optimal_frequency(s.tau_bar));

    if p.e2 > 0.0 && p.delta > 0.0 {
        let period = 2.0 * std::f64::consts::PI / p.delta;
        let peaks = residence_peak_structure(&s, period);
        println!("T_signal = {period:.1}, mass near T/2 = {:.3}", peaks.first_peak_mass);
        for k in peaks.peaks {
            println!("  peak at {:.1} (order {:?}), prominence {:.0}", k.location, k.order, k.prominence);
        }
    }
    Ok(())
}
