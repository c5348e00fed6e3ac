//! Quantum jumps of a homodyne-conditioned trajectory: switching of the
//! field and of the atom, their residence times and their relative timing.
//!
//! `cargo run --release --example quantum_jumps -- [T] [seed] [E2] [delta]`

use jcsr::analysis::{quantum_jumps, residence_peak_structure, stats_from_durations, Binning, Label};
use jcsr::model::SystemParams;
use jcsr::quantum::{build_operators, sme_integrate, QuantumState, SmeConfig};

fn main() -> jcsr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).map_or(default, |s| s.parse().expect("number"));
    let p = SystemParams::default().with_e1(2.55).with_signal(arg(2, 0.0), arg(3, 0.0));
    let cfg = SmeConfig::new(1e-3, arg(0, 1000.0), arg(1, 7.0) as u64, 100);
    let ops = build_operators(50)?;

    let run = sme_integrate(&ops, &p, &QuantumState::ground(&ops), &cfg)?;
    let r = &run.record;
    let j = quantum_jumps(&r.times(), &r.re_a(), &r.sigma_z(), r.record_interval())?;
    println!(
        "field: {} jumps between {:.3} and {:.3}",
        j.field.switches.len(),
        j.field.thresholds.high_to_low,
        j.field.thresholds.low_to_high
    );
    println!("atom:  {} jumps", j.atom.switches.len());
    println!("atom follows the field by {:.2} (correlation {:.3})", j.lag, j.lag_correlation);
    let s = stats_from_durations(j.durations(), Label::High, Binning::FreedmanDiaconis)?;
    println!("residence scale a = {:.1} from {} dwells", s.fit.scale, s.durations.len());
    if p.e2 > 0.0 && p.delta > 0.0 {
        let peaks = residence_peak_structure(&s, 2.0 * std::f64::consts::PI / p.delta);
        println!("mass near T_signal/2: {:.3}", peaks.first_peak_mass);
    }
    Ok(())
}
