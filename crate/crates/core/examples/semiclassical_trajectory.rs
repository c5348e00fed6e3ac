//! A noisy Langevin run from the low branch: switching count, occupation of
//! both wells and whether the signal alone would switch the system.
//!
//! `cargo run --release --example semiclassical_trajectory -- [D] [T] [seed]`

use jcsr::analysis::{detect_transitions, low_branch_state, Binning, Histogram, Thresholds};
use jcsr::model::SystemParams;
use jcsr::semiclassical::{integrate, threshold_check, SdeConfig};

fn main() -> jcsr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).map_or(default, |s| s.parse().expect("number"));
    let p = SystemParams::default().with_noise(arg(0, 0.04));
    let cfg = SdeConfig::new(1e-3, arg(1, 5000.0), arg(2, 1.0) as u64, 100);

    let tr = integrate(&p, low_branch_state(&p)?, &cfg)?;
    let d = detect_transitions(&tr.times(), &tr.amplitude(), Thresholds::for_params(&p)?)?;
    println!("{} records, {} switches, {} inversion excursions", tr.records.len(), d.switches.len(), tr.excursions);
    let h = Histogram::build(&tr.amplitude(), Binning::Count(40));
    for (c, n) in h.centers().iter().zip(&h.counts) {
        println!("{c:6.3} {}", "#".repeat((*n as usize * 300 / tr.records.len()).max(usize::from(*n > 0))));
    }
    for (delta, e2) in [(0.008, 0.05), (0.008, 0.5)] {
        println!("E2 = {e2} at delta = {delta}: {:?}", threshold_check(&p, delta, e2)?);
    }
    Ok(())
}
