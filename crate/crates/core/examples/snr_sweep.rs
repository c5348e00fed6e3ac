//! Signal-to-noise ratio of the switching output against noise strength:
//! the stochastic-resonance curve.
//!
//! `cargo run --release --example snr_sweep -- [E2] [delta] [T] [seeds]`

use jcsr::analysis::{log_spaced, snr_sweep, SnrSource, Window};
use jcsr::model::SystemParams;
use jcsr::seed::derive_seeds;
use jcsr::semiclassical::SdeConfig;

fn main() -> jcsr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).map_or(default, |s| s.parse().expect("number"));
    let p = SystemParams::default().with_signal(arg(0, 0.1), arg(1, 0.008));
    let cfg = SdeConfig::new(1e-3, arg(2, 2e4), 0, 100);
    let seeds = derive_seeds(5, arg(3, 4.0) as usize);
    let noise = log_spaced(0.005, 0.3, 12);

    let points = snr_sweep(&p, &noise, &cfg, &seeds, SnrSource::Telegraph, Window::Rectangular)?;
    println!("D,snr_db,stderr,silent_runs");
    for q in &points {
        println!("{:.5},{:.3},{:.3},{}", q.noise, q.snr_db, q.stderr, q.silent_runs);
    }
    Ok(())
}
