//! One homodyne-conditioned trajectory; prints wall time per step, the
//! worst snapshot hygiene and a coarse histogram of Re<a>.
//!
//! `cargo run --release --example quantum_trajectory -- [E1] [N] [T] [scheme] [seed] [csv]`

use std::time::Instant;

use jcsr::analysis::{Binning, Histogram};
use jcsr::model::SystemParams;
use jcsr::quantum::{build_operators, sme_integrate, QuantumState, SmeConfig, SmeScheme};

fn main() -> jcsr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let e1: f64 = arg(0, "2.55").parse().expect("E1");
    let fock_dim: usize = arg(1, "40").parse().expect("N");
    let duration: f64 = arg(2, "200").parse().expect("T");
    let scheme = match arg(3, "kraus").as_str() {
        "euler" => SmeScheme::EulerMaruyama,
        _ => SmeScheme::Kraus,
    };
    let seed: u64 = arg(4, "1").parse().expect("seed");
    let csv = args.get(5);

    let ops = build_operators(fock_dim)?;
    let p = SystemParams::default().with_e1(e1);
    let cfg = SmeConfig {
        scheme,
        snapshot_every: 10,
        ..SmeConfig::new(1e-3, duration, seed, 100)
    };
    let start = Instant::now();
    let run = sme_integrate(&ops, &p, &QuantumState::ground(&ops), &cfg)?;
    let elapsed = start.elapsed().as_secs_f64();
    println!("{:.2} us/step", 1e6 * elapsed / cfg.steps() as f64);
    let worst = run
        .snapshots
        .iter()
        .map(|s| s.hygiene.min_eigenvalue)
        .fold(f64::INFINITY, f64::min);
    let top = run
        .snapshots
        .iter()
        .map(|s| s.hygiene.top_fock_population)
        .fold(0.0, f64::max);
    println!("min eigenvalue {worst:.3e}, max top-Fock population {top:.3e}, max trace drift {:.3e}", run.record.max_trace_drift);
    if let Some(path) = csv {
        run.record.write_csv(std::fs::File::create(path)?)?;
    }
    let h = Histogram::build(&run.record.re_a(), Binning::Count(30));
    for (c, n) in h.centers().iter().zip(&h.counts) {
        println!("{c:7.3} {}", "#".repeat((*n as usize * 200 / run.record.samples.len()).max(usize::from(*n > 0))));
    }
    Ok(())
}
