//! The average of many conditioned trajectories reproduces the unconditional
//! master equation.
//!
//! `cargo run --release --example ensemble_vs_master -- [trajectories]`

use jcsr::model::SystemParams;
use jcsr::quantum::{build_operators, me_evolve, sme_ensemble, QuantumState, SmeConfig};
use jcsr::seed::derive_seeds;

fn main() -> jcsr::Result<()> {
    let m: usize = std::env::args().nth(1).map_or(200, |s| s.parse().expect("trajectories"));
    let ops = build_operators(12)?;
    let p = SystemParams::default().with_e1(1.2).with_signal(0.3, 0.5);
    let init = QuantumState::ground(&ops);
    let cfg = SmeConfig::new(1e-3, 4.0, 0, 500);

    let (reference, _) = me_evolve(&ops, &p, &init, 1e-3, 4.0, 500)?;
    let runs = sme_ensemble(&ops, &p, &init, &cfg, &derive_seeds(99, m))?;
    println!("t,me_re_a,mean_re_a,stderr");
    for (k, r) in reference.iter().skip(1).enumerate() {
        let xs: Vec<f64> = runs.iter().map(|run| run.record.samples[k].a.re).collect();
        let mean = xs.iter().sum::<f64>() / m as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        println!("{:.1},{:.5},{:.5},{:.5}", r.t, r.a.re, mean, (var / m as f64).sqrt());
    }
    Ok(())
}
